"""Bit-level simulation of the XOR feedback kernel.

One trial: Bob sends n uniform bits x; Alice receives y = x + e_A, Eve
receives z = x + e_E; Alice broadcasts c = v + y error-free. Bob decodes
c + x, Eve decodes c + z.

Every trial draws from its own generator, seeded by (seed, trial index),
and trials are aggregated as integer counts, so results do not depend on
how trials are spread over workers.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .entropy import LN2, DomainError, binary_entropy, check_crossover, concat
from .schemes import repetition_equivalent


class Payload(str, enum.Enum):
    UNIFORM = "uniform"
    CONSTANT_ZERO = "constant_zero"
    REPETITION_CODED = "repetition_coded"


@dataclass(frozen=True)
class SimConfig:
    n: int
    trials: int
    seed: int
    eps_b: float
    delta_b: float
    payload: Payload = Payload.UNIFORM
    k: int | None = None  # number of free bits for REPETITION_CODED

    def __post_init__(self):
        object.__setattr__(self, "payload", Payload(self.payload))
        object.__setattr__(self, "eps_b", check_crossover(self.eps_b, "eps_b"))
        object.__setattr__(self, "delta_b", check_crossover(self.delta_b, "delta_b"))
        if self.n < 1 or self.trials < 1:
            raise DomainError("n and trials must be >= 1")
        if self.payload is Payload.REPETITION_CODED:
            if self.k is None or self.k < 1 or self.n % self.k:
                raise DomainError("repetition_coded payload needs k >= 1 dividing n")
            if self.n // self.k < 2:
                raise DomainError("repetition_coded payload needs at least 2 copies per bit")

    @property
    def n_bits_total(self) -> int:
        return self.n * self.trials

    def as_dict(self) -> dict[str, Any]:
        return {"n": self.n, "trials": self.trials, "seed": self.seed, "eps_b": self.eps_b,
                "delta_b": self.delta_b, "payload": self.payload.value, "k": self.k}


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _bsc_noise(rng: np.random.Generator, p: float, n: int) -> np.ndarray:
    return (rng.random(n) < p).astype(np.uint8)


def simulate_trial(cfg: SimConfig, trial: int) -> dict[str, np.ndarray]:
    """All sequences of one kernel run, as uint8 arrays of length n."""
    rng = trial_rng(cfg.seed, trial)
    n = cfg.n
    x = rng.integers(0, 2, n, dtype=np.uint8)
    y = x ^ _bsc_noise(rng, cfg.eps_b, n)
    z = x ^ _bsc_noise(rng, cfg.delta_b, n)
    if cfg.payload is Payload.UNIFORM:
        v = rng.integers(0, 2, n, dtype=np.uint8)
    elif cfg.payload is Payload.CONSTANT_ZERO:
        v = np.zeros(n, dtype=np.uint8)
    else:
        v = np.repeat(rng.integers(0, 2, cfg.k, dtype=np.uint8), n // cfg.k)
    c = v ^ y
    return {"x": x, "y": y, "z": z, "v": v, "c": c, "bob": c ^ x, "eve": c ^ z}


# pairs whose 2x2 joint counts are accumulated
PAIRS = (("v", "c"), ("c", "z"), ("v", "bob"), ("v", "eve"))


def _joint(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.bincount(2 * a.astype(np.int64) + b, minlength=4).reshape(2, 2)


def _block_differences(cfg: SimConfig, s: np.ndarray) -> np.ndarray:
    """XOR of disjoint neighbouring pairs (0,1), (2,3), ... inside each repetition block.

    Disjoint pairs keep the samples independent, so the i.i.d. error bars apply.
    """
    blocks = s.reshape(cfg.k, cfg.n // cfg.k)
    m = blocks.shape[1] // 2
    return (blocks[:, 0:2 * m:2] ^ blocks[:, 1:2 * m:2]).ravel()


def _trial_counts(cfg: SimConfig, trial: int) -> dict[str, np.ndarray]:
    seq = simulate_trial(cfg, trial)
    out = {f"{a},{b}": _joint(seq[a], seq[b]) for a, b in PAIRS}
    out["ones_c"] = np.array([int(seq["c"].sum())])
    if cfg.payload is Payload.REPETITION_CODED:
        out["dc,dz"] = _joint(_block_differences(cfg, seq["c"]), _block_differences(cfg, seq["z"]))
    return out


def accumulate(cfg: SimConfig, workers: int = 1) -> dict[str, np.ndarray]:
    """Sum of per-trial count tables."""
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda t: _trial_counts(cfg, t), range(cfg.trials)))
    else:
        parts = [_trial_counts(cfg, t) for t in range(cfg.trials)]
    total = {key: np.zeros_like(val) for key, val in parts[0].items()}
    for part in parts:
        for key, val in part.items():
            total[key] += val
    return total


# ---------------------------------------------------------------------------
# plug-in mutual information on a 2x2 table


def plugin_mi(table: np.ndarray) -> float:
    """Plug-in mutual information, in bits, of a joint count table."""
    t = np.asarray(table, dtype=float)
    n = t.sum()
    p = t / n
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, p * np.log2(p / (px * py)), 0.0)
    return max(float(terms.sum()), 0.0)


def plugin_mi_std(table: np.ndarray) -> float:
    """Delta-method standard deviation of plugin_mi for a dependent pair."""
    t = np.asarray(table, dtype=float)
    n = t.sum()
    p = t / n
    px = p.sum(axis=1, keepdims=True)
    py = p.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.where(p > 0, np.log2(p / (px * py)), 0.0)
    mi = float((p * pmi).sum())
    var = float((p * pmi ** 2).sum()) - mi ** 2
    return math.sqrt(max(var, 0.0) / n)


def null_mi_std(n: int) -> float:
    """Std of plugin_mi for independent bits: 2 n ln2 I ~ chi2(1)."""
    return 1.0 / (math.sqrt(2.0) * n * LN2)


def mi_zero_threshold(n: int) -> float:
    """Bias bound 2/(n ln2) plus three null standard deviations."""
    return 2.0 / (n * LN2) + 3.0 * null_mi_std(n)


def consistent_with_zero(mi: float, n: int) -> bool:
    return mi <= mi_zero_threshold(n)


# ---------------------------------------------------------------------------


@dataclass
class SimResult:
    config: SimConfig
    bob_ber: float
    eve_ber: float
    broadcast_bias: float
    mi_estimate_bits: float
    mi_std: float
    mi_pair: str
    n_bits_total: int
    n_mi_samples: int
    counts: dict[str, np.ndarray] = field(repr=False, default_factory=dict)

    @staticmethod
    def binomial_std(p: float, n: int) -> float:
        return math.sqrt(p * (1.0 - p) / n)

    @property
    def bob_ber_std(self) -> float:
        return self.binomial_std(self.bob_ber, self.n_bits_total)

    @property
    def eve_ber_std(self) -> float:
        return self.binomial_std(self.eve_ber, self.n_bits_total)

    @property
    def broadcast_bias_std(self) -> float:
        return self.binomial_std(self.broadcast_bias, self.n_bits_total)

    @property
    def mi_threshold(self) -> float:
        return mi_zero_threshold(self.n_mi_samples)

    @property
    def mi_consistent_with_zero(self) -> bool:
        return consistent_with_zero(self.mi_estimate_bits, self.n_mi_samples)

    def mi(self, a: str, b: str) -> float:
        return plugin_mi(self.counts[f"{a},{b}"])

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config.as_dict(),
            "n_bits_total": self.n_bits_total,
            "bob_ber": self.bob_ber, "bob_ber_std": self.bob_ber_std,
            "eve_ber": self.eve_ber, "eve_ber_std": self.eve_ber_std,
            "broadcast_bias": self.broadcast_bias, "broadcast_bias_std": self.broadcast_bias_std,
            "mi_pair": self.mi_pair, "mi_estimate_bits": self.mi_estimate_bits,
            "mi_std": self.mi_std, "mi_samples": self.n_mi_samples,
            "mi_zero_threshold": self.mi_threshold,
            "mi_consistent_with_zero": self.mi_consistent_with_zero,
            "counts": {k: v.tolist() for k, v in self.counts.items()},
        }


def _result(cfg: SimConfig, counts: dict[str, np.ndarray], pair: str) -> SimResult:
    n = cfg.n_bits_total
    table = counts[pair]
    bob = counts["v,bob"]
    eve = counts["v,eve"]
    return SimResult(
        config=cfg,
        bob_ber=float(bob[0, 1] + bob[1, 0]) / n,
        eve_ber=float(eve[0, 1] + eve[1, 0]) / n,
        broadcast_bias=float(counts["ones_c"][0]) / n,
        mi_estimate_bits=plugin_mi(table),
        mi_std=plugin_mi_std(table),
        mi_pair=pair,
        n_bits_total=n,
        n_mi_samples=int(table.sum()),
        counts=counts,
    )


def run_kernel(cfg: SimConfig, workers: int = 1) -> SimResult:
    """Bob and Eve error rates for the payload v; MI reported between v and c."""
    return _result(cfg, accumulate(cfg, workers), "v,c")


def crypto_lemma_check(cfg: SimConfig, workers: int = 1) -> SimResult:
    """With a uniform payload the broadcast c is uniform and independent of v."""
    if cfg.payload is not Payload.UNIFORM:
        raise DomainError("crypto_lemma_check needs a uniform payload")
    return run_kernel(cfg, workers)


def leakage_pair(cfg: SimConfig) -> str:
    return "dc,dz" if cfg.payload is Payload.REPETITION_CODED else "c,z"


def leakage_demo(cfg: SimConfig, workers: int = 1) -> SimResult:
    """Information the broadcast c leaks to Eve's feedback copy z when v is not uniform.

    For constant-zero (and the uniform control) the estimate is per position,
    MI(c_i; z_i). A repetition-coded payload is uniform at every single
    position, so there the estimate uses XORs of neighbouring positions in a
    block, MI(c_i + c_{i+1}; z_i + z_{i+1}) over disjoint pairs, where v cancels.
    """
    return _result(cfg, accumulate(cfg, workers), leakage_pair(cfg))


def expected_leakage_mi(cfg: SimConfig) -> float:
    """Closed-form value of the statistic leakage_demo estimates."""
    rho = concat(cfg.eps_b, cfg.delta_b)
    if cfg.payload is Payload.UNIFORM:
        return 0.0
    if cfg.payload is Payload.CONSTANT_ZERO:
        return 1.0 - binary_entropy(rho)
    return 1.0 - binary_entropy(concat(rho, rho))


def repetition_mc(p: float, n_rep: int, trials: int, seed: int) -> tuple[float, float]:
    """Empirical crossover of majority decoding over n_rep copies, with its binomial std."""
    repetition_equivalent(p, n_rep)  # validates p and n_rep
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    errors = 0
    chunk = max(1, 2_000_000 // n_rep)
    done = 0
    while done < trials:
        m = min(chunk, trials - done)
        flips = rng.random((m, n_rep)) < p
        errors += int(np.count_nonzero(flips.sum(axis=1) > n_rep // 2))
        done += m
    rate = errors / trials
    return rate, math.sqrt(rate * (1.0 - rate) / trials)


def dump_bits(path: str | Path, bits: np.ndarray) -> None:
    """Write a 0/1 array as packed bytes, first bit in the least significant position."""
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    Path(path).write_bytes(packed.tobytes())


def load_bits(path: str | Path, n: int) -> np.ndarray:
    raw = np.frombuffer(Path(path).read_bytes(), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]
