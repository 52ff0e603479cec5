"""Exact equivocation of small syndrome-coset codes over a BSC.

The secret S is a uniformly drawn syndrome of a parity-check matrix H; the
transmitted word X is uniform in the coset {x : Hx = S}; Eve sees W = X + E
with E i.i.d. Bernoulli(delta). Words are stored as integers, coordinate i
in bit i.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .entropy import DomainError, check_crossover

MAX_N = 14
_CHUNK = 1 << 22  # entries per distance block


_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << MAX_N)], dtype=np.int8)


def _popcount(a: np.ndarray) -> np.ndarray:
    return _POPCOUNT[a]


def gf2_rank(rows: Sequence[int]) -> int:
    """Rank over GF(2) of row vectors given as integers."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


@dataclass(frozen=True)
class CosetCode:
    """Coset code defined by a full-row-rank (n - k_c) x n parity-check matrix."""

    parity_check: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(b) for b in row) for row in self.parity_check)
        object.__setattr__(self, "parity_check", rows)
        if not rows:
            raise DomainError("parity-check matrix needs at least one row")
        n = len(rows[0])
        if n == 0 or any(len(r) != n for r in rows):
            raise DomainError("parity-check rows must be non-empty and of equal length")
        if any(b not in (0, 1) for r in rows for b in r):
            raise DomainError("parity-check entries must be 0 or 1")
        if n > MAX_N:
            raise DomainError(f"block length {n} exceeds the enumeration cap of {MAX_N}")
        if gf2_rank(self.row_ints) != len(rows):
            raise DomainError("parity-check matrix is rank deficient over GF(2)")

    @classmethod
    def from_text(cls, text: str) -> "CosetCode":
        """Parse rows of '0'/'1' characters, one row per line; blank lines and '#' comments are skipped."""
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if set(line) - {"0", "1"}:
                raise DomainError(f"invalid parity-check row {line!r}")
            rows.append(tuple(int(ch) for ch in line))
        return cls(tuple(rows))

    def to_text(self) -> str:
        return "\n".join("".join(str(b) for b in row) for row in self.parity_check) + "\n"

    @property
    def n(self) -> int:
        return len(self.parity_check[0])

    @property
    def secret_bits(self) -> int:
        return len(self.parity_check)

    @property
    def k_c(self) -> int:
        return self.n - self.secret_bits

    @property
    def row_ints(self) -> list[int]:
        return [sum(b << i for i, b in enumerate(row)) for row in self.parity_check]

    def syndromes(self) -> np.ndarray:
        """Syndrome (as an integer) of every word 0 .. 2^n - 1."""
        words = np.arange(1 << self.n, dtype=np.int64)
        out = np.zeros_like(words)
        for j, r in enumerate(self.row_ints):
            out |= (_popcount(words & r) & 1) << j
        return out

    def codewords(self) -> np.ndarray:
        return np.flatnonzero(self.syndromes() == 0).astype(np.int64)

    def permuted(self, perm: Sequence[int]) -> "CosetCode":
        """Code with coordinate i moved to position perm[i]."""
        rows = []
        for row in self.parity_check:
            new = [0] * self.n
            for i, b in enumerate(row):
                new[perm[i]] = b
            rows.append(tuple(new))
        return CosetCode(tuple(rows))


@functools.lru_cache(maxsize=None)
def _distance_matrix(n: int) -> np.ndarray:
    words = np.arange(1 << n, dtype=np.int64)
    return _popcount(words[:, None] ^ words[None, :])


def _entropy_bits(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def _bsc_kernel(n: int, delta: float) -> np.ndarray:
    """p(w | x) as a function of Hamming distance 0..n."""
    d = np.arange(n + 1)
    return np.power(delta, d) * np.power(1.0 - delta, n - d)


def _coset_output(code: CosetCode, delta: float) -> np.ndarray:
    """Distribution of W given S = 0."""
    n = code.n
    kern = _bsc_kernel(n, delta)
    words = np.arange(1 << n, dtype=np.int64)
    cw = code.codewords()
    prob = np.zeros(1 << n)
    step = max(1, _CHUNK >> n)
    for start in range(0, len(cw), step):
        block = cw[start:start + step]
        prob += kern[_popcount(words[None, :] ^ block[:, None])].sum(axis=0)
    return prob / len(cw)


def exact_equivocation(code: CosetCode, delta: float) -> float:
    """Per-secret-bit equivocation H(S|W)/(n - k_c).

    Uses H(S|W) = H(S) + H(W|S) - H(W) with H(S) = n - k_c, H(W) = n (a
    uniform input stays uniform through a BSC) and H(W|S) = H(W|S=0): every
    coset is a translate of the code, and translating the input translates
    the output distribution without changing its entropy.
    """
    delta = check_crossover(delta, "delta")
    h_w_given_s = _entropy_bits(_coset_output(code, delta))
    value = (code.secret_bits + h_w_given_s - code.n) / code.secret_bits
    return min(max(value, 0.0), 1.0)


def joint_equivocation(code: CosetCode, delta: float) -> float:
    """Same quantity from the full joint law of (S, W), without symmetry shortcuts.

    Work and memory are 4^n, so this is meant as a cross-check for small n.
    """
    delta = check_crossover(delta, "delta")
    n, m = code.n, code.secret_bits
    channel = _bsc_kernel(n, delta)[_distance_matrix(n)]  # p(w | x), rows x
    onehot = np.zeros((1 << m, 1 << n))
    onehot[code.syndromes(), np.arange(1 << n)] = 1.0
    p_x = 1.0 / (1 << n)  # uniform S times uniform coset member
    joint = p_x * (onehot @ channel)
    h_sw = _entropy_bits(joint.ravel())
    h_w = _entropy_bits(joint.sum(axis=0))
    return min(max((h_sw - h_w) / m, 0.0), 1.0)


def equivocation_monotonicity_scan(code: CosetCode, deltas: Iterable[float]) -> list[float]:
    deltas = [check_crossover(d, "delta") for d in deltas]
    if any(b < a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("deltas must be sorted ascending")
    return [exact_equivocation(code, d) for d in deltas]


def is_nondecreasing(values: Sequence[float], tol: float = 1e-12) -> bool:
    return all(b >= a - tol for a, b in zip(values, values[1:]))


def all_rref_codes(n: int) -> Iterator[CosetCode]:
    """Every full-rank parity-check matrix in reduced row echelon form for block length n.

    Each row space (hence each distinct coset code) appears exactly once.
    """
    if not 1 <= n <= MAX_N:
        raise DomainError(f"n must be in [1, {MAX_N}]")
    for m in range(1, n + 1):
        for pivots in itertools.combinations(range(n), m):
            pivot_set = set(pivots)
            free = [[j for j in range(p + 1, n) if j not in pivot_set] for p in pivots]
            slots = [(i, j) for i, cols in enumerate(free) for j in cols]
            for bits in itertools.product((0, 1), repeat=len(slots)):
                rows = [[0] * n for _ in range(m)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, j), b in zip(slots, bits):
                    rows[i][j] = b
                yield CosetCode(tuple(tuple(r) for r in rows))
