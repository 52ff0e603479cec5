"""Achievable secrecy rates for the feedback wiretap schemes over BSCs.

Four links: Alice->Bob (eps_f), Alice->Eve (delta_f), Bob->Alice (eps_b) and
Bob->Eve (delta_b). Every rate is in bits per channel use and already counts
the channel uses spent on feedback.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._optimize import golden_section_max
from .entropy import DomainError, binary_entropy, capacity, check_crossover, concat

log = logging.getLogger(__name__)

GAMMA_GRID_POINTS = 1000
GAMMA_TOL = 1e-7
DEFAULT_N_MAX = 31


class Scheme(str, enum.Enum):
    WYNER = "wyner"
    PURE_FEEDBACK = "pure_feedback"
    PURE_FEEDBACK_REPETITION = "pure_feedback_repetition"
    MIXED_FEEDBACK = "mixed_feedback"
    REVERSED_FEEDBACK = "reversed_feedback"


# tie-break order for best_scheme
_SCHEME_ORDER = list(Scheme)


@dataclass(frozen=True)
class SystemChannels:
    eps_f: float
    delta_f: float
    eps_b: float
    delta_b: float

    def __post_init__(self):
        for name in ("eps_f", "delta_f", "eps_b", "delta_b"):
            object.__setattr__(self, name, check_crossover(getattr(self, name), name))

    @property
    def c_ab(self) -> float:
        return capacity(self.eps_f)

    @property
    def c_ae(self) -> float:
        return capacity(self.delta_f)

    @property
    def c_ba(self) -> float:
        return capacity(self.eps_b)

    @property
    def c_be(self) -> float:
        return capacity(self.delta_b)

    def swapped(self) -> "SystemChannels":
        """The same four links with the roles of forward and feedback exchanged."""
        return SystemChannels(self.eps_b, self.delta_b, self.eps_f, self.delta_f)

    def as_dict(self) -> dict[str, float]:
        return {"eps_f": self.eps_f, "delta_f": self.delta_f,
                "eps_b": self.eps_b, "delta_b": self.delta_b}


@dataclass
class SchemeReport:
    scheme: Scheme
    overall_rate: float
    detail: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.overall_rate < 0.0:
            # round-off from differences of entropies
            if self.overall_rate > -1e-12:
                self.overall_rate = 0.0
            else:
                raise ValueError(f"negative rate {self.overall_rate}")

    def to_dict(self) -> dict[str, Any]:
        return {"scheme": self.scheme.value, "overall_rate": self.overall_rate,
                "detail": dict(self.detail)}


def wyner_secrecy_capacity(eps_f: float, delta_f: float) -> float:
    """Secrecy capacity max(h(delta_f) - h(eps_f), 0) of a BSC wiretap pair."""
    eps_f = check_crossover(eps_f, "eps_f")
    delta_f = check_crossover(delta_f, "delta_f")
    return max(binary_entropy(delta_f) - binary_entropy(eps_f), 0.0)


def unscaled_rates(eps_b: float, delta_b: float) -> tuple[float, float]:
    """(R_t_u, R_s_u) of the degraded pair created by the XOR feedback kernel.

    Bob's equivalent channel has crossover eps_b, Eve's has eps_b -> delta_b.
    """
    eps_b = check_crossover(eps_b, "eps_b")
    delta_b = check_crossover(delta_b, "delta_b")
    r_t = 1.0 - binary_entropy(eps_b)
    r_s = binary_entropy(concat(eps_b, delta_b)) - binary_entropy(eps_b)
    return r_t, max(r_s, 0.0)


def _forwarding(ch: SystemChannels, forwarding_rate: float | None) -> float:
    c_ab = ch.c_ab
    if forwarding_rate is None:
        return c_ab
    if forwarding_rate < 0.0 or forwarding_rate > c_ab + 1e-15:
        raise DomainError(f"forwarding_rate={forwarding_rate} must lie in [0, C_AB={c_ab:.6g}]")
    return float(forwarding_rate)


def pure_feedback_rate(ch: SystemChannels, forwarding_rate: float | None = None) -> SchemeReport:
    """R_s_u * R/(R + 1) with R the forwarding rate (C_AB unless given)."""
    r_fb = _forwarding(ch, forwarding_rate)
    r_t, r_s = unscaled_rates(ch.eps_b, ch.delta_b)
    rate = r_s * r_fb / (r_fb + 1.0)
    return SchemeReport(Scheme.PURE_FEEDBACK, rate, {
        "R_s_u": r_s, "R_t_u": r_t, "C_AB": ch.c_ab, "forwarding_rate": r_fb})


def repetition_equivalent(p: float, n_rep: int) -> float:
    """Crossover after majority decoding of n_rep independent copies."""
    p = check_crossover(p, "p")
    if int(n_rep) != n_rep or n_rep < 1:
        raise DomainError(f"n_rep must be a positive odd integer, got {n_rep!r}")
    n_rep = int(n_rep)
    if n_rep % 2 == 0:
        raise DomainError(f"n_rep={n_rep} is even; an even order is dominated by {n_rep - 1}")
    if p == 0.5:
        return 0.5
    k = n_rep // 2
    total = sum(math.comb(n_rep, i) * p ** i * (1.0 - p) ** (n_rep - i)
                for i in range(k + 1, n_rep + 1))
    return min(total, 0.5)


def repetition_feedback_rate(ch: SystemChannels, n_rep: int,
                             forwarding_rate: float | None = None) -> SchemeReport:
    """Pure feedback with each feedback bit repeated n_rep times.

    Feedback then costs n_rep * n channel uses, so the scale factor becomes
    R/(n_rep R + 1).
    """
    r_fb = _forwarding(ch, forwarding_rate)
    eps_rep = repetition_equivalent(ch.eps_b, n_rep)
    delta_rep = repetition_equivalent(ch.delta_b, n_rep)
    r_t, r_s = unscaled_rates(eps_rep, delta_rep)
    rate = r_s * r_fb / (n_rep * r_fb + 1.0)
    return SchemeReport(Scheme.PURE_FEEDBACK_REPETITION, rate, {
        "R_s_u": r_s, "R_t_u": r_t, "C_AB": ch.c_ab, "forwarding_rate": r_fb,
        "n_star": int(n_rep), "eps_b_equiv": eps_rep, "delta_b_equiv": delta_rep})


def optimize_repetition(ch: SystemChannels, n_max: int = DEFAULT_N_MAX,
                        forwarding_rate: float | None = None) -> SchemeReport:
    """Best odd repetition order in [1, n_max] by exhaustive search.

    The rate is not unimodal in N in general, so every odd order is
    evaluated; ties keep the smallest N.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    best = None
    for n in range(1, int(n_max) + 1, 2):
        rep = repetition_feedback_rate(ch, n, forwarding_rate)
        if best is None or rep.overall_rate > best.overall_rate:
            best = rep
    best.detail["n_max"] = int(n_max)
    return best


def _check_mixed(eps_f: float, delta_f: float) -> None:
    if not eps_f < delta_f:
        raise DomainError(
            f"mixed scheme needs Bob's forward channel less noisy: eps_f={eps_f} >= delta_f={delta_f}")


def mixed_component_rates(gamma, eps_f: float, delta_f: float):
    """Common rate R_c* and secret rate R_e* for an auxiliary BSC(gamma).

    ``gamma`` may be an array, in which case both outputs are arrays.
    """
    eps_f = check_crossover(eps_f, "eps_f")
    delta_f = check_crossover(delta_f, "delta_f")
    _check_mixed(eps_f, delta_f)
    g = np.asarray(gamma, dtype=float)
    if np.any((g < 0.0) | (g > 0.5)):
        raise DomainError(f"gamma must lie in [0, 0.5], got {gamma!r}")
    h_gd = binary_entropy(concat(g, delta_f))
    h_ge = binary_entropy(concat(g, eps_f))
    r_c = 1.0 - h_gd
    r_e = (binary_entropy(delta_f) - binary_entropy(eps_f)) - (h_gd - h_ge)
    r_c = np.maximum(r_c, 0.0)
    r_e = np.maximum(r_e, 0.0)
    if g.ndim == 0:
        return float(r_c), float(r_e)
    return r_c, r_e


def mixed_objective(gamma, eps_f: float, delta_f: float, r_s_u: float):
    """(R_e* + R_c* R_s_u) / (R_c* + 1), the mixed-scheme secrecy rate at gamma."""
    r_c, r_e = mixed_component_rates(gamma, eps_f, delta_f)
    return (r_e + r_c * r_s_u) / (r_c + 1.0)


def _count_local_maxima(values: np.ndarray) -> list[int]:
    idx = []
    n = len(values)
    for i in range(n):
        left = values[i - 1] if i > 0 else -np.inf
        right = values[i + 1] if i < n - 1 else -np.inf
        if values[i] > left and values[i] >= right:
            idx.append(i)
    return idx


def mixed_feedback_rate(ch: SystemChannels, grid_points: int = GAMMA_GRID_POINTS,
                        tol: float = GAMMA_TOL) -> SchemeReport:
    """Mixed Wyner + feedback scheme, maximized over the auxiliary crossover.

    gamma is searched on (0, 0.5]: a uniform grid followed by golden-section
    refinement on the bracket around the best grid point. gamma = 0 is not part
    of the continuous search; at that point the whole forward capacity can be
    used for feedback-processed data, which is the pure feedback rate and is
    compared explicitly.
    """
    _check_mixed(ch.eps_f, ch.delta_f)
    _, r_s_u = unscaled_rates(ch.eps_b, ch.delta_b)
    step = 0.5 / grid_points
    grid = step * np.arange(1, grid_points + 1)
    values = mixed_objective(grid, ch.eps_f, ch.delta_f, r_s_u)

    peaks = _count_local_maxima(values)
    multimodal = len(peaks) > 1 and (values[peaks].max() - values[peaks].min()) > 1e-6
    if multimodal:
        log.warning("gamma objective has %d local maxima for %s", len(peaks), ch)

    i = int(np.argmax(values))
    lo = grid[i - 1] if i > 0 else 0.5 * grid[0]
    hi = grid[i + 1] if i < grid_points - 1 else grid[i]
    gamma_star, mixed_rate = golden_section_max(
        lambda g: float(mixed_objective(g, ch.eps_f, ch.delta_f, r_s_u)), lo, hi, tol)
    if values[i] > mixed_rate:
        gamma_star, mixed_rate = float(grid[i]), float(values[i])

    pure = pure_feedback_rate(ch)
    if pure.overall_rate > mixed_rate:
        branch, rate, gamma_star = "pure", pure.overall_rate, 0.0
    else:
        branch, rate = "mixed", mixed_rate
    r_c, r_e = mixed_component_rates(gamma_star, ch.eps_f, ch.delta_f)
    return SchemeReport(Scheme.MIXED_FEEDBACK, rate, {
        "R_s_u": r_s_u, "C_AB": ch.c_ab, "C_AE": ch.c_ae,
        "C_s": wyner_secrecy_capacity(ch.eps_f, ch.delta_f),
        "R_c_star": r_c, "R_e_star": r_e, "gamma_star": float(gamma_star),
        "branch": branch, "mixed_rate": float(mixed_rate), "pure_rate": pure.overall_rate,
        "n_local_maxima": len(peaks), "multimodal": bool(multimodal)})


def forward_scheme_rate(ch: SystemChannels) -> SchemeReport:
    """Best regular (non-reversed) feedback scheme: mixed if eps_f < delta_f, else pure."""
    if ch.eps_f < ch.delta_f:
        return mixed_feedback_rate(ch)
    return pure_feedback_rate(ch)


def key_rate(ch: SystemChannels) -> SchemeReport:
    """R_s_p: rate of a secret key sent from Bob to Alice with the roles swapped."""
    return forward_scheme_rate(ch.swapped())


def _saturating(c_ab: float, r_sp: float, denom_cap: float) -> float:
    if r_sp <= 0.0 or c_ab <= 0.0:
        return 0.0
    return c_ab * r_sp / (denom_cap + r_sp)


def reversed_feedback_rate(ch: SystemChannels) -> SchemeReport:
    """Reversed scheme: Bob sends Alice a key, Alice mixes Wyner coding and a one-time pad.

    Overall rate C_AB R_s_p / (C_F + R_s_p) with C_F = min(C_AB, C_AE).
    """
    key = key_rate(ch)
    r_sp = key.overall_rate
    c_ab, c_ae = ch.c_ab, ch.c_ae
    c_f = min(c_ab, c_ae)
    rate = _saturating(c_ab, r_sp, c_f)
    detail = {"R_s_p": r_sp, "key_scheme": key.scheme.value, "C_AB": c_ab, "C_AE": c_ae,
              "C_F": c_f, "C_s": max(c_ab - c_ae, 0.0)}
    if "gamma_star" in key.detail:
        detail["gamma_star"] = key.detail["gamma_star"]
    return SchemeReport(Scheme.REVERSED_FEEDBACK, rate, detail)


def full_encryption_rate(ch: SystemChannels) -> float:
    """Reversed scheme that encrypts the whole forward message: C_AB R_s_p/(C_AB + R_s_p)."""
    r_sp = key_rate(ch).overall_rate
    c_ab = ch.c_ab
    return _saturating(c_ab, r_sp, c_ab)


def table_row(ch: SystemChannels) -> int:
    """Row (1-4) of the scheme-selection table for this channel ordering."""
    feedback_better = ch.c_ba > ch.c_be
    forward_better = ch.c_ab > ch.c_ae
    return 1 + int(feedback_better) + 2 * int(forward_better)


def applicable_schemes(ch: SystemChannels) -> list[SchemeReport]:
    row = table_row(ch)
    reports = []
    if ch.c_ab > ch.c_ae:
        reports.append(mixed_feedback_rate(ch))
    else:
        reports.append(pure_feedback_rate(ch))
    if row != 1:
        reports.append(reversed_feedback_rate(ch))
    return reports


def best_scheme(ch: SystemChannels) -> SchemeReport:
    """Best of the schemes the selection table allows for this channel ordering."""
    reports = applicable_schemes(ch)
    best = max(reports, key=lambda r: (r.overall_rate, -_SCHEME_ORDER.index(r.scheme)))
    best.detail["table_row"] = table_row(ch)
    best.detail["candidates"] = {r.scheme.value: r.overall_rate for r in reports}
    return best


SCHEME_FUNCS = {
    "wyner": lambda ch: SchemeReport(Scheme.WYNER, wyner_secrecy_capacity(ch.eps_f, ch.delta_f),
                                     {"C_AB": ch.c_ab, "C_AE": ch.c_ae}),
    "pure": pure_feedback_rate,
    "repetition": optimize_repetition,
    "mixed": mixed_feedback_rate,
    "reversed": reversed_feedback_rate,
    "best": best_scheme,
}
