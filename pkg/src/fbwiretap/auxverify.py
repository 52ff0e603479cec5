"""Numerical checks on the optimal auxiliary channel for a BSC wiretap pair.

Setting: main channel BSC(eps), eavesdropper channel BSC(delta), eps < delta.
An auxiliary binary U with Pr{U=0} = q is linked to the input X by
alpha = Pr{X=1|U=0} and beta = Pr{X=0|U=1}. The checks here are:

* BSC optimality: replacing (q, alpha, beta) by (0.5, gamma, gamma) with the
  same R_x never lowers the secret-rate bound.
* zero structure of g(x) = h(gamma->x) - q h(alpha->x) - (1-q) h(beta->x).
* two-point decomposition of points in the convex hull of the curve
  p -> (p, h(eps->p), h(delta->p)).
* the ordering of segment-intersection abscissae in the two projections.
* ternary-U versus binary-U (R_c, R_e) frontiers on a grid.

Anything that is only conjectured produces a report with counterexample
candidates rather than raising.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any

import mpmath
import numpy as np
from scipy.optimize import brentq

from ._optimize import golden_section_max
from .entropy import (
    LN2,
    DomainError,
    binary_entropy,
    check_crossover,
    check_probability,
    concat,
    inv_binary_entropy,
    mu,
    unconcat,
)

ALPHA_RANGE = (0.001, 0.499)
DEGENERATE_SPREAD = 1e-6


@dataclass(frozen=True)
class GeneralAuxChannel:
    q: float
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "q", check_probability(self.q, "q"))
        object.__setattr__(self, "alpha", check_crossover(self.alpha, "alpha"))
        object.__setattr__(self, "beta", check_crossover(self.beta, "beta"))

    @classmethod
    def bsc(cls, gamma: float) -> "GeneralAuxChannel":
        return cls(0.5, gamma, gamma)

    def as_dict(self) -> dict[str, float]:
        return {"q": self.q, "alpha": self.alpha, "beta": self.beta}


@dataclass
class VerifyReport:
    claim: str
    n_samples: int
    seed: int | None
    n_pass: int = 0
    n_skip: int = 0
    worst_margin: float = math.inf
    counterexamples: list[dict[str, Any]] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def n_fail(self) -> int:
        return self.n_samples - self.n_pass - self.n_skip

    def to_dict(self) -> dict[str, Any]:
        out = {"claim": self.claim, "n_samples": self.n_samples, "seed": self.seed,
               "n_pass": self.n_pass, "n_skip": self.n_skip,
               "worst_margin": None if math.isinf(self.worst_margin) else self.worst_margin,
               "counterexamples": self.counterexamples}
        out.update(self.extra)
        return out


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one sample, fixed by (seed, index) alone."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def random_aux(rng: np.random.Generator) -> GeneralAuxChannel:
    lo, hi = ALPHA_RANGE
    return GeneralAuxChannel(rng.uniform(0.0, 1.0), rng.uniform(lo, hi), rng.uniform(lo, hi))


def _mix_entropy(aux: GeneralAuxChannel, x: float) -> float:
    return (aux.q * binary_entropy(concat(aux.alpha, x))
            + (1.0 - aux.q) * binary_entropy(concat(aux.beta, x)))


def r_x(aux: GeneralAuxChannel, delta: float) -> float:
    """R_x = 1 - [q h(alpha->delta) + (1-q) h(beta->delta)]."""
    delta = check_crossover(delta, "delta")
    return 1.0 - _mix_entropy(aux, delta)


def matched_gamma(aux: GeneralAuxChannel, delta: float) -> float:
    """The BSC crossover gamma with h(gamma->delta) = q h(alpha->delta) + (1-q) h(beta->delta)."""
    delta = check_crossover(delta, "delta")
    if delta == 0.0 or delta == 0.5:
        raise DomainError(f"delta={delta} makes the matching equation degenerate")
    if aux.alpha == aux.beta:
        return aux.alpha
    target = min(max(_mix_entropy(aux, delta), 0.0), 1.0)
    return unconcat(inv_binary_entropy(target), delta)


def re_upper(aux: GeneralAuxChannel, eps: float, delta: float) -> float:
    """Upper bound on the secret rate R_e for the auxiliary channel aux."""
    eps = check_crossover(eps, "eps")
    delta = check_crossover(delta, "delta")
    if not eps < delta:
        raise DomainError(f"need eps < delta, got eps={eps}, delta={delta}")
    gap = binary_entropy(delta) - binary_entropy(eps)
    return gap - (_mix_entropy(aux, delta) - _mix_entropy(aux, eps))


def rc_upper(aux: GeneralAuxChannel, delta: float) -> float:
    """Upper bound on the common rate R_c = I(U;Z)."""
    p_one = aux.q * aux.alpha + (1.0 - aux.q) * (1.0 - aux.beta)
    return binary_entropy(concat(p_one, delta)) - _mix_entropy(aux, delta)


def verify_bsc_optimality(eps: float, delta: float, n_samples: int, seed: int,
                          tol: float = 1e-9, max_logged: int = 50) -> VerifyReport:
    """Random triples (q, alpha, beta) against the BSC with matched R_x.

    Margin is R_e(0.5, gamma, gamma) - R_e(q, alpha, beta); a sample passes when
    the margin is >= -tol and the common-rate bound is not beaten either.
    """
    if not eps < delta:
        raise DomainError(f"need eps < delta, got eps={eps}, delta={delta}")
    report = VerifyReport("bsc_optimality", n_samples, seed)
    rc_worst = math.inf
    for i in range(n_samples):
        aux = random_aux(sample_rng(seed, i))
        gamma = matched_gamma(aux, delta)
        bsc = GeneralAuxChannel.bsc(gamma)
        margin = re_upper(bsc, eps, delta) - re_upper(aux, eps, delta)
        rc_margin = rc_upper(bsc, delta) - rc_upper(aux, delta)
        report.worst_margin = min(report.worst_margin, margin)
        rc_worst = min(rc_worst, rc_margin)
        if margin >= -tol and rc_margin >= -tol:
            report.n_pass += 1
        elif len(report.counterexamples) < max_logged:
            report.counterexamples.append({"index": i, **aux.as_dict(), "gamma": gamma,
                                           "margin": margin, "rc_margin": rc_margin})
    report.extra.update({"eps": eps, "delta": delta, "tol": tol, "rc_worst_margin": rc_worst})
    return report


def g_eval(x, gamma: float, aux: GeneralAuxChannel):
    """h(gamma->x) - [q h(alpha->x) + (1-q) h(beta->x)]; x may be an array."""
    x = np.asarray(x, dtype=float) if not isinstance(x, float) else x
    out = (binary_entropy(concat(gamma, x))
           - aux.q * binary_entropy(concat(aux.alpha, x))
           - (1.0 - aux.q) * binary_entropy(concat(aux.beta, x)))
    return out


def g_second_derivative(x: float, gamma: float, aux: GeneralAuxChannel) -> float:
    s = x * (1.0 - x)
    return (aux.q / (s + mu(aux.alpha)) + (1.0 - aux.q) / (s + mu(aux.beta))
            - 1.0 / (s + mu(gamma))) / LN2


def _g_mp(x, gamma: float, aux: GeneralAuxChannel):
    """g at 50 significant digits, for points where float64 cannot fix the sign."""
    with mpmath.workdps(50):
        x = mpmath.mpf(x)

        def h(a):
            a = mpmath.mpf(a)
            c = a + x - 2 * a * x
            if c <= 0 or c >= 1:
                return mpmath.mpf(0)
            return -(c * mpmath.log(c, 2) + (1 - c) * mpmath.log(1 - c, 2))

        q = mpmath.mpf(aux.q)
        return h(gamma) - q * h(aux.alpha) - (1 - q) * h(aux.beta)


def matched_gamma_mp(aux: GeneralAuxChannel, delta: float, gamma0: float | None = None):
    """matched_gamma polished by Newton steps at 50 digits.

    Near-degenerate triples have g'(delta) ~ 1e-13, so the float64 gamma alone
    would move the zero of g at delta by far more than the grid spacing.
    """
    if gamma0 is None:
        gamma0 = matched_gamma(aux, delta)
    if aux.alpha == aux.beta:
        return mpmath.mpf(aux.alpha)
    with mpmath.workdps(50):
        d = mpmath.mpf(delta)
        q = mpmath.mpf(aux.q)

        def hc(a):
            c = a + d - 2 * a * d
            return -(c * mpmath.log(c, 2) + (1 - c) * mpmath.log(1 - c, 2))

        target = q * hc(mpmath.mpf(aux.alpha)) + (1 - q) * hc(mpmath.mpf(aux.beta))
        g = mpmath.mpf(gamma0)
        for _ in range(8):
            c = g + d - 2 * g * d
            slope = (1 - 2 * d) * mpmath.log((1 - c) / c, 2)
            if slope == 0:
                break
            g -= (hc(g) - target) / slope
        return +g


def g_zeros(gamma: float, aux: GeneralAuxChannel, grid_points: int = 10_000,
            float_floor: float = 1e-12, exact_floor: float = 1e-40, gamma_hp=None) -> list[float]:
    """Zeros of g on [0, 0.5] located from sign changes on a uniform grid.

    Grid values smaller than float_floor are recomputed in extended precision
    before taking their sign, and the crossing is then refined by bisection in
    that precision; otherwise Brent's method on the float64 function is used.
    """
    if gamma_hp is None:
        gamma_hp = gamma
    xs = np.linspace(0.0, 0.5, grid_points)
    gs = g_eval(xs, gamma, aux)
    hp = np.abs(gs) < float_floor
    vals: dict[int, Any] = {int(i): _g_mp(xs[i], gamma_hp, aux) for i in np.nonzero(hp)[0]}
    exact_zero = np.zeros(grid_points, dtype=bool)
    sign = np.sign(gs)
    for i, v in vals.items():
        exact_zero[i] = abs(v) < exact_floor
        sign[i] = 0.0 if exact_zero[i] else (1.0 if v > 0 else -1.0)
    zeros = [float(x) for x in xs[exact_zero]]
    crossings = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    for i in crossings:
        if hp[i] or hp[i + 1]:
            lo, hi = xs[i], xs[i + 1]
            flo = vals.get(int(i), gs[i])
            while hi - lo > 1e-13:
                mid = 0.5 * (lo + hi)
                fm = _g_mp(mid, gamma_hp, aux)
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            zeros.append(0.5 * (lo + hi))
        else:
            zeros.append(brentq(lambda t: float(g_eval(t, gamma, aux)), xs[i], xs[i + 1], xtol=1e-15))
    return sorted(zeros)


def g_second_derivative_fd(x: float, gamma, aux: GeneralAuxChannel, step: float = 1e-6) -> float:
    """Central second difference of g, evaluated in extended precision."""
    with mpmath.workdps(50):
        s = mpmath.mpf(step)
        val = (_g_mp(x + s, gamma, aux) - 2 * _g_mp(x, gamma, aux) + _g_mp(x - s, gamma, aux)) / s ** 2
    return float(val)


def verify_g_structure(eps: float, delta: float, n_samples: int, seed: int,
                       grid_points: int = 10_000, zero_tol: float = 1e-5, n_eps_probe: int = 5,
                       fd_step: float = 1e-6, fd_rel_tol: float = 1e-4,
                       max_logged: int = 50) -> VerifyReport:
    """Zeros of g only at delta and 0.5, g > 0 below delta, and g'' against finite differences.

    Triples with |alpha - beta| < 1e-6 give g identically zero and are skipped.
    """
    if not eps < delta:
        raise DomainError(f"need eps < delta, got eps={eps}, delta={delta}")
    report = VerifyReport("g_structure", n_samples, seed)
    worst_fd = 0.0
    min_g_eps = math.inf
    for i in range(n_samples):
        rng = sample_rng(seed, i)
        aux = random_aux(rng)
        if abs(aux.alpha - aux.beta) < DEGENERATE_SPREAD:
            report.n_skip += 1
            continue
        gamma = matched_gamma(aux, delta)
        gamma_hp = matched_gamma_mp(aux, delta, gamma)
        problems = []

        zeros = g_zeros(gamma, aux, grid_points, gamma_hp=gamma_hp)
        stray = [z for z in zeros if min(abs(z - delta), abs(z - 0.5)) > zero_tol]
        if stray:
            problems.append({"stray_zeros": stray[:10]})

        probes = [eps] + list(rng.uniform(0.0, delta, n_eps_probe))
        g_at = [float(g_eval(float(e), gamma, aux)) for e in probes]
        min_g_eps = min(min_g_eps, *g_at)
        if min(g_at) <= 0.0:
            problems.append({"nonpositive_g": [(e, g) for e, g in zip(probes, g_at) if g <= 0.0]})

        if max(aux.alpha, aux.beta, gamma) <= 0.45:
            x = float(rng.uniform(0.02, 0.48))
            exact = g_second_derivative(x, gamma, aux)
            fd = g_second_derivative_fd(x, gamma, aux, fd_step)
            rel = abs(fd - exact) / abs(exact)
            worst_fd = max(worst_fd, rel)
            if rel > fd_rel_tol:
                problems.append({"fd_mismatch": {"x": x, "exact": exact, "fd": fd, "rel": rel}})

        report.worst_margin = min(report.worst_margin, min(g_at))
        if problems:
            if len(report.counterexamples) < max_logged:
                report.counterexamples.append({"index": i, **aux.as_dict(), "gamma": gamma,
                                               "problems": problems})
        else:
            report.n_pass += 1
    report.extra.update({"eps": eps, "delta": delta, "grid_points": grid_points,
                         "zero_tol": zero_tol, "worst_fd_rel_error": worst_fd,
                         "min_g_below_delta": min_g_eps})
    return report


# ---------------------------------------------------------------------------
# convex hull of the space curve


@dataclass(frozen=True)
class CurvePoint:
    p: float
    f_y: float
    f_z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p, self.f_y, self.f_z])


def curve_point(p: float, eps: float, delta: float) -> CurvePoint:
    return CurvePoint(p, binary_entropy(concat(eps, p)), binary_entropy(concat(delta, p)))


def _curve(p, eps: float, delta: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.stack([p, binary_entropy(concat(eps, p)), binary_entropy(concat(delta, p))], axis=-1)


@dataclass
class TwoPointResult:
    p_x: float
    p_y: float
    lam: float
    residual: float

    def __iter__(self):
        return iter((self.p_x, self.p_y, self.lam, self.residual))


def _partner(p_x, xb: float, yb: float, eps: float, iters: int = 80):
    """Other end p_y > xb of the chord through (p_x, h(eps->p_x)) and (xb, yb).

    Vectorized bisection over p_x; NaN where the line leaves [0, 0.5]
    without meeting the curve again.
    """
    p_x = np.atleast_1d(np.asarray(p_x, dtype=float))
    fy_x = binary_entropy(concat(eps, p_x))
    slope = (yb - fy_x) / (xb - p_x)

    def phi(t):
        return binary_entropy(concat(eps, t)) - yb - slope * (t - xb)

    lo = np.full_like(p_x, xb)
    hi = np.full_like(p_x, 0.5)
    feasible = phi(hi) <= 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        pos = phi(mid) > 0.0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
    p_y = 0.5 * (lo + hi)
    return np.where(feasible, p_y, np.nan)


def _z_residual(p_x, target: np.ndarray, eps: float, delta: float):
    xb, yb, zb = target
    p_y = _partner(p_x, xb, yb, eps)
    p_x = np.atleast_1d(np.asarray(p_x, dtype=float))
    lam = (p_y - xb) / (p_y - p_x)
    fz_x = binary_entropy(concat(delta, p_x))
    with np.errstate(invalid="ignore"):
        fz_y = binary_entropy(concat(delta, np.where(np.isnan(p_y), 0.0, p_y)))
    res = lam * fz_x + (1.0 - lam) * fz_y - zb
    return np.where(np.isnan(p_y), np.nan, res), p_y, lam


def two_point_decomposition(eps: float, delta: float, target, grid_points: int = 256,
                            on_curve_tol: float = 1e-12) -> TwoPointResult:
    """Search p_x, p_y, lam with lam C(p_x) + (1-lam) C(p_y) = target.

    For each candidate p_x < target[0] the first two coordinates pin p_y and
    lam; the third coordinate's mismatch is then a scalar function of p_x,
    scanned on a grid and refined by Brent's method at its sign changes.
    The reported residual is the max-norm error of the reconstruction.
    """
    target = np.asarray(target, dtype=float)
    xb = float(target[0])
    on = _curve(xb, eps, delta)
    if np.max(np.abs(on - target)) <= on_curve_tol:
        return TwoPointResult(xb, xb, 1.0, float(np.max(np.abs(on - target))))

    px = np.linspace(0.0, xb, grid_points, endpoint=False)
    res, _, _ = _z_residual(px, target, eps, delta)

    def scalar_res(t: float) -> float:
        return float(_z_residual(t, target, eps, delta)[0][0])

    candidates = []
    for i in range(grid_points - 1):
        a, b = res[i], res[i + 1]
        if np.isnan(a) or np.isnan(b):
            continue
        if a == 0.0:
            candidates.append(px[i])
        elif a * b < 0.0:
            candidates.append(brentq(scalar_res, px[i], px[i + 1], xtol=1e-15))
    if not candidates:
        finite = np.where(~np.isnan(res))[0]
        if len(finite) == 0:
            return TwoPointResult(math.nan, math.nan, math.nan, math.inf)
        j = finite[np.argmin(np.abs(res[finite]))]
        lo = px[max(j - 1, 0)]
        hi = px[min(j + 1, grid_points - 1)]
        t, _ = golden_section_max(lambda s: -abs(scalar_res(s)) if not math.isnan(scalar_res(s)) else -math.inf,
                                  lo, hi, tol=1e-14)
        candidates.append(t)

    best = None
    for t in candidates:
        _, p_y, lam = _z_residual(t, target, eps, delta)
        p_y, lam = float(p_y[0]), float(lam[0])
        if math.isnan(p_y):
            continue
        recon = lam * _curve(t, eps, delta) + (1.0 - lam) * _curve(p_y, eps, delta)
        err = float(np.max(np.abs(recon - target)))
        if best is None or err < best.residual:
            best = TwoPointResult(float(t), p_y, lam, err)
    return best if best is not None else TwoPointResult(math.nan, math.nan, math.nan, math.inf)


def random_hull_target(rng: np.random.Generator, eps: float, delta: float):
    """A convex combination of three random curve points (enough by Eggleston's bound)."""
    ps = np.sort(rng.uniform(0.0, 0.5, 3))
    w = rng.dirichlet(np.ones(3))
    return w @ _curve(ps, eps, delta), ps, w


def verify_two_point(eps: float, delta: float, n_samples: int, seed: int,
                     tol: float = 1e-6, max_logged: int = 100) -> VerifyReport:
    report = VerifyReport("two_point_hull", n_samples, seed)
    residuals = []
    for i in range(n_samples):
        target, ps, w = random_hull_target(sample_rng(seed, i), eps, delta)
        res = two_point_decomposition(eps, delta, target)
        residuals.append(res.residual)
        if res.residual < tol:
            report.n_pass += 1
        elif len(report.counterexamples) < max_logged:
            report.counterexamples.append({"index": i, "target": target.tolist(), "points": ps.tolist(),
                                           "weights": w.tolist(), "p_x": res.p_x, "p_y": res.p_y,
                                           "lambda": res.lam, "residual": res.residual})
    arr = np.array(residuals)
    report.worst_margin = float(tol - arr.max()) if len(arr) else math.inf
    report.extra.update({"eps": eps, "delta": delta, "tol": tol,
                         "residual_max": float(arr.max()), "residual_median": float(np.median(arr)),
                         "residual_mean": float(arr.mean())})
    return report


def _intersection_abscissa(p_a, p_b, p_d, p_c, f) -> float:
    """x-coordinate where segment (p_a, f(p_a))-(p_b, f(p_b)) crosses (p_d, .)-(p_c, .)."""
    ya, yb, yd, yc = f(p_a), f(p_b), f(p_d), f(p_c)
    s1 = (yb - ya) / (p_b - p_a)
    s2 = (yc - yd) / (p_c - p_d)
    if s1 == s2:
        raise DomainError("segments are parallel")
    # ya + s1 (x - p_a) = yd + s2 (x - p_d)
    x = (yd - ya + s1 * p_a - s2 * p_d) / (s1 - s2)
    if not (max(p_a, p_d) - 1e-12 <= x <= min(p_b, p_c) + 1e-12):
        raise DomainError(f"segments do not cross (intersection at {x})")
    return float(x)


def verify_projection_ordering(eps: float, delta: float, p1: float, p4: float, p2: float,
                               p3: float) -> tuple[float, float, bool]:
    """Intersection abscissae of A B and D C in both projections, and whether the eps one is larger.

    Points A, D, B, C sit on the curve at p1 < p4 < p2 < p3.
    """
    if not (0.0 <= p1 < p4 < p2 < p3 <= 0.5):
        raise DomainError("need 0 <= p1 < p4 < p2 < p3 <= 0.5")
    fe = lambda p: binary_entropy(concat(eps, p))  # noqa: E731
    fd = lambda p: binary_entropy(concat(delta, p))  # noqa: E731
    x_e = _intersection_abscissa(p1, p2, p4, p3, fe)
    x_d = _intersection_abscissa(p1, p2, p4, p3, fd)
    return x_e, x_d, x_e > x_d


def verify_projection_batch(eps: float, delta: float, n_samples: int, seed: int,
                            max_logged: int = 100) -> VerifyReport:
    report = VerifyReport("projection_ordering", n_samples, seed)
    for i in range(n_samples):
        p1, p4, p2, p3 = np.sort(sample_rng(seed, i).uniform(0.0, 0.5, 4))
        try:
            x_e, x_d, ordered = verify_projection_ordering(eps, delta, p1, p4, p2, p3)
        except DomainError as exc:
            report.n_skip += 1
            if len(report.counterexamples) < max_logged:
                report.counterexamples.append({"index": i, "p": [p1, p4, p2, p3], "error": str(exc)})
            continue
        report.worst_margin = min(report.worst_margin, x_e - x_d)
        if ordered:
            report.n_pass += 1
        elif len(report.counterexamples) < max_logged:
            report.counterexamples.append({"index": i, "p": [p1, p4, p2, p3],
                                           "abscissa_e": x_e, "abscissa_d": x_d})
    report.extra.update({"eps": eps, "delta": delta})
    return report


# ---------------------------------------------------------------------------
# (R_c, R_e) frontiers


def binary_frontier(eps: float, delta: float, n_gamma: int = 20_001) -> tuple[np.ndarray, np.ndarray]:
    """(R_c, R_e) of a uniform binary U through BSC(gamma), gamma on a grid over [0, 0.5]."""
    g = np.linspace(0.0, 0.5, n_gamma)
    h_gd = binary_entropy(concat(g, delta))
    h_ge = binary_entropy(concat(g, eps))
    r_c = 1.0 - h_gd
    r_e = (binary_entropy(delta) - binary_entropy(eps)) - (h_gd - h_ge)
    return r_c, r_e


def ternary_points(eps: float, delta: float, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """(R_c, R_e) for every ternary U on a grid: weights (w1, w2, 1-w1-w2), inputs Pr{X=0|u}."""
    ps = np.linspace(0.0, 1.0, resolution)
    ws = np.linspace(0.0, 1.0, resolution)
    fy = binary_entropy(concat(eps, ps))
    fz = binary_entropy(concat(delta, ps))
    w1, w2 = np.meshgrid(ws, ws, indexing="ij")
    keep = w1 + w2 <= 1.0 + 1e-12
    w1, w2 = w1[keep], w2[keep]
    w3 = np.clip(1.0 - w1 - w2, 0.0, 1.0)
    W = np.stack([w1, w2, w3], axis=1)  # (nw, 3)

    idx = np.array(list(itertools.product(range(resolution), repeat=3)))  # (np3, 3)
    P, FY, FZ = ps[idx], fy[idx], fz[idx]
    mean_p = W @ P.T   # (nw, np3)
    mean_fy = W @ FY.T
    mean_fz = W @ FZ.T
    h_z = binary_entropy(concat(delta, mean_p))
    r_c = h_z - mean_fz
    r_e = (binary_entropy(delta) - binary_entropy(eps)) - (mean_fz - mean_fy)
    return r_c.ravel(), r_e.ravel()


def frontier_ternary_vs_binary(eps: float, delta: float, grid_resolution: int = 20,
                               tol: float = 1e-3, max_logged: int = 20) -> VerifyReport:
    """Largest amount by which a grid ternary U beats the binary BSC frontier in R_e at equal R_c."""
    eps = check_crossover(eps, "eps")
    delta = check_crossover(delta, "delta")
    if not eps < delta:
        raise DomainError(f"need eps < delta, got eps={eps}, delta={delta}")
    bc, be = binary_frontier(eps, delta)
    order = np.argsort(bc)
    tc, te = ternary_points(eps, delta, grid_resolution)
    te_bin = np.interp(tc, bc[order], be[order])
    excess = te - te_bin
    report = VerifyReport("ternary_vs_binary_frontier", int(tc.size), None)
    report.n_pass = int(np.sum(excess <= tol))
    report.worst_margin = float(tol - excess.max())
    worst = np.argsort(excess)[::-1][:max_logged]
    report.counterexamples = [{"R_c": float(tc[j]), "R_e": float(te[j]), "R_e_binary": float(te_bin[j]),
                               "excess": float(excess[j])} for j in worst if excess[j] > tol]
    report.extra.update({
        "eps": eps, "delta": delta, "grid_resolution": grid_resolution, "tol": tol,
        "max_excess": float(excess.max()),
        "binary_endpoints": {"R_c_at_gamma_0": float(bc[0]), "R_e_at_gamma_0": float(be[0]),
                             "R_c_at_gamma_half": float(bc[-1]), "R_e_at_gamma_half": float(be[-1])},
        "ternary_max_R_c": float(tc.max()), "ternary_max_R_e": float(te.max()),
    })
    return report
