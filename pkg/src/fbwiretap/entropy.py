"""Scalar information-theoretic primitives for binary symmetric channels.

All entropies are in bits. Crossover probabilities live on [0, 0.5]; a BSC
with crossover p > 0.5 is the same channel as 1 - p with the output bits
relabeled, so the larger half is rejected instead of silently folded.
"""

from __future__ import annotations

import math

import numpy as np

LN2 = math.log(2.0)


class DomainError(ValueError):
    """Raised when an argument falls outside the domain of a formula."""


def check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise DomainError(f"{name}={p!r} is not a probability in [0, 1]")
    return p


def check_crossover(p: float, name: str = "p") -> float:
    """Validate a BSC crossover probability and return it as a float."""
    p = float(p)
    if math.isnan(p) or p < 0.0:
        raise DomainError(f"{name}={p!r} is not a crossover probability in [0, 0.5]")
    if p > 0.5:
        raise DomainError(
            f"{name}={p!r} exceeds 0.5; relabel the output bits and use {1.0 - p:.6g} instead"
        )
    return p


def binary_entropy(p):
    """Binary entropy h(p) in bits, with 0 log 0 = 0.

    Accepts a scalar or an array. Scalars give back a Python float.
    """
    if isinstance(p, (float, int)):
        return _h_scalar(float(p))
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise DomainError(f"binary_entropy needs p in [0, 1], got {p!r}")
    q = 1.0 - arr
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.where(arr > 0.0, arr * np.log2(arr), 0.0) - np.where(q > 0.0, q * np.log2(q), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def _h_scalar(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"binary_entropy needs p in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def inv_binary_entropy(y: float) -> float:
    """Return the unique p in [0, 0.5] with h(p) = y.

    Plain bisection on [0, 0.5]; iterates until the bracket stops shrinking,
    which is well below the 1e-12 absolute target.
    """
    y = float(y)
    if math.isnan(y) or y < 0.0 or y > 1.0:
        raise DomainError(f"inv_binary_entropy needs y in [0, 1], got {y!r}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 0.5
    lo, hi = 0.0, 0.5
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if binary_entropy(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def concat(a, b):
    """Crossover of two BSCs in series: a + b - 2ab.

    Evaluated as a + b(1 - 2a) so that a = 0.5 gives exactly 0.5.
    """
    return a + b * (1.0 - 2.0 * a)


def unconcat(c: float, b: float) -> float:
    """Inverse of p -> concat(p, b) on [0, 0.5], for b in [0, 0.5)."""
    if b >= 0.5:
        raise DomainError("a BSC with crossover 0.5 cannot be inverted")
    p = (c - b) / (1.0 - 2.0 * b)
    return min(max(p, 0.0), 0.5)


def capacity(p):
    """Capacity 1 - h(p) of a BSC, in bits per channel use."""
    return 1.0 - binary_entropy(p)


def mu(x: float) -> float:
    """x(1-x)/(1-2x)^2, the curvature term of h(a -> x) in a.

    Diverges at x = 0.5, which is reported rather than returned as inf.
    """
    x = float(x)
    if x < 0.0 or x > 0.5 or math.isnan(x):
        raise DomainError(f"mu needs x in [0, 0.5), got {x!r}")
    if x == 0.5:
        raise DomainError("mu has a pole at x = 0.5")
    return x * (1.0 - x) / (1.0 - 2.0 * x) ** 2


def concat_entropy_second_derivative(a: float, x: float) -> float:
    """d^2/dx^2 of h(concat(a, x)), in closed form."""
    return -1.0 / (LN2 * (x * (1.0 - x) + mu(a)))
