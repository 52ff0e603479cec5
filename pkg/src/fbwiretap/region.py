"""Rate-equivocation regions of the form {0<=R<=R_max, 0<=d<=H_s, Rd <= H_s C_s}.

The block-length bookkeeping of the feedback construction (M forward uses,
n feedback uses) is folded into one scalar, the forwarding rate n/M; the
fraction of channel uses that carry data is then rate/(rate + 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import DomainError
from .schemes import SystemChannels, mixed_component_rates, unscaled_rates

_REL_TOL = 1e-12


@dataclass(frozen=True)
class RateEquivocationRegion:
    r_max: float
    secrecy_rate: float
    h_s: float = 1.0

    def __post_init__(self):
        if self.h_s <= 0.0:
            raise DomainError(f"h_s must be positive, got {self.h_s}")
        if not (0.0 <= self.secrecy_rate <= self.r_max * (1.0 + _REL_TOL)):
            raise DomainError(
                f"need 0 <= secrecy_rate <= r_max, got secrecy_rate={self.secrecy_rate}, r_max={self.r_max}")

    def contains(self, r: float, d: float) -> bool:
        return contains(self, r, d)


def contains(region: RateEquivocationRegion, r: float, d: float) -> bool:
    """Membership test; a relative slack of 1e-12 absorbs round-off on the boundary."""
    if r < 0.0 or d < 0.0:
        raise DomainError("rate and equivocation must be non-negative")
    slack = 1.0 + _REL_TOL
    return (r <= region.r_max * slack
            and d <= region.h_s * slack
            and r * d <= region.h_s * region.secrecy_rate * slack)


def unscaled_region(eps_b: float, delta_b: float, h_s: float = 1.0) -> RateEquivocationRegion:
    """Region of the feedback kernel's equivalent degraded pair."""
    r_t, r_s = unscaled_rates(eps_b, delta_b)
    return RateEquivocationRegion(r_t, r_s, h_s)


def scaled_region(unscaled: RateEquivocationRegion, forwarding_rate: float) -> RateEquivocationRegion:
    """Shrink both rate fields by forwarding_rate / (forwarding_rate + 1)."""
    if forwarding_rate <= 0.0:
        raise DomainError(f"forwarding_rate must be positive, got {forwarding_rate}")
    f = forwarding_rate / (forwarding_rate + 1.0)
    return RateEquivocationRegion(unscaled.r_max * f, unscaled.secrecy_rate * f, unscaled.h_s)


def k_upper_bound(m: int, secrecy_rate: float, d: float) -> float:
    """Largest number of secret source symbols in an m-symbol codeword at equivocation d."""
    if d == 0:
        raise ZeroDivisionError("equivocation d must be positive")
    if d < 0 or m < 0:
        raise DomainError("m and d must be non-negative")
    return m * secrecy_rate / d


def boundary(region: RateEquivocationRegion, n_points: int) -> list[tuple[float, float]]:
    """Upper boundary d(r) = min(h_s, h_s C_s / r) sampled uniformly in r."""
    if n_points < 2:
        raise DomainError("n_points must be at least 2")
    rs = np.linspace(0.0, region.r_max, n_points)
    out = []
    for r in rs:
        r = float(r)
        if r <= region.secrecy_rate:
            d = region.h_s
        else:
            d = region.h_s * region.secrecy_rate / r
        out.append((r, d))
    return out


def mixed_region_product(ch: SystemChannels, gamma: float, h_s: float = 1.0) -> float:
    """Asymptotic R*d product of the mixed construction at auxiliary crossover gamma."""
    r_c, r_e = mixed_component_rates(gamma, ch.eps_f, ch.delta_f)
    _, r_s_u = unscaled_rates(ch.eps_b, ch.delta_b)
    return h_s * (r_e + r_c * r_s_u) / (r_c + 1.0)
