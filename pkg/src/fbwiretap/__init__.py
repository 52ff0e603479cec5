"""Secrecy rates of binary symmetric wiretap systems with a public feedback link."""

from .entropy import (DomainError, binary_entropy, capacity, concat, inv_binary_entropy,
                      unconcat)
from .region import RateEquivocationRegion, scaled_region, unscaled_region
from .schemes import (Scheme, SchemeReport, SystemChannels, best_scheme, mixed_feedback_rate,
                      optimize_repetition, pure_feedback_rate, reversed_feedback_rate,
                      wyner_secrecy_capacity)

__version__ = "0.1.0"

__all__ = [
    "DomainError", "binary_entropy", "capacity", "concat", "inv_binary_entropy", "unconcat",
    "RateEquivocationRegion", "scaled_region", "unscaled_region",
    "Scheme", "SchemeReport", "SystemChannels", "best_scheme", "mixed_feedback_rate",
    "optimize_repetition", "pure_feedback_rate", "reversed_feedback_rate",
    "wyner_secrecy_capacity",
]
