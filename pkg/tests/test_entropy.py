import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbwiretap.entropy import (DomainError, binary_entropy, capacity, check_crossover, concat,
                               concat_entropy_second_derivative, inv_binary_entropy, mu, unconcat)

# 40-digit mpmath evaluations of the defining formulas, frozen
H_001 = 0.080793135895911172825
CAP_002 = 0.85855945745817935485

prob = st.floats(0.0, 1.0, allow_nan=False)
half = st.floats(0.0, 0.5, allow_nan=False)


def test_entropy_endpoints():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0


def test_entropy_oracle():
    assert binary_entropy(0.01) == pytest.approx(H_001, abs=1e-12)


def test_entropy_array_matches_scalar():
    import numpy as np
    xs = np.linspace(0, 1, 11)
    assert np.allclose(binary_entropy(xs), [binary_entropy(float(x)) for x in xs], atol=1e-15)


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_entropy_rejects(bad):
    with pytest.raises(DomainError):
        binary_entropy(bad)


def test_inverse_endpoints_and_roundtrip():
    assert inv_binary_entropy(0.0) == 0.0
    assert inv_binary_entropy(1.0) == 0.5
    assert inv_binary_entropy(binary_entropy(0.11)) == pytest.approx(0.11, abs=1e-10)
    with pytest.raises(DomainError):
        inv_binary_entropy(1.5)


def test_concat_values():
    assert concat(0.0, 0.3) == 0.3
    assert concat(0.5, 0.2) == 0.5
    # two error bits XORed: 0.02*0.99 + 0.98*0.01
    assert concat(0.02, 0.01) == pytest.approx(0.0296, abs=1e-15)


def test_unconcat_inverts():
    assert unconcat(concat(0.13, 0.07), 0.07) == pytest.approx(0.13, abs=1e-14)
    with pytest.raises(DomainError):
        unconcat(0.3, 0.5)


def test_capacity():
    assert capacity(0.0) == 1.0
    assert capacity(0.5) == 0.0
    assert capacity(0.02) == pytest.approx(CAP_002, abs=1e-12)


def test_mu():
    assert mu(0.0) == 0.0
    assert mu(0.25) == pytest.approx(0.75, abs=1e-15)
    with pytest.raises(DomainError):
        mu(0.5)


def test_crossover_check_suggests_relabel():
    with pytest.raises(DomainError, match="relabel"):
        check_crossover(0.7)
    with pytest.raises(DomainError):
        check_crossover(-0.01)


@given(prob)
def test_entropy_symmetric(p):
    assert binary_entropy(p) == pytest.approx(binary_entropy(1.0 - p), abs=1e-12)


@given(prob, prob)
def test_entropy_concave_midpoint(a, b):
    assert binary_entropy(0.5 * (a + b)) >= 0.5 * (binary_entropy(a) + binary_entropy(b)) - 1e-12


@given(half, half)
def test_concat_lower_bound_and_symmetry(a, b):
    c = concat(a, b)
    assert c >= a - 1e-15
    assert c == pytest.approx(concat(b, a), abs=1e-15)
    assert c <= 0.5 + 1e-15


@given(half, half, half)
def test_concat_monotone(a, b, d):
    lo, hi = sorted((a, b))
    assert concat(lo, d) <= concat(hi, d) + 1e-15
    assert concat(d, lo) <= concat(d, hi) + 1e-15


@given(half)
def test_inverse_roundtrip(p):
    assert inv_binary_entropy(binary_entropy(p)) == pytest.approx(p, abs=1e-10)


@settings(max_examples=200)
@given(st.floats(0.0, 0.49), st.floats(0.01, 0.49))
def test_concat_entropy_curvature_matches_fd(a, x):
    step = 1e-4
    f = lambda t: binary_entropy(concat(a, t))  # noqa: E731
    fd = (f(x + step) - 2 * f(x) + f(x - step)) / step ** 2
    exact = concat_entropy_second_derivative(a, x)
    assert fd == pytest.approx(exact, rel=1e-4)
    assert exact < 0 and math.isfinite(exact)
