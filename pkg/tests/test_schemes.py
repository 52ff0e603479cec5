import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from fbwiretap.entropy import DomainError, binary_entropy, capacity, concat
from fbwiretap.schemes import (Scheme, SystemChannels, applicable_schemes, best_scheme,
                               full_encryption_rate, mixed_component_rates, mixed_feedback_rate,
                               optimize_repetition, pure_feedback_rate, repetition_equivalent,
                               repetition_feedback_rate, reversed_feedback_rate, table_row,
                               unscaled_rates, wyner_secrecy_capacity)

# 40-digit mpmath values, frozen
WYNER_001_002 = 0.06064740664590947233
RSU_0_01 = 0.46899559358928122125
RSU_01_01 = 0.21108145213899862077
PURE_002_001_01_01 = 0.097508840139983087161
REP3_002_001_01_01 = 0.028974876844093022607
REP_TABLE = {1: 0.22710069610974231149, 3: 0.10497269414053633752, 5: 0.050330142280482835885,
             7: 0.025610607178286462645, 9: 0.013647365859371842856, 11: 0.0075215032834939482849,
             13: 0.0042488061321787662968, 15: 0.0024446806962277610783}
RC_G01 = 0.48224737327473682908
RE_G01 = 0.036748503620166920364
MIXED_001_002_01_01 = 0.1010977624768973771  # pure branch beats the interior optimum 0.0994309509702585
REVERSED_002_001_01_03 = 0.27853696913461125115

crossover = st.floats(0.0, 0.5, allow_nan=False)
inner = st.floats(0.001, 0.499, allow_nan=False)


def ch(*a):
    return SystemChannels(*a)


def test_wyner():
    assert wyner_secrecy_capacity(0.01, 0.02) == pytest.approx(WYNER_001_002, abs=1e-14)
    assert wyner_secrecy_capacity(0.01, 0.02) == pytest.approx(0.0606, abs=6e-4)
    assert wyner_secrecy_capacity(0.02, 0.01) == 0.0
    assert wyner_secrecy_capacity(0.1, 0.1) == 0.0


def test_unscaled_rates():
    assert unscaled_rates(0.1, 0.0)[1] == 0.0
    assert unscaled_rates(0.0, 0.1)[1] == pytest.approx(RSU_0_01, abs=1e-13)
    r_t, r_s = unscaled_rates(0.1, 0.1)
    assert r_s == pytest.approx(RSU_01_01, abs=1e-13)
    assert r_t == pytest.approx(capacity(0.1))


def test_unscaled_rates_not_symmetric():
    assert unscaled_rates(0.05, 0.2)[1] != pytest.approx(unscaled_rates(0.2, 0.05)[1], abs=1e-3)


def test_pure_feedback():
    assert pure_feedback_rate(ch(0.02, 0.01, 0.1, 0.1)).overall_rate == pytest.approx(
        PURE_002_001_01_01, abs=1e-13)
    assert pure_feedback_rate(ch(0.5, 0.01, 0.1, 0.1)).overall_rate == 0.0
    assert pure_feedback_rate(ch(0.02, 0.01, 0.1, 0.0)).overall_rate == 0.0


def test_pure_feedback_subcapacity_forwarding():
    c = ch(0.02, 0.01, 0.1, 0.1)
    r = pure_feedback_rate(c, forwarding_rate=0.5).overall_rate
    assert r == pytest.approx(RSU_01_01 * 0.5 / 1.5, abs=1e-13)
    with pytest.raises(DomainError):
        pure_feedback_rate(c, forwarding_rate=0.9)


def test_repetition_equivalent():
    assert repetition_equivalent(0.17, 1) == 0.17
    assert repetition_equivalent(0.1, 3) == pytest.approx(0.028, abs=1e-15)
    assert repetition_equivalent(0.5, 7) == 0.5
    with pytest.raises(DomainError):
        repetition_equivalent(0.1, 4)
    with pytest.raises(DomainError):
        repetition_equivalent(0.1, 0)


def test_repetition_rate():
    c = ch(0.02, 0.01, 0.1, 0.1)
    assert repetition_feedback_rate(c, 1).overall_rate == pytest.approx(
        pure_feedback_rate(c).overall_rate, abs=1e-15)
    assert repetition_feedback_rate(c, 3).overall_rate == pytest.approx(REP3_002_001_01_01, abs=1e-13)
    for n in (1, 3, 5):
        assert repetition_feedback_rate(ch(0.02, 0.01, 0.5, 0.1), n).overall_rate == 0.0


def test_optimize_repetition_table():
    c = ch(0.02, 0.01, 0.05, 0.2)
    for n, want in REP_TABLE.items():
        assert repetition_feedback_rate(c, n).overall_rate == pytest.approx(want, abs=1e-13)
    best = optimize_repetition(c, n_max=15)
    assert best.detail["n_star"] == 1
    assert best.overall_rate == pytest.approx(max(REP_TABLE.values()), abs=1e-13)


def test_optimize_repetition_trivial():
    r = optimize_repetition(ch(0.02, 0.01, 0.1, 0.0))
    assert r.overall_rate == 0.0 and r.detail["n_star"] == 1


def test_mixed_components():
    assert mixed_component_rates(0.5, 0.01, 0.02) == pytest.approx((0.0, WYNER_001_002), abs=1e-14)
    rc, re = mixed_component_rates(0.0, 0.01, 0.02)
    assert rc == pytest.approx(capacity(0.02), abs=1e-14)
    assert re == pytest.approx(0.0, abs=1e-14)
    rc, re = mixed_component_rates(0.1, 0.01, 0.02)
    assert rc == pytest.approx(RC_G01, abs=1e-13)
    assert re == pytest.approx(RE_G01, abs=1e-13)
    with pytest.raises(DomainError):
        mixed_component_rates(0.1, 0.02, 0.01)


def _objective(g, ef, df, rsu):
    # written out independently of the package
    hgd = binary_entropy(g + df - 2 * g * df)
    hge = binary_entropy(g + ef - 2 * g * ef)
    rc = 1 - hgd
    re = binary_entropy(df) - binary_entropy(ef) - (hgd - hge)
    return (re + rc * rsu) / (rc + 1)


def test_mixed_against_dense_grid_oracle():
    c = ch(0.01, 0.02, 0.1, 0.1)
    rsu = RSU_01_01
    grid = 0.0005 * np.arange(1, 1001)
    vals = np.array([_objective(g, 0.01, 0.02, rsu) for g in grid])
    i = int(np.argmax(vals))
    res = minimize_scalar(lambda g: -_objective(g, 0.01, 0.02, rsu),
                          bounds=(grid[max(i - 1, 0)], grid[min(i + 1, 999)]), method="bounded",
                          options={"xatol": 1e-10})
    interior = -res.fun
    rep = mixed_feedback_rate(c)
    assert rep.detail["mixed_rate"] == pytest.approx(interior, abs=1e-12)
    assert rep.overall_rate == pytest.approx(MIXED_001_002_01_01, abs=1e-13)
    assert rep.detail["branch"] == "pure" and rep.detail["gamma_star"] == 0.0


def test_mixed_reduces_to_wyner():
    for c in (ch(0.01, 0.02, 0.1, 0.0), ch(0.01, 0.02, 0.5, 0.3)):
        rep = mixed_feedback_rate(c)
        assert rep.overall_rate == pytest.approx(WYNER_001_002, abs=1e-12)
        assert rep.detail["gamma_star"] == pytest.approx(0.5, abs=1e-6)


def test_reversed_value():
    rep = reversed_feedback_rate(ch(0.02, 0.01, 0.1, 0.3))
    assert rep.overall_rate == pytest.approx(REVERSED_002_001_01_03, abs=1e-11)


def test_reversed_zero_key():
    # the key travels over the swapped system, whose feedback link is (eps_f, delta_f)
    c = ch(0.02, 0.0, 0.2, 0.1)
    assert reversed_feedback_rate(c).detail["R_s_p"] == 0.0
    assert reversed_feedback_rate(c).overall_rate == 0.0
    assert full_encryption_rate(c) == 0.0


def test_reversed_vs_full_encryption():
    c = ch(0.01, 0.02, 0.1, 0.3)
    assert full_encryption_rate(c) < reversed_feedback_rate(c).overall_rate
    same = ch(0.05, 0.05, 0.1, 0.3)
    assert full_encryption_rate(same) == pytest.approx(reversed_feedback_rate(same).overall_rate)


def test_reversed_saturating_monotone():
    c_ab = capacity(0.01)
    vals = [c_ab * r / (min(c_ab, capacity(0.02)) + r) for r in np.linspace(0, 100, 50)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < c_ab


def test_table_rows():
    assert table_row(ch(0.02, 0.01, 0.2, 0.1)) == 1
    assert table_row(ch(0.02, 0.01, 0.1, 0.2)) == 2
    assert table_row(ch(0.01, 0.02, 0.2, 0.1)) == 3
    assert table_row(ch(0.01, 0.02, 0.1, 0.2)) == 4


def test_best_scheme_row1_pure_only():
    c = ch(0.02, 0.01, 0.2, 0.1)
    reports = applicable_schemes(c)
    assert [r.scheme for r in reports] == [Scheme.PURE_FEEDBACK]
    assert best_scheme(c).scheme is Scheme.PURE_FEEDBACK


def test_best_scheme_example_point():
    c = ch(0.01, 0.02, 0.02, 0.01)
    best = best_scheme(c)
    want = max(mixed_feedback_rate(c).overall_rate, reversed_feedback_rate(c).overall_rate)
    assert best.overall_rate == pytest.approx(want, abs=1e-15)
    assert best.detail["table_row"] == 3
    assert set(best.detail["candidates"]) == {"mixed_feedback", "reversed_feedback"}


def test_multimodal_flag_is_reported(caplog):
    with caplog.at_level(logging.WARNING):
        rep = mixed_feedback_rate(ch(0.01, 0.02, 0.3, 0.4))
    assert isinstance(rep.detail["multimodal"], bool)
    assert rep.detail["n_local_maxima"] >= 1


def test_system_channels_validation():
    with pytest.raises(DomainError):
        SystemChannels(0.6, 0.1, 0.1, 0.1)
    c = ch(0.01, 0.02, 0.1, 0.3)
    assert c.swapped() == ch(0.1, 0.3, 0.01, 0.02)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 0.45), st.floats(0.0, 0.5), inner, inner)
def test_mixed_dominates(ef, gap, eb, db):
    df = min(ef + gap * (0.5 - ef) + 1e-3, 0.5)
    c = ch(ef, df, eb, db)
    rate = mixed_feedback_rate(c).overall_rate
    assert rate >= wyner_secrecy_capacity(ef, df) - 1e-9
    assert rate >= pure_feedback_rate(c).overall_rate - 1e-9
    assert 0.0 <= mixed_feedback_rate(c).detail["gamma_star"] <= 0.5


@given(st.floats(0.0, 0.499), crossover, st.floats(0.0, 0.499), st.floats(1e-3, 0.5))
def test_pure_strictly_positive(ef, df, eb, db):
    assert pure_feedback_rate(ch(ef, df, eb, db)).overall_rate > 0.0


@given(crossover, crossover, crossover, crossover)
def test_repetition_n1_is_pure(ef, df, eb, db):
    c = ch(ef, df, eb, db)
    assert optimize_repetition(c, n_max=1).overall_rate == pure_feedback_rate(c).overall_rate


@given(crossover, st.sampled_from([1, 3, 5, 7, 9]))
def test_repetition_equivalent_reduces_crossover(p, n):
    assert repetition_equivalent(p, n) <= p + 1e-15


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 0.45), st.floats(0.0, 0.5), inner, inner)
def test_reversed_beats_full_encryption(ef, gap, eb, db):
    df = min(ef + gap * (0.5 - ef) + 1e-3, 0.5)
    c = ch(ef, df, eb, db)
    rev = reversed_feedback_rate(c)
    if rev.detail["R_s_p"] > 1e-9:
        assert rev.overall_rate > full_encryption_rate(c)


@given(crossover, crossover, crossover, crossover)
def test_rates_nonnegative(ef, df, eb, db):
    c = ch(ef, df, eb, db)
    assert pure_feedback_rate(c).overall_rate >= 0
    assert reversed_feedback_rate(c).overall_rate >= 0
