import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_lab.coefficients import GaussianRational
from casimir_lab.lattice import ALPHA1, DELTA, RHO, Weight, pairing
from casimir_lab.series import (
    NEG_INF,
    TruncatedSeries,
    add,
    derivative_pairing,
    equal_on_window,
    exp_series,
    invert,
    laplace_apply,
    log_one_plus,
    monomial,
    mul,
    tau1_expand,
)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def level0_series(draw, floor=-16, negative=False):
    n = draw(st.integers(0, 6))
    terms = {}
    for _ in range(n):
        a = draw(st.integers(-8, 8))
        m = draw(st.integers(-4, 1))
        key = (a, m)
        g = a + 4 * m
        if negative and g >= 0:
            continue
        terms[key] = draw(coeffs)
    return TruncatedSeries(0, terms, floor)


@st.composite
def headed_series(draw, floor=-20):
    """Unit top term e^0 plus lower terms."""
    f = draw(level0_series(floor=floor, negative=True))
    return add(f, TruncatedSeries(0, {(0, 0): 1}, floor))


def test_monomial_and_window():
    f = monomial(Weight(2, 1, -1), 3)
    assert f.is_exact and f.terms == {(2, -1): 3}
    assert TruncatedSeries(0, {(0, -5): 1, (0, 0): 2}, -8).terms == {(0, 0): 2}


def test_mul_window_rule():
    f = TruncatedSeries(0, {(0, 0): 1, (-2, 0): 1}, -10)
    g = TruncatedSeries(0, {(0, 0): 1}, -4)
    h = mul(f, g)
    # floor = max(F_f + C_g, F_g + C_f) = max(-10 + 0, -4 + 0)
    assert h.g2_floor == -4


@given(level0_series(), level0_series(), level0_series())
def test_ring_laws_on_windows(f, g, h):
    assert equal_on_window(mul(f, g), mul(g, f))[0]
    assert equal_on_window(mul(mul(f, g), h), mul(f, mul(g, h)))[0]
    assert equal_on_window(mul(f, add(g, h)), add(mul(f, g), mul(f, h)))[0]


@given(level0_series(floor=-30), level0_series(floor=-30), st.integers(-20, 0))
def test_truncation_commutes_with_products(f, g, cut):
    """Whatever mul claims to know must not change when inputs are known further down."""
    full = mul(f, g)
    fc, gc = f.truncate(cut), g.truncate(cut)
    part = mul(fc, gc)
    assert equal_on_window(full, part)[0]


@given(headed_series())
def test_invert(f):
    inv = invert(f)
    assert equal_on_window(mul(f, inv), TruncatedSeries(0, {(0, 0): 1}))[0]


@given(level0_series(negative=True))
def test_exp_log_inverse(f):
    e = exp_series(f)
    back = log_one_plus(add(e, TruncatedSeries(0, {(0, 0): -1}, e.g2_floor)))
    assert equal_on_window(back, f)[0]


@given(level0_series(negative=True), level0_series(negative=True))
def test_exp_is_multiplicative(f, g):
    assert equal_on_window(exp_series(add(f, g)), mul(exp_series(f), exp_series(g)))[0]


def test_tau1_expand_geometric():
    f = tau1_expand(Weight(), [(ALPHA1, -1, 2)], -12)
    # 1/(1 - y^-1)^2 = sum (k+1) y^-k
    for k in range(7):
        assert f.coefficient((-2 * k, 0)) == k + 1
    assert f.g2_floor == -12


def test_derivative_pairing_and_laplace():
    lam = Weight(3, 2, -1)
    f = monomial(lam, 2)
    assert derivative_pairing(RHO, f).terms == {(3, -1): 2 * pairing(RHO, lam)}
    assert laplace_apply(f).terms == {(3, -1): 2 * pairing(lam, lam)}


def test_equal_on_window_witness():
    f = TruncatedSeries(0, {(0, 0): 1, (0, -1): 2}, -8)
    g = TruncatedSeries(0, {(0, 0): 1, (0, -1): 3}, -8)
    ok, rep = equal_on_window(f, g)
    assert not ok
    assert rep["witness"]["d"] == -1 and rep["witness"]["grade"] == -4


def test_equal_on_window_ignores_below_common_floor():
    f = TruncatedSeries(0, {(0, 0): 1, (0, -3): 5}, -12)
    g = TruncatedSeries(0, {(0, 0): 1}, -8)
    assert equal_on_window(f, g)[0]


@given(level0_series())
def test_json_round_trip(f):
    f = add(f, TruncatedSeries(0, {(1, 0): GaussianRational(Fraction(1, 3), -2)}, f.g2_floor))
    text = json.dumps(f.to_json())
    g = TruncatedSeries.from_json(json.loads(text))
    assert json.dumps(g.to_json()) == text
    assert g.terms == f.terms and g.g2_floor == f.g2_floor


def test_exact_series_json():
    f = monomial(DELTA)
    obj = f.to_json()
    assert obj["g2_floor"] is None
    assert TruncatedSeries.from_json(obj).g2_floor == NEG_INF


def test_invert_needs_window_for_exact_multiterm():
    with pytest.raises(ValueError):
        invert(TruncatedSeries(0, {(0, 0): 1, (-2, 0): 1}))
