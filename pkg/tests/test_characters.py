from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_lab.characters import (
    alternating_sum,
    denominator1,
    denominator2,
    denominator_half,
    denominator_square_check,
    divide_exact,
    kac_weyl_character,
    laplace_eigen_check,
    orbit_sum,
    support_parity_check,
    window_w_invariance,
)
from casimir_lab.lattice import RHO, VARPI0, VARPI1, Weight
from casimir_lab.series import TruncatedSeries, equal_on_window, mul

dominant = st.builds(lambda k, a, m: Weight(min(a, k), k, m), st.integers(1, 4), st.integers(0, 4), st.integers(-2, 2))

PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_denominator_tops():
    assert denominator1(-10).coefficient(RHO) == 1
    assert denominator2(-10).coefficient(RHO * 2) == 1
    assert denominator_half(-10).coefficient(RHO) == 1


def test_denominator_half_squares_to_denominator2():
    assert denominator_square_check(-60)["pass"]


def test_denominator_laplace_eigenvalues():
    assert laplace_eigen_check(denominator2(-40), 2)[0]
    assert laplace_eigen_check(denominator1(-40), Fraction(1, 2))[0]
    assert not laplace_eigen_check(denominator1(-40), 2)[0]


def test_denominators_are_alternating():
    for f in (denominator1(-30), denominator2(-30)):
        assert window_w_invariance(f, signed=True)["pass"]


def test_denominator1_is_alternating_sum_of_rho():
    assert equal_on_window(denominator1(-40), alternating_sum(Weight(), -40 + 0).shifted(RHO))[0]


@given(dominant, st.integers(0, 30))
def test_orbit_sums_are_invariant(lam, depth):
    f = orbit_sum(lam, lam.g2 - depth)
    assert window_w_invariance(f)["pass"]
    assert f.coefficient(lam) == 1


@given(dominant)
def test_characters_are_integral_nonnegative_and_invariant(lam):
    ch = kac_weyl_character(lam, lam.g2 - 16)
    assert ch.coefficient(lam) == 1
    for c in ch.terms.values():
        assert isinstance(c, int) and c > 0
    assert window_w_invariance(ch)["pass"]


def test_basic_representation_string_is_partition_numbers():
    ch = kac_weyl_character(VARPI0, -4 * (len(PARTITIONS) - 1))
    for n, p in enumerate(PARTITIONS):
        assert ch.coefficient(Weight(0, 1, -n)) == p


def test_weyl_character_formula_against_orbit_sums():
    """ch V(varpi1) times delta1 equals the alternating sum over rho + varpi1."""
    lam = VARPI1
    ch = kac_weyl_character(lam, lam.g2 - 24)
    lhs = mul(ch, denominator1(RHO.g2 - 24))
    rhs = alternating_sum(lam, lam.g2 - 24).shifted(RHO)
    assert equal_on_window(lhs, rhs)[0]


def test_divide_exact():
    f = kac_weyl_character(Weight(0, 2, 0), -20)
    g = orbit_sum(Weight(0, 1, 0), -20)
    q = divide_exact(mul(f, g), g)
    assert equal_on_window(q, f)[0]


def test_window_invariance_negative_control():
    f = orbit_sum(Weight(0, 2, 0), -20)
    terms = dict(f.terms)
    key = min(terms, key=f.grade)
    terms[key] = 2
    report = window_w_invariance(TruncatedSeries(f.level, terms, f.g2_floor))
    assert not report["pass"] and "witness" in report


def test_window_invariance_rejects_level_zero():
    with pytest.raises(ValueError):
        window_w_invariance(TruncatedSeries(0, {(0, 0): 1}, -4))


def test_support_parity():
    assert support_parity_check(orbit_sum(Weight(2, 2, 0), -20))["pass"]
    assert not support_parity_check(orbit_sum(Weight(1, 2, 0), -20))["pass"]


def test_orbit_sum_rejects_non_dominant():
    with pytest.raises(ValueError):
        orbit_sum(Weight(3, 2, 0), -10)
