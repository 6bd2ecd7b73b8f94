from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from casimir_lab.lattice import DELTA, Weight, casimir_eigenvalue
from casimir_lab.radial import (
    TRIVIAL,
    Character1D,
    RadialOperatorSpec,
    apply_pi00,
    apply_radial,
    conjugation_identity_check,
    denominator_identity_check,
    pi00_eigen_on_delta_line,
    potential_coefficients,
    tail_transitions,
    v_identity_check,
)
from casimir_lab.series import monomial
from casimir_lab.spherical import heun_parameters
from casimir_lab.theta import ThetaChar

WEIGHTS = [Weight(0, 0, 0), Weight(0, 1, 0), Weight(1, 1, 0), Weight(2, 2, 0), Weight(0, 0, 1), Weight(2, 2, -1)]


def test_pi00_on_delta_line():
    for n in range(6):
        assert pi00_eigen_on_delta_line(n)
        assert casimir_eigenvalue(DELTA * n) == 4 * n


def test_pi00_diagonal_part():
    lam = Weight(2, 2, 0)
    out = apply_pi00(monomial(lam), lam.g2 - 10)
    assert out.coefficient(lam) == casimir_eigenvalue(lam)


def test_tail_transitions_sum_roots():
    trans = dict(tail_transitions(8))
    # 2 delta arises from delta (k=1) only; 4 alpha1 would have grade 8 from alpha1 with k=2
    assert trans[DELTA * 2] == DELTA
    assert trans[Weight(4, 0, 0)] == Weight(2, 0, 0)


def test_v_identity_and_control():
    assert v_identity_check(-24)["pass"]
    assert not v_identity_check(-24, drop_cross_terms=True)["pass"]


def test_denominator_identities():
    assert all(r["pass"] for r in denominator_identity_check(-40))


def test_conjugation_identity():
    pairs = [((0, 0), (0, 0)), ((1, 1), (1, 1)), ((2, 0), (0, 0)), ((1, 3), (1, 1))]
    for eta, chi in pairs:
        spec = RadialOperatorSpec(Character1D(*eta), Character1D(*chi))
        assert all(r["pass"] for r in conjugation_identity_check(spec, WEIGHTS, -16))


def test_conjugation_identity_detects_perturbation():
    spec = RadialOperatorSpec(TRIVIAL, TRIVIAL, perturb=Fraction(1, 7))
    reports = conjugation_identity_check(spec, [Weight(2, 2, 0)], -12)
    assert not reports[0]["pass"] and "witness" in reports[0]


def test_radial_preserves_window():
    f = monomial(Weight(1, 2, 0))
    spec = RadialOperatorSpec(Character1D(1, 1), Character1D(1, 1))
    out = apply_radial(spec, f, -13)
    assert out.g2_floor == -13


ints = st.integers(-6, 6)


@given(ints, ints, ints, ints)
def test_heun_parameters_reassemble_potential(a0, a1, b0, b1):
    eta, chi = Character1D(b0, b1), Character1D(a0, a1)
    coeffs = potential_coefficients(eta, chi, conjugated=True)
    params = heun_parameters(eta, chi)
    c = dict(zip([ThetaChar(1, 1), ThetaChar(1, 0), ThetaChar(0, 0), ThetaChar(0, 1)], params.as_tuple()))
    for char, l in c.items():
        assert coeffs[char] == 4 * l * (l + 1)
