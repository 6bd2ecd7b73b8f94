from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from casimir_lab.coefficients import I, GaussianRational, gaussian, imag_part, parse_scalar, real_part

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)
gaussians = st.builds(GaussianRational, fracs, fracs)


@given(gaussians, gaussians, gaussians)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x


@given(gaussians)
def test_division(x):
    assume(x != 0)
    assert x * (1 / x) == 1
    assert (x / x) == 1


@given(gaussians, fracs)
def test_mixed_arithmetic(x, r):
    assert x + r == x + GaussianRational(r, 0)
    assert r * x == GaussianRational(r, 0) * x
    assert r - x == GaussianRational(r, 0) - x


@given(gaussians)
def test_conjugate_and_complex(x):
    assert imag_part(x * x.conjugate()) == 0
    assert abs(complex(x) - complex(float(x.re), float(x.im))) < 1e-12


def test_unit():
    assert I * I == -1
    assert gaussian(Fraction(3, 1)) == 3 and isinstance(gaussian(Fraction(3, 1)), int)
    assert isinstance(gaussian(1, 1), GaussianRational)


@given(gaussians)
def test_string_round_trip(x):
    assert parse_scalar(str(real_part(x)), str(imag_part(x))) == x
