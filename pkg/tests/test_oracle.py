from fractions import Fraction

import pytest

from casimir_lab.characters import kac_weyl_character
from casimir_lab.lattice import ALPHA0, ALPHA1, Weight
from casimir_lab.oracle import HighestWeightWords, oracle_spherical, weight_multiplicity
from casimir_lab.radial import Character1D
from casimir_lab.spherical import InadmissibleError

C00, C11, C20 = Character1D(0, 0), Character1D(1, 1), Character1D(2, 0)


def test_trivial():
    assert oracle_spherical(Weight(), C00, C00, 3).terms == {(0, 0): 1}


def test_form_normalization_and_sl2_string():
    words = HighestWeightWords(Weight(2, 2, 0))
    assert words.form((), ()) == 1
    # S(f1 v, f1 v) = lambda(h1)
    assert words.form((1,), (1,)) == 2
    assert words.form((1, 1), (1, 1)) == 4
    assert words.form((1, 1, 1), (1, 1, 1)) == 0


@pytest.mark.parametrize("lam", [Weight(0, 1, 0), Weight(1, 1, 0), Weight(2, 2, 0), Weight(1, 2, 0), Weight(0, 3, 0)])
def test_multiplicities_match_characters(lam):
    ch = kac_weyl_character(lam, lam.g2 - 8)
    for x in range(3):
        for y in range(3):
            if x + y > 4:
                continue
            nu = lam - ALPHA0 * x - ALPHA1 * y
            assert weight_multiplicity(lam, nu) == ch.coefficient(nu)


def test_frozen_regression_values():
    # values produced by the oracle on first verified run
    assert oracle_spherical(Weight(2, 2, 0), C00, C00, 2).terms == {(2, 0): 1, (-2, 0): 1}
    assert oracle_spherical(Weight(1, 2, 0), C11, C11, 2).terms == {(1, 0): 1, (-1, 0): 1, (3, -1): 1, (1, -1): Fraction(1, 2)}
    assert oracle_spherical(Weight(0, 2, 0), C20, C20, 2).terms == {(0, 0): 1, (2, -1): 2, (4, -2): 1}


def test_depth_one_coefficient_of_sl2_string():
    # e^{lam - alpha1} has coefficient 0 for lam = 2 varpi1 and trivial characters
    f = oracle_spherical(Weight(2, 2, 0), C00, C00, 1)
    assert f.coefficient(Weight(0, 2, 0)) == 0


def test_bounds_and_admissibility():
    with pytest.raises(ValueError):
        oracle_spherical(Weight(0, 2, 0), C00, C00, 9)
    with pytest.raises(InadmissibleError):
        oracle_spherical(Weight(1, 1, 0), C00, C00, 1)
