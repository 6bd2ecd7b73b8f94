"""Exact truncated q-series for affine sl2: Weyl denominators, p-series, radial parts and spherical functions."""

from .lattice import ALPHA0, ALPHA1, DELTA, RHO, VARPI0, VARPI1, Weight, WeylElement, casimir_eigenvalue, pairing
from .radial import Character1D, RadialOperatorSpec, apply_radial
from .series import TruncatedSeries
from .spherical import SphericalResult, admissible, heun_parameters, lambda0, solve_spherical

__all__ = [
    "ALPHA0", "ALPHA1", "DELTA", "RHO", "VARPI0", "VARPI1",
    "Weight", "WeylElement", "casimir_eigenvalue", "pairing",
    "Character1D", "RadialOperatorSpec", "apply_radial",
    "TruncatedSeries",
    "SphericalResult", "admissible", "heun_parameters", "lambda0", "solve_spherical",
]
