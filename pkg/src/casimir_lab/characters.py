"""Weyl denominators, orbit sums, Kac-Weyl characters and window symmetry tests."""

from __future__ import annotations

from fractions import Fraction

from .lattice import RHO, Weight, dominant_representative, orbit, positive_roots_up_to
from .series import (
    NEG_INF,
    TruncatedSeries,
    equal_on_window,
    exp_series,
    invert,
    laplace_apply,
    mul,
)


def _product_one_minus(top: Weight, scale: int, g2_floor: int) -> TruncatedSeries:
    """e^top * prod over positive roots of (1 - e^{-scale*alpha}), exact on grades >= g2_floor."""
    depth = top.g2 - g2_floor
    out = TruncatedSeries(top.k, {(top.a, top.m): 1}, g2_floor)
    for root in positive_roots_up_to(depth // scale):
        w = root.weight * scale
        factor = TruncatedSeries(0, {(0, 0): 1, (-w.a, -w.m): -1})
        out = mul(out, factor, g2_floor)
    return out


def denominator1(g2_floor: int) -> TruncatedSeries:
    """e^rho prod (1 - e^{-alpha}); level 2."""
    return _product_one_minus(RHO, 1, g2_floor)


def denominator2(g2_floor: int) -> TruncatedSeries:
    """e^{2 rho} prod (1 - e^{-2 alpha}); level 4."""
    return _product_one_minus(RHO * 2, 2, g2_floor)


def denominator_half(g2_floor: int) -> TruncatedSeries:
    """The square root of denominator2 with leading term e^rho, via exp of a log sum."""
    rel = g2_floor - RHO.g2
    terms: dict = {}
    for root in positive_roots_up_to(-rel // 2 if rel < 0 else 0):
        n = 1
        while 2 * n * root.g2 <= -rel:
            key = (-2 * n * root.weight.a, -2 * n * root.weight.m)
            terms[key] = terms.get(key, 0) - Fraction(1, 2 * n)
            n += 1
    body = exp_series(TruncatedSeries(0, terms, rel), rel)
    return body.shifted(RHO)


def orbit_sum(lam: Weight, g2_floor: int) -> TruncatedSeries:
    """Sum of e^mu over the W-orbit of a dominant weight, on grades >= g2_floor."""
    if lam.k < 0:
        raise ValueError(f"orbit sums need level >= 0, got {lam.k}")
    if lam.k == 0 and lam.a != 0:
        raise ValueError("at level 0 only multiples of delta have finite orbit sums")
    if lam.k > 0 and not lam.is_dominant():
        raise ValueError(f"{lam} is not dominant")
    return TruncatedSeries(lam.k, {(mu.a, mu.m): 1 for mu, _ in orbit(lam, g2_floor)}, g2_floor)


def alternating_sum(lam: Weight, g2_floor: int) -> TruncatedSeries:
    """sum over W of sgn(w) e^{w(lam + rho) - rho}, on grades >= g2_floor."""
    shifted = lam + RHO
    terms = {}
    for mu, w in orbit(shifted, g2_floor + RHO.g2):
        nu = mu - RHO
        terms[(nu.a, nu.m)] = w.sign
    return TruncatedSeries(lam.k, terms, g2_floor)


def kac_weyl_character(lam: Weight, g2_floor: int) -> TruncatedSeries:
    """ch V(lam) as the alternating sum divided by prod (1 - e^{-alpha})."""
    if lam.k < 0 or not lam.is_dominant():
        raise ValueError(f"{lam} is not dominant of non-negative level")
    num = alternating_sum(lam, g2_floor)
    den = _product_one_minus(Weight(0, 0, 0), 1, g2_floor - lam.g2)
    return mul(num, invert(den), g2_floor)


def divide_exact(f: TruncatedSeries, g: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """f / g for g with a unique top term; the window follows the invert and mul rules."""
    return mul(f, invert(g), g2_floor)


def window_w_invariance(f: TruncatedSeries, safety: int = 0, signed: bool = False) -> dict:
    """Check c_{w mu} = c_mu (or sgn(w) c_mu when signed) for every orbit meeting the window.

    Orbits are grouped by their dominant member; an orbit is asserted when its
    dominant member has grade >= floor + safety, and then every member inside
    the window is compared. In the signed case a dominant member fixed by a
    reflection must carry coefficient zero.
    """
    if f.level < 1:
        raise ValueError("window invariance is only tested at level >= 1")
    if f.scale != 1:
        raise ValueError("window invariance needs integral exponents")
    floor = f.g2_floor
    if floor == NEG_INF:
        raise ValueError("an exact series has no finite window to test")
    reps = set()
    for key in f.terms:
        nu, _ = dominant_representative(f.weight_of(key))
        reps.add(nu)
    checked = 0
    for nu in sorted(reps, key=lambda w: (-w.g2, w.a, w.m)):
        if nu.g2 < floor + safety:
            continue
        base = f.coefficient(nu)
        regular = 0 < nu.a < nu.k
        if signed and not regular and base:
            return _fail(nu, nu, base, 0, checked, floor, safety)
        for mu, w in orbit(nu, floor):
            want = base * w.sign if signed else base
            got = f.coefficient(mu)
            if got != want:
                return _fail(nu, mu, want, got, checked, floor, safety)
        checked += 1
    return {"pass": True, "orbits_checked": checked, "window": floor, "safety": safety}


def _fail(nu, mu, want, got, checked, floor, safety) -> dict:
    return {
        "pass": False,
        "orbits_checked": checked,
        "window": floor,
        "safety": safety,
        "witness": {"dominant": nu.to_json(), "member": mu.to_json(), "expected": str(want), "found": str(got)},
    }


def support_parity_check(f: TruncatedSeries) -> dict:
    """Every dominant representative of the support has even h1- and h0-values.

    This is the support pattern of elements built from weights in 2P + Z delta.
    """
    for key in f.terms:
        nu, _ = dominant_representative(f.weight_of(key))
        if nu.a % 2 or nu.h0() % 2:
            return {"pass": False, "witness": {"weight": f.weight_of(key).to_json(), "dominant": nu.to_json()}}
    return {"pass": True}


def denominator_square_check(g2_floor: int) -> dict:
    half = denominator_half(g2_floor - 2)
    sq = mul(half, half)
    ok, rep = equal_on_window(sq, denominator2(g2_floor), g2_floor)
    return {"check": "denominator_half_squared", "window": g2_floor, "pass": ok and sq.g2_floor <= g2_floor, **_w(rep)}


def _w(rep: dict) -> dict:
    return {"witness": rep["witness"]} if "witness" in rep else {}


def laplace_eigen_check(f: TruncatedSeries, eigenvalue) -> tuple[bool, dict]:
    return equal_on_window(laplace_apply(f), f.scaled(eigenvalue))

