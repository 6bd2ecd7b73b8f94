"""The radial part of the Casimir element acting on truncated series.

All potentials are written with the normalized series ``P_ij = p_ij / (4 pi^2)``.
With that normalization the twisted operator reads

    Pi(eta, chi) = Pi_00 - 1/2 [P01 (a0-b0)^2 + P00 (a0+b0)^2 + P11 (a1-b1)^2 + P10 (a1+b1)^2]

where ``chi = (a0, a1)`` and ``eta = (b0, b1)``, and its conjugate by the
half denominator is

    Delta - 1/2 - 1/2 [P01 ((a0-b0)^2 - 1) + ...].

``Pi_00`` itself is ``Delta + 2 d_rho + 2 sum_alpha sum_k e^{-2k alpha} d_alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .characters import denominator1, denominator2, denominator_half
from .lattice import ALPHA1, DELTA, RHO, Weight, casimir_eigenvalue, pairing, positive_roots_up_to
from .series import (
    NEG_INF,
    TruncatedSeries,
    add,
    equal_on_window,
    invert,
    laplace_apply,
    monomial,
    mul,
    tau1_expand,
)
from .theta import ThetaChar, wp_series


@dataclass(frozen=True)
class Character1D:
    """One-dimensional representation of the fixed-point subalgebra: values on B0 and B1."""

    b0: Fraction
    b1: Fraction

    def __init__(self, b0, b1):
        object.__setattr__(self, "b0", Fraction(b0))
        object.__setattr__(self, "b1", Fraction(b1))

    @classmethod
    def parse(cls, text: str) -> "Character1D":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"character must be 'b0,b1', got {text!r}")
        return cls(Fraction(parts[0]), Fraction(parts[1]))

    def is_integral(self) -> bool:
        return self.b0.denominator == 1 and self.b1.denominator == 1

    def to_json(self) -> list[str]:
        return [str(self.b0), str(self.b1)]

    def __str__(self) -> str:
        return f"({self.b0},{self.b1})"


TRIVIAL = Character1D(0, 0)


def potential_coefficients(eta: Character1D, chi: Character1D, conjugated: bool) -> dict[ThetaChar, Fraction]:
    a0, a1 = chi.b0, chi.b1
    b0, b1 = eta.b0, eta.b1
    shift = 1 if conjugated else 0
    return {
        ThetaChar(0, 1): (a0 - b0) ** 2 - shift,
        ThetaChar(0, 0): (a0 + b0) ** 2 - shift,
        ThetaChar(1, 1): (a1 - b1) ** 2 - shift,
        ThetaChar(1, 0): (a1 + b1) ** 2 - shift,
    }


@dataclass(frozen=True)
class RadialOperatorSpec:
    eta: Character1D = TRIVIAL
    chi: Character1D = TRIVIAL
    conjugated: bool = False
    # perturbation of the P01 coefficient, used only for failure injection
    perturb: Fraction = Fraction(0)

    def coefficients(self) -> dict[ThetaChar, Fraction]:
        coeffs = potential_coefficients(self.eta, self.chi, self.conjugated)
        if self.perturb:
            coeffs[ThetaChar(0, 1)] += self.perturb
        return coeffs


@lru_cache(maxsize=64)
def _potential_cached(eta: Character1D, chi: Character1D, conjugated: bool, perturb: Fraction, g2_floor: int) -> TruncatedSeries:
    spec = RadialOperatorSpec(eta, chi, conjugated, perturb)
    out = TruncatedSeries(0, {}, g2_floor)
    for c, coeff in spec.coefficients().items():
        if coeff:
            out = add(out, wp_series(c, 1, 1, g2_floor).scaled(Fraction(-1, 2) * coeff))
    return out


def potential_series(spec: RadialOperatorSpec, g2_floor: int) -> TruncatedSeries:
    """The level-0 potential of the operator, exact on grades >= g2_floor (its ceiling is -2)."""
    return _potential_cached(spec.eta, spec.chi, spec.conjugated, spec.perturb, g2_floor)


# -- first-order tail of Pi_00 ----------------------------------------------------


@lru_cache(maxsize=64)
def tail_transitions(depth: int) -> tuple[tuple[Weight, Weight], ...]:
    """Pairs (beta, gamma) with beta = 2k alpha of grade <= depth.

    ``gamma`` is the sum of all roots alpha with 2k alpha = beta, so the tail of
    Pi_00 sends e^mu to sum_beta 2 (gamma, mu) e^{mu - beta}.
    """
    acc: dict[Weight, Weight] = {}
    for root in positive_roots_up_to(depth // 2):
        k = 1
        while 2 * k * root.g2 <= depth:
            beta = root.weight * (2 * k)
            acc[beta] = acc.get(beta, Weight()) + root.weight
            k += 1
    return tuple(sorted(acc.items(), key=lambda bg: (bg[0].g2, bg[0].a)))


def _window(f: TruncatedSeries, g2_floor) -> tuple[float, float]:
    floor = f.g2_floor if g2_floor is None else max(f.g2_floor, g2_floor)
    if floor == NEG_INF:
        if len(f.terms) == 0:
            return floor, 0
        raise ValueError("operators on exact multi-term series need an explicit g2_floor")
    return floor, f.g2_ceil - floor


def apply_pi00(f: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """Pi_00 applied to f; the output window equals the input window."""
    if f.scale != 1:
        raise ValueError("the radial operator needs integral exponents")
    floor, span = _window(f, g2_floor)
    K = f.level
    trans = tail_transitions(int(span)) if span > 0 else ()
    out: dict = {}
    for (a, m), c in f.terms.items():
        mu = Weight(a, K, m)
        diag = pairing(mu, mu) + 2 * pairing(RHO, mu)
        if diag:
            out[(a, m)] = out.get((a, m), 0) + c * diag
        g = a + 4 * m
        for beta, gamma in trans:
            if g - beta.g2 < floor:
                break
            w = 2 * pairing(gamma, mu)
            if w:
                key = (a - beta.a, m - beta.m)
                out[key] = out.get(key, 0) + c * w
    return TruncatedSeries(K, out, floor)


def apply_radial(spec: RadialOperatorSpec, f: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """Unconjugated: Pi_00 f + V f. Conjugated: Delta f - f/2 + V f. Same window as f."""
    floor, span = _window(f, g2_floor)
    if not f.terms:
        return TruncatedSeries(f.level, {}, floor)
    f = f.truncate(floor)
    pot = potential_series(spec, int(-span))
    if spec.conjugated:
        base = add(laplace_apply(f), f.scaled(Fraction(-1, 2)))
    else:
        base = apply_pi00(f)
    return add(base, mul(pot, f, floor))


# -- identity checks -------------------------------------------------------------


def _report(name: str, window, ok: bool, rep: dict, **extra) -> dict:
    out = {"check": name, "window": window, "pass": ok, **extra}
    if "witness" in rep:
        out["witness"] = rep["witness"]
    return out


def conjugation_identity_check(spec: RadialOperatorSpec, test_weights: list[Weight], g2_floor: int) -> list[dict]:
    """half * Pi(unconjugated) * half^{-1} e^lam == Pi(conjugated) e^lam on the window."""
    plain = RadialOperatorSpec(spec.eta, spec.chi, False, spec.perturb)
    conj = RadialOperatorSpec(spec.eta, spec.chi, True)
    out = []
    for lam in test_weights:
        d_floor = g2_floor - lam.g2 + RHO.g2
        half = denominator_half(d_floor)
        x = invert(half).shifted(lam)
        lhs = mul(half, apply_radial(plain, x))
        rhs = apply_radial(conj, monomial(lam), g2_floor)
        ok, rep = equal_on_window(lhs, rhs)
        sound = lhs.g2_floor <= g2_floor and rhs.g2_floor <= g2_floor
        out.append(_report(f"conjugation[eta={spec.eta},chi={spec.chi},lambda={lam}]", g2_floor, ok and sound, rep))
    return out


def v_identity_check(g2_floor: int, drop_cross_terms: bool = False) -> dict:
    """(v, v) - (rho, rho) - sum S_alpha^2-type terms vanishes on the window.

    ``S_alpha = e^{-2 alpha} / (1 - e^{-2 alpha})`` and
    ``(v, v) = (rho, rho) + 2 sum S_alpha (alpha, rho) + sum_{alpha, beta} S_alpha S_beta (alpha, beta)``.
    With ``drop_cross_terms`` the alpha != beta part of the double sum is left
    out, which must break the identity.
    """
    roots = [r.weight for r in positive_roots_up_to(-g2_floor // 2)]
    S = {r: tau1_expand(r * -2, [(r * 2, -1, 1)], g2_floor) for r in roots}
    X = TruncatedSeries(0, {}, g2_floor)
    for r in roots:
        X = add(X, S[r].scaled(2 * pairing(r, RHO)))
    for i, r in enumerate(roots):
        for j, s in enumerate(roots):
            if drop_cross_terms and i != j:
                continue
            c = pairing(r, s)
            if c:
                X = add(X, mul(S[r], S[s], g2_floor).scaled(c))
    for r in roots:
        sq = tau1_expand(r * -2, [(r * 2, -1, 2)], g2_floor)
        X = add(X, sq.scaled(-pairing(r, r)))
    zero = TruncatedSeries(0, {}, g2_floor)
    ok, rep = equal_on_window(X, zero)
    name = "v_identity_without_cross_terms" if drop_cross_terms else "v_identity"
    prefactor = 2 * (pairing(DELTA, RHO) - pairing(ALPHA1, ALPHA1))
    return _report(name, g2_floor, ok and prefactor == 0, rep, prefactor=str(prefactor))


def denominator_identity_check(g2_floor: int) -> list[dict]:
    """Delta d2 = 2 d2, and the negative control d1 against the same scalar."""
    d2, d1 = denominator2(g2_floor), denominator1(g2_floor)
    ok2, rep2 = equal_on_window(laplace_apply(d2), d2.scaled(2))
    ok1, rep1 = equal_on_window(laplace_apply(d1), d1.scaled(2))
    okh, reph = equal_on_window(laplace_apply(d1), d1.scaled(Fraction(1, 2)))
    return [
        _report("laplace_denominator2_eigen_2", g2_floor, ok2, rep2),
        _report("laplace_denominator1_not_eigen_2", g2_floor, not ok1, rep1, expect_failure=True),
        _report("laplace_denominator1_eigen_half", g2_floor, okh, reph),
    ]


def pi00_eigen_on_delta_line(n: int) -> bool:
    """Pi_00 e^{n delta} = 4n e^{n delta}, the Casimir scalar of n delta."""
    lam = DELTA * n
    out = apply_pi00(monomial(lam), lam.g2 - 40)
    return out.terms == {(0, n): casimir_eigenvalue(lam)} or (n == 0 and not out.terms)
