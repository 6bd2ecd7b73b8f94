"""Spherical functions as eigenfunctions of the twisted radial operator.

The expansion ``Psi = sum_mu c_mu e^mu`` runs over the cone
``mu = lam - x alpha0 - y alpha1`` with ``x, y >= 0``; its height is ``x + y``.
Comparing coefficients in ``Pi Psi = E Psi`` gives

    (E - (mu, mu + 2 rho)) c_mu = sum over nu above mu of c_nu T(nu -> mu)

so coefficients are determined height by height. Where the left factor
vanishes (a resonance) the recursion gives no information and a rule is
needed; see :func:`solve_spherical`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import denominator_half, divide_exact, support_parity_check, window_w_invariance
from .lattice import Weight, casimir_eigenvalue, dominant_representative, pairing, reflect
from .radial import TRIVIAL, Character1D, RadialOperatorSpec, apply_radial, potential_series, tail_transitions
from .series import TruncatedSeries, equal_on_window, mul
from .theta import ETA1_SIGN, PI, EvalPoint, ThetaChar, eta1_numeric, eval_series, wp_numeric, wp_shift


class MathError(ArithmeticError):
    """Raised for mathematically invalid requests; the CLI maps it to exit code 3."""


class InadmissibleError(MathError):
    pass


class ResonanceObstruction(MathError):
    pass


def _as_int(x: Fraction) -> int | None:
    return int(x) if x.denominator == 1 else None


def admissible(lam: Weight, eta: Character1D, chi: Character1D) -> bool:
    """Integral characters with lam(h_j) - |eta_j| and lam(h_j) - |chi_j| in 2N_0 for j = 0, 1."""
    if not lam.is_dominant():
        raise InadmissibleError(f"{lam} is not dominant")
    if not (eta.is_integral() and chi.is_integral()):
        return False
    h = {0: lam.h0(), 1: lam.a}
    for j, vals in ((0, (eta.b0, chi.b0)), (1, (eta.b1, chi.b1))):
        for v in vals:
            rest = h[j] - abs(_as_int(v))
            if rest < 0 or rest % 2:
                return False
    return True


def lambda0(eta: Character1D, chi: Character1D) -> Weight:
    """Smallest admissible weight: m_j = max(|eta_j|, |chi_j|) on h_j."""
    if not (eta.is_integral() and chi.is_integral()):
        raise InadmissibleError("characters must be integral")
    m = []
    for e, c in ((eta.b0, chi.b0), (eta.b1, chi.b1)):
        e, c = abs(int(e)), abs(int(c))
        if (e - c) % 2:
            raise InadmissibleError(f"parity mismatch between eta={eta} and chi={chi}: no admissible weight")
        m.append(max(e, c))
    return Weight.from_fundamental(m[0], m[1])


@dataclass(frozen=True)
class HeunParams:
    """Coupling constants l0..l3, attached to p(z), p(z+1/2), p(z+(1+tau)/2), p(z+tau/2)."""

    l0: Fraction
    l1: Fraction
    l2: Fraction
    l3: Fraction
    level: int | None = None

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.l0, self.l1, self.l2, self.l3)

    def couplings(self) -> tuple[Fraction, ...]:
        return tuple(l * (l + 1) for l in self.as_tuple())

    def to_json(self) -> dict:
        out = {f"l{k}": str(v) for k, v in enumerate(self.as_tuple())}
        if self.level is not None:
            out["level"] = self.level
        return out


# characteristic paired with each coupling, in order l0..l3
HEUN_CHARS = (ThetaChar(1, 1), ThetaChar(1, 0), ThetaChar(0, 0), ThetaChar(0, 1))


def heun_parameters(eta: Character1D, chi: Character1D, level: int | None = None) -> HeunParams:
    a0, a1, b0, b1 = chi.b0, chi.b1, eta.b0, eta.b1
    half = Fraction(1, 2)
    return HeunParams((a1 - b1 - 1) * half, (a1 + b1 - 1) * half, (a0 + b0 - 1) * half, (a0 - b0 - 1) * half, level)


# -- solver ----------------------------------------------------------------------


@dataclass
class SphericalResult:
    lam: Weight
    eta: Character1D
    chi: Character1D
    depth: int
    eigenvalue: Fraction
    series: TruncatedSeries
    resonances: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "lambda": self.lam.to_json(),
            "eta": self.eta.to_json(),
            "chi": self.chi.to_json(),
            "depth_heights": self.depth,
            "eigenvalue": str(self.eigenvalue),
            "resonances": self.resonances,
            "series": self.series.to_json(),
        }


def _transitions(spec: RadialOperatorSpec, depth: int) -> list[tuple[int, int, Fraction, Weight]]:
    """Steps (dx, dy, constant, gamma): e^mu contributes (constant + 2(gamma, mu)) e^{mu - beta}."""
    steps: dict[tuple[int, int], list] = {}

    def slot(beta: Weight) -> list:
        dx = beta.m
        dy2 = beta.a + 2 * dx
        if dx < 0 or dy2 < 0 or dy2 % 2:
            raise MathError(f"step {beta} leaves the cone")
        return steps.setdefault((dx, dy2 // 2), [Fraction(0), Weight()])

    if depth > 0:
        pot = potential_series(spec, -2 * depth)
        for (A, M), c in pot.terms.items():
            if pot.scale != 1:
                raise MathError("potential must have integral exponents")
            slot(Weight(-A, 0, -M))[0] += c
        for beta, gamma in tail_transitions(2 * depth):
            s = slot(beta)
            s[1] = s[1] + gamma
    return [(dx, dy, c, g) for (dx, dy), (c, g) in sorted(steps.items()) if dx + dy <= depth]


def _cone_point(lam: Weight, x: int, y: int) -> Weight:
    return Weight(lam.a + 2 * x - 2 * y, lam.k, lam.m - x)


def _cone_coords(lam: Weight, mu: Weight) -> tuple[int, int] | None:
    if mu.k != lam.k:
        return None
    x = lam.m - mu.m
    y2 = lam.a + 2 * x - mu.a
    if x < 0 or y2 < 0 or y2 % 2:
        return None
    return x, y2 // 2


def solve_spherical(lam: Weight, eta: Character1D, chi: Character1D, depth: int) -> SphericalResult:
    """Coefficients of the spherical function down to ``depth`` heights below lam.

    Resonances with eta = chi are filled from the dominant member of the W-orbit
    (or its reflection at level 0), which has greater height and is already
    known; when the orbit leaves the cone the coefficient is zero. For eta != chi
    resonant coefficients are set to zero. Either way the right-hand side at a
    resonance must vanish; otherwise :class:`ResonanceObstruction` is raised.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if not admissible(lam, eta, chi):
        raise InadmissibleError(f"{lam} is not admissible for eta={eta}, chi={chi}")
    spec = RadialOperatorSpec(eta, chi, conjugated=False)
    E = casimir_eigenvalue(lam)
    steps = _transitions(spec, depth)
    coeff: dict[tuple[int, int], object] = {}
    rhs: dict[tuple[int, int], object] = {}
    resonances: list[dict] = []
    symmetric = eta == chi
    for s in range(depth + 1):
        for x in range(s + 1):
            y = s - x
            mu = _cone_point(lam, x, y)
            if s == 0:
                c = 1
            else:
                r = rhs.pop((x, y), 0)
                gap = E - casimir_eigenvalue(mu)
                if gap:
                    c = r / gap
                else:
                    c, note = _resonant_value(lam, mu, r, coeff, symmetric)
                    resonances.append({"weight": mu.to_json(), "rule": note, "value": str(c)})
            if not c:
                continue
            coeff[(x, y)] = c
            for dx, dy, const, gamma in steps:
                if s + dx + dy > depth:
                    continue
                w = const + 2 * pairing(gamma, mu)
                if w:
                    key = (x + dx, y + dy)
                    rhs[key] = rhs.get(key, 0) + c * w
    terms = {}
    for (x, y), c in coeff.items():
        mu = _cone_point(lam, x, y)
        terms[(mu.a, mu.m)] = c
    series = TruncatedSeries(lam.k, terms, lam.g2 - 2 * depth)
    return SphericalResult(lam, eta, chi, depth, E, series, resonances)


def _resonant_value(lam, mu, r, coeff, symmetric):
    # at a resonance the recursion reads 0 * c_mu = r, so r must vanish
    if r:
        raise ResonanceObstruction(f"nonzero right-hand side {r} at resonant weight {mu}")
    if not symmetric:
        return 0, "zero"
    if mu.k == 0:
        rep = reflect(mu) if mu.a < 0 else None
    else:
        rep, _ = dominant_representative(mu)
    where = _cone_coords(lam, rep) if rep is not None else None
    if where is None:
        return 0, "orbit-outside-cone"
    return coeff.get(where, 0), f"orbit-copy:{rep}"


# -- checks ---------------------------------------------------------------------


def eigen_residual_check(result: SphericalResult) -> dict:
    spec = RadialOperatorSpec(result.eta, result.chi, conjugated=False)
    lhs = apply_radial(spec, result.series)
    ok, rep = equal_on_window(lhs, result.series.scaled(result.eigenvalue))
    out = {"check": "eigen_residual", "pass": ok, "window": result.series.g2_floor}
    if "witness" in rep:
        out["witness"] = rep["witness"]
    return out


def invariance_and_support_checks(result: SphericalResult) -> list[dict]:
    """Window W-invariance when eta = chi, plus the even support pattern when both are trivial.

    For eta != chi no symmetry is expected and the list is empty. At level 0
    the invariance reduces to the support lying on the delta line.
    """
    f = result.series
    if result.eta != result.chi:
        return []
    out = []
    if f.level >= 1:
        out.append({"check": "window_w_invariance", **window_w_invariance(f)})
    else:
        off = [k for k in f.terms if k[0] != 0]
        out.append({"check": "window_w_invariance", "pass": not off, "window": f.g2_floor})
    if result.eta == TRIVIAL:
        sup = support_parity_check(f) if f.level >= 1 else {"pass": True}
        out.append({"check": "support_parity", **sup})
    return out


def divisibility_check(result: SphericalResult, base: SphericalResult) -> dict:
    """Psi_lam / Psi_lam0 is window-W-invariant with support of the 2P + Z delta pattern."""
    q = divide_exact(result.series, base.series)
    back = mul(q, base.series)
    ok_back, _ = equal_on_window(back, result.series, q.g2_floor + base.series.g2_ceil)
    inv = window_w_invariance(q) if q.level >= 1 else {"pass": all(k[0] == 0 for k in q.terms)}
    sup = support_parity_check(q) if q.level >= 1 else {"pass": True}
    report = {
        "check": "divisibility",
        "lambda": result.lam.to_json(),
        "lambda0": base.lam.to_json(),
        "window": q.g2_floor,
        "quotient_terms": len(q.terms),
        "product_matches": ok_back,
        "invariance": inv,
        "support": sup,
        "quotient_real": q.is_real(),
    }
    report["pass"] = ok_back and inv["pass"] and sup["pass"] and q.is_real()
    return report


# -- numeric Heun-KZB check ------------------------------------------------------


def heun_potential_numeric(params: HeunParams, z: complex, tau: complex, tol: float = 1e-14) -> tuple[complex, float]:
    """sum_k l_k(l_k+1) p(z + shift_k) + c(tau), with c(tau) = -ETA1_SIGN * eta1 * sum l_k(l_k+1)."""
    total, err = 0j, 0.0
    weights = params.couplings()
    for w, c in zip(weights, HEUN_CHARS):
        if w:
            val, e = wp_numeric(z + wp_shift(c, tau), tau, tol)
            total += float(w) * val
            err += abs(float(w)) * e
    s = float(sum(weights))
    if s:
        eta1, e = eta1_numeric(tau, tol)
        total += -ETA1_SIGN * s * eta1
        err += abs(s) * e
    return total, err


MIN_IM_TAU = 1.0


def heun_kzb_numeric_check(
    result: SphericalResult, points: list[EvalPoint], tol: float = 1e-6, min_im_tau: float = MIN_IM_TAU
) -> dict:
    """Relative residual of H psi = 2 pi^2 E psi at each point, psi = half-denominator * Psi.

    The derivative part of H acts on e^mu at level K by pi^2 (a^2 + 4 K m - 1).
    """
    f = result.series
    half = denominator_half(2 - 2 * result.depth)
    psi = mul(half, f)
    K = psi.level
    params = heun_parameters(result.eta, result.chi, K)
    target = 2 * PI**2 * float(result.eigenvalue)

    def deriv(a, k, m):
        return PI**2 * (float(a) ** 2 + 4 * k * float(m) - 1)

    rows = []
    worst = 0.0
    for p in points:
        if not p.in_domain_D:
            raise MathError(f"evaluation point z={p.z}, tau={p.tau} lies outside the domain")
        if complex(p.tau).imag < min_im_tau:
            raise MathError(f"Im(tau) = {complex(p.tau).imag} is below the threshold {min_im_tau}")
        value, tail = eval_series(psi, p)
        dval, dtail = eval_series(psi, p, deriv)
        pot, perr = heun_potential_numeric(params, p.z, p.tau)
        residual = abs(dval + pot * value - target * value) / abs(value)
        worst = max(worst, residual)
        rows.append({
            "z": _cx(p.z), "tau": _cx(p.tau),
            "psi": _cx(value), "residual": residual,
            "tail_estimate": (dtail + abs(pot) * tail + abs(target) * tail) / abs(value),
            "potential_error": perr,
        })
    return {"check": "heun_kzb", "heun_parameters": params.to_json(), "tol": tol,
            "max_residual": worst, "points": rows, "pass": worst < tol}


def _cx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CASIMIR_LAB_THREADS", "1")))
    except ValueError:
        return 1
