"""Theta functions with characteristics and Weierstrass p-series.

Formal side
    Series live at level 0 with ``y = e^{alpha1}`` and ``q = e^{-delta}``, so
    ``y^j q^n`` has exponent ``(a, m) = (2j, -n)``. The theta functions with
    characteristic ``(1, j)`` need ``q^{1/4}`` and are stored with
    ``q_denom = 4``. The p-series are stored normalized, ``P_ij = p_ij / (4 pi^2)``,
    so every coefficient is rational.

Numeric side
    ``q = exp(pi i tau)`` and ``y = exp(2 pi i z)``. Note the single factor of
    pi in q. Lattice sums are done row by row in the tau direction with the
    inner integer sum in closed form, and a plain square-cutoff sum is kept as
    an independent check.

Sign of eta1
    The relation between the shifted lattice function and the formal series is

        p_ij(z) = -p(z + shift_ij) + ETA1_SIGN * eta1(tau)

    where ``eta1 = zeta(z + 1) - zeta(z)``. The value of ``ETA1_SIGN`` was fixed
    by comparing both sides numerically (see ``tests/test_theta.py``); with the
    standard quasi-period it is -1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coefficients import I
from .lattice import Weight
from .series import NEG_INF, TruncatedSeries, add, equal_on_window, mul, tau1_expand

ETA1_SIGN = -1

PI = math.pi


@dataclass(frozen=True)
class ThetaChar:
    i: int
    j: int

    def __post_init__(self):
        if self.i not in (0, 1) or self.j not in (0, 1):
            raise ValueError(f"theta characteristic entries must be 0 or 1, got ({self.i},{self.j})")

    @classmethod
    def parse(cls, text: str) -> "ThetaChar":
        text = text.strip().replace(",", "")
        if len(text) != 2 or any(ch not in "01" for ch in text):
            raise ValueError(f"characteristic must look like '01', got {text!r}")
        return cls(int(text[0]), int(text[1]))

    def __str__(self) -> str:
        return f"{self.i}{self.j}"


ALL_CHARS = [ThetaChar(0, 0), ThetaChar(0, 1), ThetaChar(1, 0), ThetaChar(1, 1)]


@dataclass(frozen=True)
class EvalPoint:
    z: complex
    tau: complex
    u: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise ValueError(f"Im(tau) must be positive, got tau={self.tau}")

    @property
    def in_domain_D(self) -> bool:
        return -complex(self.tau).imag / 2 < complex(self.z).imag < 0

    @property
    def q(self) -> complex:
        return cmath.exp(1j * PI * self.tau)

    @property
    def y(self) -> complex:
        return cmath.exp(2j * PI * self.z)


# -- numeric theta ---------------------------------------------------------------


def _check_tau(tau: complex) -> None:
    if complex(tau).imag <= 0:
        raise ValueError(f"Im(tau) must be positive, got tau={tau}")


def _theta_terms(z: complex, tau: complex, tol: float, derivs: int = 0):
    """Partial sums of theta and its first ``derivs`` z-derivatives, plus a tail bound."""
    _check_tau(tau)
    t, x = complex(tau), complex(z)
    sums = [0j] * (derivs + 1)

    def term(n: int):
        return cmath.exp(1j * PI * n * n * t + 2j * PI * n * x)

    def add_term(n: int):
        e = term(n)
        for d in range(derivs + 1):
            sums[d] += (2j * PI * n) ** d * e

    add_term(0)
    n = 0
    while True:
        n += 1
        add_term(n)
        add_term(-n)
        # successive ratios beyond n are at most r, and shrink further
        r = math.exp(-PI * (2 * n + 1) * t.imag + 2 * PI * abs(x.imag))
        nxt = max(abs(term(n + 1)), abs(term(-n - 1)))
        if r < 0.5:
            poly = (2 * PI * (n + 1)) ** derivs
            bound = 2 * nxt * poly * 2 / (1 - r)
            if bound < tol:
                return sums, bound
        if n > 10_000:
            raise ArithmeticError("theta series failed to converge")


def theta_numeric(z: complex, tau: complex, tol: float = 1e-14) -> tuple[complex, float]:
    """Jacobi theta sum over n of exp(pi i n^2 tau + 2 pi i n z), with a tail bound."""
    sums, bound = _theta_terms(z, tau, tol)
    return sums[0], bound


def theta_char_numeric(c: ThetaChar, z: complex, tau: complex, tol: float = 1e-14, derivs: int = 0) -> list[complex]:
    """theta_ij and its first z-derivatives, from the defining shifts of theta."""
    shift = c.i * tau / 2 + c.j / 2
    sums, _ = _theta_terms(z + shift, tau, tol, derivs)
    if c.i == 0:
        return sums
    # prefactor exp(pi i tau/4 + pi i (z + j/2)); its z-derivative is pi i times itself
    pre = cmath.exp(1j * PI * tau / 4 + 1j * PI * (z + c.j / 2))
    out = []
    for d in range(derivs + 1):
        acc = 0j
        for k in range(d + 1):
            acc += math.comb(d, k) * (1j * PI) ** (d - k) * sums[k]
        out.append(pre * acc)
    return out


def theta_numeric_checks(points: list[EvalPoint], tol: float = 1e-12) -> list[dict]:
    """Periodicity in z, quasi-periodicity in tau and the zero at (1+tau)/2, scaled by |theta|."""
    out = []
    for p in points:
        z, t = complex(p.z), complex(p.tau)
        base, _ = theta_numeric(z, t, tol / 10)
        one, _ = theta_numeric(z + 1, t, tol / 10)
        shifted, _ = theta_numeric(z + t, t, tol / 10)
        zero, _ = theta_numeric((1 + t) / 2, t, tol / 10)
        errs = {
            "period_1": abs(one - base) / max(1.0, abs(base)),
            "quasi_period_tau": abs(shifted - cmath.exp(-1j * PI * t - 2j * PI * z) * base) / max(1.0, abs(shifted)),
            "zero_half_period": abs(zero),
        }
        out.append({"z": [z.real, z.imag], "tau": [t.real, t.imag], **errs, "pass": max(errs.values()) < tol})
    return out


# -- formal theta --------------------------------------------------------------


def _theta_qdenom(c: ThetaChar) -> int:
    return 4 if c.i else 1


def theta_char_series(c: ThetaChar, g2_floor: int, form: str = "sum") -> TruncatedSeries:
    """Formal theta_ij, exact on doubled grades >= g2_floor.

    ``form`` selects the defining sum or the product expansion; the two are
    independent constructions of the same element. For characteristics with
    i = 1 the result has ``q_denom = 4`` and its floor is in scaled units.
    """
    if form == "sum":
        return _theta_sum(c, g2_floor)
    if form == "product":
        return _theta_product(c, g2_floor)
    raise ValueError(f"unknown theta form {form!r}")


def _theta_sum(c: ThetaChar, g2_floor: int) -> TruncatedSeries:
    qd = _theta_qdenom(c)
    floor = g2_floor * qd
    terms = {}
    n = 0
    while True:
        added = False
        for k in ((n, -n - 1) if c.i else ((n, -n) if n else (0,))):
            if c.i:
                # y^{k+1/2} q^{(k+1/2)^2}: A = 2k+1, M = -(2k+1)^2 with q_denom 4
                A, M = 2 * k + 1, -((2 * k + 1) ** 2)
            else:
                A, M = 2 * k, -k * k
            if A * qd + 4 * M < floor:
                continue
            coeff = (-1 if k % 2 else 1) if c.j else 1
            if c.i and c.j:
                coeff = coeff * I
            terms[(A, M)] = coeff
            added = True
        if not added:
            break
        n += 1
    return TruncatedSeries(0, terms, floor, 1, qd)


def _one_plus(weight: Weight, sign: int) -> TruncatedSeries:
    return TruncatedSeries(0, {(0, 0): 1, (weight.a, weight.m): sign})


def _qy(qpow: int, ypow: int) -> Weight:
    return Weight(2 * ypow, 0, -qpow)


def _theta_product(c: ThetaChar, g2_floor: int) -> TruncatedSeries:
    s = -1 if c.j else 1
    factors: list[tuple[Weight, int]] = []
    m = 1
    while _qy(2 * m, 0).g2 >= g2_floor:
        factors.append((_qy(2 * m, 0), -1))
        m += 1
    first = 0 if c.i == 0 else 1
    m = first
    while True:
        odd = 2 * m + 1 if c.i == 0 else 2 * m
        hi, lo = _qy(odd, 1), _qy(odd, -1)
        if hi.g2 < g2_floor:
            break
        factors.append((hi, s))
        if lo.g2 >= g2_floor:
            factors.append((lo, s))
        m += 1
    if c.i:
        factors.append((_qy(0, -1), s))
    out = TruncatedSeries(0, {(0, 0): 1})
    for w, sign in factors:
        out = mul(out, _one_plus(w, sign), g2_floor)
    out = TruncatedSeries(0, out.terms, g2_floor)
    if c.i == 0:
        return out
    # prefactor q^{1/4} y^{1/2}, times i when j = 1
    scaled = out.with_denominators(1, 4)
    pre = I if c.j else 1
    terms = {(a + 1, m - 1): v * pre for (a, m), v in scaled.terms.items()}
    return TruncatedSeries(0, terms, g2_floor * 4, 1, 4)


def theta_consistency_check(g2_floor: int) -> list[dict]:
    """Sum form against product form for all four characteristics."""
    reports = []
    for c in ALL_CHARS:
        ok, rep = equal_on_window(theta_char_series(c, g2_floor, "sum"), theta_char_series(c, g2_floor, "product"))
        reports.append({"check": f"theta{c}_sum_vs_product", "window": g2_floor, "pass": ok, **_witness(rep)})
    return reports


def _witness(rep: dict) -> dict:
    return {"witness": rep["witness"]} if "witness" in rep else {}


# -- formal p-series -------------------------------------------------------------

# For each characteristic: overall sign, sign s in (1 + s x)^2, and whether q carries
# odd powers (i = 0) or even powers (i = 1).
_WP_TABLE = {
    ThetaChar(0, 0): (-1, 1),
    ThetaChar(0, 1): (1, -1),
    ThetaChar(1, 0): (-1, 1),
    ThetaChar(1, 1): (1, -1),
}


def wp_series(c: ThetaChar, y_power: int = 1, q_power: int = 1, g2_floor: int = -40) -> TruncatedSeries:
    """Normalized P_ij(y^y_power, q^q_power) = p_ij / (4 pi^2), exact on grades >= g2_floor.

    Each summand x / (1 + s x)^2 with x = e^{-beta} is expanded towards negative
    grade by :func:`tau1_expand`.
    """
    if y_power not in (1, 2) or q_power not in (1, 2):
        raise ValueError("y_power and q_power must be 1 or 2")
    overall, s = _WP_TABLE[c]
    bases: list[Weight] = []
    if c.i == 0:
        m = 0
        while True:
            n = (2 * m + 1) * q_power
            if _qy(n, y_power).g2 < g2_floor:
                break
            bases.append(_qy(n, -y_power))
            bases.append(_qy(n, y_power))
            m += 1
    else:
        bases.append(_qy(0, -y_power))
        m = 1
        while True:
            n = 2 * m * q_power
            if _qy(n, y_power).g2 < g2_floor:
                break
            bases.append(_qy(n, -y_power))
            bases.append(_qy(n, y_power))
            m += 1
    out = TruncatedSeries(0, {}, g2_floor)
    for x in bases:
        if x.g2 < g2_floor:
            continue
        out = add(out, tau1_expand(x, [(-x, s, 2)], g2_floor, overall))
    return out


def wp_identity_check(g2_floor: int) -> list[dict]:
    """The three doubling identities, coefficient-exact on the window."""

    def P(i, j, yp=1, qp=1):
        return wp_series(ThetaChar(i, j), yp, qp, g2_floor)

    checks = [
        ("wp01_doubling", P(0, 1, 2, 2).scaled(4), add(P(0, 1), P(0, 0))),
        ("wp11_doubling", P(1, 1, 2, 2).scaled(4), add(P(1, 1), P(1, 0))),
        ("wp11_y_doubling", P(1, 1, 2, 1), add(P(0, 1, 2, 2), P(1, 1, 2, 2))),
    ]
    out = []
    for name, lhs, rhs in checks:
        ok, rep = equal_on_window(lhs, rhs)
        out.append({"check": name, "window": g2_floor, "pass": ok, **_witness(rep)})
    return out


# -- numeric lattice functions ---------------------------------------------------


def _sin2(w: complex) -> complex:
    s = cmath.sin(PI * w)
    return s * s


def _rows(tau: complex, tol: float, row):
    """Sum row(n) over n != 0, stopping on a geometric bound for the remainder."""
    r = math.exp(-2 * PI * complex(tau).imag)
    total = 0j
    n = 0
    while True:
        n += 1
        a, b = row(n), row(-n)
        total += a + b
        last = abs(a) + abs(b)
        bound = 2 * last * r / (1 - r) if r < 1 else math.inf
        if n > 2 and bound < tol:
            return total, bound
        if n > 100_000:
            raise ArithmeticError("lattice row sum failed to converge")


def _check_off_lattice(z: complex, tau: complex) -> None:
    t = complex(tau)
    n = round(complex(z).imag / t.imag)
    w = complex(z) - n * t
    if abs(w - round(w.real)) < 1e-13:
        raise ValueError(f"z={z} lies on the period lattice")


def wp_numeric(z: complex, tau: complex, tol: float = 1e-14) -> tuple[complex, float]:
    """Weierstrass p via row sums, each row summed over m in closed form."""
    _check_tau(tau)
    _check_off_lattice(z, tau)
    z, tau = complex(z), complex(tau)
    head = PI**2 / _sin2(z) - PI**2 / 3
    tail, bound = _rows(tau, tol, lambda n: PI**2 / _sin2(z - n * tau) - PI**2 / _sin2(n * tau))
    return head + tail, bound


def wp_lattice_numeric(z: complex, tau: complex, cutoff: int = 400) -> tuple[complex, float]:
    """Plain square-cutoff lattice sum over |m|, |n| <= cutoff.

    Returns the value and a tail estimate. The symmetric cutoff cancels the
    odd part of each shell, so the remainder falls off like cutoff^-2.
    """
    _check_tau(tau)
    _check_off_lattice(z, tau)
    z, tau = complex(z), complex(tau)
    m = np.arange(-cutoff, cutoff + 1)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    om = mm + nn * tau
    mask = (mm != 0) | (nn != 0)
    terms = 1.0 / (z - om[mask]) ** 2 - 1.0 / om[mask] ** 2
    value = 1 / z**2 + complex(terms.sum())
    # estimate from the outermost shell scaled by the remaining sum of shells
    shell = (np.abs(mm) == cutoff) | (np.abs(nn) == cutoff)
    shell_sum = abs(complex((1.0 / (z - om[shell]) ** 2 - 1.0 / om[shell] ** 2).sum()))
    est = max(shell_sum * cutoff, 3 * abs(z) ** 2 * 8 / (cutoff**2 * min(1.0, tau.imag) ** 4))
    return value, est


def zeta_numeric(z: complex, tau: complex, tol: float = 1e-14) -> tuple[complex, float]:
    """Weierstrass zeta by row sums (inner integer sum in closed form)."""
    _check_tau(tau)
    _check_off_lattice(z, tau)
    z, tau = complex(z), complex(tau)

    def cot(w):
        return cmath.cos(PI * w) / cmath.sin(PI * w)

    head = PI * cot(z) + z * PI**2 / 3
    tail, bound = _rows(tau, tol, lambda n: PI * cot(z - n * tau) + PI * cot(n * tau) + z * PI**2 / _sin2(n * tau))
    return head + tail, bound * (1 + abs(z))


def eta1_numeric(tau: complex, tol: float = 1e-12, z0: complex = 0.21 - 0.13j) -> tuple[complex, float]:
    """eta1(tau) = zeta(z0 + 1) - zeta(z0), with an error bound."""
    _check_tau(tau)
    a, ea = zeta_numeric(z0 + 1, tau, tol / 4)
    b, eb = zeta_numeric(z0, tau, tol / 4)
    return a - b, ea + eb


def log_derivative_prime_theta11(z: complex, tau: complex, tol: float = 1e-15) -> complex:
    """(theta11'/theta11)' from the sum form and its termwise derivatives."""
    t0, t1, t2 = theta_char_numeric(ThetaChar(1, 1), z, tau, tol, derivs=2)
    return t2 / t0 - (t1 / t0) ** 2


def eta1_theta_route(tau: complex, z0: complex = 0.21 - 0.13j) -> complex:
    """eta1 from (theta11'/theta11)' = -p - eta1."""
    return -wp_numeric(z0, tau)[0] - log_derivative_prime_theta11(z0, tau)


# shifts relating each characteristic to theta11
def wp_shift(c: ThetaChar, tau: complex) -> complex:
    return {
        ThetaChar(1, 1): 0,
        ThetaChar(1, 0): 0.5,
        ThetaChar(0, 0): (1 + tau) / 2,
        ThetaChar(0, 1): tau / 2,
    }[c]


def wp_char_numeric(c: ThetaChar, z: complex, tau: complex, tol: float = 1e-13, eta1_sign: int = ETA1_SIGN) -> tuple[complex, float]:
    """p_ij(z, tau) = -p(z + shift) + eta1_sign * eta1(tau)."""
    w, ew = wp_numeric(z + wp_shift(c, tau), tau, tol / 2)
    e, ee = eta1_numeric(tau, tol / 2)
    return -w + eta1_sign * e, ew + ee


# -- evaluating formal series ---------------------------------------------------


def monomial_value(a, k, m, p: EvalPoint) -> complex:
    """e^lambda at (z, u, tau): exp(pi i (a z + k u - m tau))."""
    return cmath.exp(1j * PI * (a * p.z + k * p.u - m * p.tau))


def decay_ratio(p: EvalPoint) -> float:
    """Largest factor by which |e^mu| can grow per unit drop in doubled grade.

    Steps of -alpha1 change |e^mu| by exp(2 pi Im z) over 2 grade units and
    steps of -alpha0 by exp(-2 pi Im z - pi Im tau); inside D both are < 1.
    """
    zi, ti = complex(p.z).imag, complex(p.tau).imag
    return max(math.exp(PI * zi), math.exp((-2 * PI * zi - PI * ti) / 2))


def eval_series(f: TruncatedSeries, p: EvalPoint, derivative=None) -> tuple[complex, float]:
    """Numeric value of a truncated series and an estimate of the omitted tail.

    ``derivative`` optionally maps (a, k, m) to a multiplier applied termwise,
    used to evaluate differential operators in closed form. The tail estimate
    takes the magnitude of the lowest four grade units of the stored series and
    continues it geometrically with :func:`decay_ratio`; it is zero for exact
    series.
    """
    yd, qd = f.y_denom, f.q_denom
    total = 0j
    low = 0.0
    floor = f.g2_floor
    band = 4 * f.scale
    for (A, M), c in f.terms.items():
        a = Fraction(A, yd) if yd != 1 else A
        m = Fraction(M, qd) if qd != 1 else M
        v = complex(c) * monomial_value(float(a), f.level, float(m), p)
        if derivative is not None:
            v *= derivative(a, f.level, m)
        total += v
        if floor != NEG_INF and f.grade((A, M)) < floor + band:
            low += abs(v)
    if floor == NEG_INF:
        return total, 0.0
    r = decay_ratio(p) ** 4
    tail = low * r / (1 - r) if r < 1 else math.inf
    return total, tail


def sample_bridge_points(count: int, seed: int = 0, min_im_tau: float = 1.5, max_im_tau: float = 3.0) -> list[EvalPoint]:
    """Random points well inside D, away from both walls where the y-series decay slowly."""
    import random

    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        t = complex(rng.uniform(-0.5, 0.5), rng.uniform(min_im_tau, max_im_tau))
        z = complex(rng.uniform(-0.5, 0.5), -t.imag * rng.uniform(0.125, 0.375))
        pts.append(EvalPoint(z, t))
    return pts


def wp_bridge_check(points: list[EvalPoint], g2_floor: int = -60, tol: float = 1e-8) -> list[dict]:
    """4 pi^2 times the formal P_ij series against the shifted lattice function, per point and char."""
    series = {c: wp_series(c, 1, 1, g2_floor) for c in ALL_CHARS}
    out = []
    for p in points:
        row = {"z": [p.z.real, p.z.imag], "tau": [p.tau.real, p.tau.imag]}
        worst = 0.0
        for c in ALL_CHARS:
            formal, tail = eval_series(series[c], p)
            lattice, err = wp_char_numeric(c, p.z, p.tau)
            diff = abs(4 * PI**2 * formal - lattice)
            row[f"P{c}"] = {"diff": diff, "tail_estimate": 4 * PI**2 * tail + err}
            worst = max(worst, diff)
        row["max_diff"] = worst
        row["pass"] = worst < tol
        out.append(row)
    return out
