"""Truncated formal series in the completed group algebra of the weight lattice.

A :class:`TruncatedSeries` is a finite map from exponents to exact scalars
together with a *window floor*. The contract: the series it stands for agrees
with the stored terms on every monomial whose grade is at least the floor, and
nothing is claimed below it. A floor of ``-inf`` means the element is known
exactly (a finite sum).

Exponents are stored as integer pairs ``(A, M)`` meaning the weight
``(A / y_denom, level, M / q_denom)``. Grades are measured in *scaled units*
``A * q_denom + 4 * M * y_denom``, which is the doubled rho-grade multiplied by
``y_denom * q_denom``. With both denominators equal to one (the default, and the
only case outside theta characteristics) this is just ``a + 4m``.

Every binary operation states how it moves the floor; see :func:`mul` for the
central rule.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import comb, gcd
from typing import Callable, Iterable, Iterator

from .coefficients import GaussianRational, gaussian, imag_part, parse_scalar, real_part
from .lattice import PositiveRoot, Weight

NEG_INF = -math.inf

Key = tuple[int, int]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class TruncatedSeries:
    __slots__ = ("level", "terms", "g2_floor", "y_denom", "q_denom")

    def __init__(
        self,
        level: int,
        terms: dict[Key, object] | None = None,
        g2_floor: float | int = NEG_INF,
        y_denom: int = 1,
        q_denom: int = 1,
    ):
        if y_denom < 1 or q_denom < 1:
            raise ValueError("exponent denominators must be positive")
        self.level = level
        self.y_denom = y_denom
        self.q_denom = q_denom
        self.g2_floor = g2_floor
        clean: dict[Key, object] = {}
        for key, c in (terms or {}).items():
            if c and self.grade(key) >= g2_floor:
                clean[key] = c
        self.terms = clean

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls, level: int = 0, g2_floor=NEG_INF, y_denom: int = 1, q_denom: int = 1):
        return cls(level, {}, g2_floor, y_denom, q_denom)

    @classmethod
    def one(cls):
        return cls(0, {(0, 0): 1})

    @classmethod
    def from_weights(cls, coeffs: dict[Weight, object], g2_floor=NEG_INF, level: int | None = None):
        levels = {w.k for w in coeffs}
        if level is None:
            if len(levels) > 1:
                raise ValueError(f"mixed levels {sorted(levels)}")
            level = levels.pop() if levels else 0
        elif levels - {level}:
            raise ValueError(f"weights of level {sorted(levels)} in a level-{level} series")
        return cls(level, {(w.a, w.m): c for w, c in coeffs.items()}, g2_floor)

    # -- basic accessors ----------------------------------------------

    def grade(self, key: Key) -> int:
        return key[0] * self.q_denom + 4 * key[1] * self.y_denom

    @property
    def scale(self) -> int:
        """Scaled units per unit of doubled rho-grade."""
        return self.y_denom * self.q_denom

    @property
    def g2_ceil(self):
        """Upper bound for the grade of anything the series can contain."""
        top = max((self.grade(k) for k in self.terms), default=NEG_INF)
        return max(top, self.g2_floor)

    @property
    def is_exact(self) -> bool:
        return self.g2_floor == NEG_INF

    def weight_of(self, key: Key) -> Weight:
        if self.scale != 1:
            raise ValueError("weight_of needs integral exponents")
        return Weight(key[0], self.level, key[1])

    def items_by_weight(self) -> Iterator[tuple[Weight, object]]:
        for key, c in self.terms.items():
            yield self.weight_of(key), c

    def coefficient(self, where) -> object:
        """Coefficient at a :class:`Weight` or a raw ``(A, M)`` key."""
        if isinstance(where, Weight):
            if where.k != self.level:
                return 0
            where = (where.a * self.y_denom, where.m * self.q_denom)
        return self.terms.get(where, 0)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return (
            f"TruncatedSeries(level={self.level}, terms={len(self.terms)}, "
            f"g2_floor={self.g2_floor}, y_denom={self.y_denom}, q_denom={self.q_denom})"
        )

    def sorted_terms(self) -> list[tuple[Key, object]]:
        """Terms by decreasing grade, then by exponent."""
        return sorted(self.terms.items(), key=lambda kv: (-self.grade(kv[0]), kv[0]))

    # -- windows and denominators ---------------------------------------

    def truncate(self, g2_floor) -> "TruncatedSeries":
        """Forget everything below ``g2_floor`` (never lowers the floor)."""
        return TruncatedSeries(self.level, self.terms, max(self.g2_floor, g2_floor), self.y_denom, self.q_denom)

    def with_denominators(self, y_denom: int, q_denom: int) -> "TruncatedSeries":
        if y_denom % self.y_denom or q_denom % self.q_denom:
            raise ValueError("target denominators must be multiples of the current ones")
        sy, sq = y_denom // self.y_denom, q_denom // self.q_denom
        if sy == sq == 1:
            return self
        terms = {(a * sy, m * sq): c for (a, m), c in self.terms.items()}
        return TruncatedSeries(self.level, terms, self.g2_floor * sy * sq, y_denom, q_denom)

    def reduced(self) -> "TruncatedSeries":
        """Smallest denominators that still express every exponent."""
        ydiv, qdiv = self.y_denom, self.q_denom
        for a, m in self.terms:
            ydiv = gcd(ydiv, a)
            qdiv = gcd(qdiv, m)
        # floors are only rescaled when they stay integral
        f = self.g2_floor
        if f != NEG_INF and f % (ydiv * qdiv):
            ydiv = qdiv = 1
        if ydiv == qdiv == 1:
            return self
        terms = {(a // ydiv, m // qdiv): c for (a, m), c in self.terms.items()}
        floor = f if f == NEG_INF else f // (ydiv * qdiv)
        return TruncatedSeries(self.level, terms, floor, self.y_denom // ydiv, self.q_denom // qdiv)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return add(self, other)
        if other == 0:
            return self
        return add(self, constant(other, self.level))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.level, {k: -c for k, c in self.terms.items()}, self.g2_floor, self.y_denom, self.q_denom)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return mul(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        return self.scaled(other)

    def scaled(self, c) -> "TruncatedSeries":
        if not c:
            return TruncatedSeries(self.level, {}, self.g2_floor, self.y_denom, self.q_denom)
        return TruncatedSeries(self.level, {k: c * v for k, v in self.terms.items()}, self.g2_floor, self.y_denom, self.q_denom)

    def shifted(self, lam: Weight) -> "TruncatedSeries":
        """Multiply by e^lam exactly (floor moves by the grade of lam)."""
        dy, dq = lam.a * self.y_denom, lam.m * self.q_denom
        terms = {(a + dy, m + dq): c for (a, m), c in self.terms.items()}
        step = dy * self.q_denom + 4 * dq * self.y_denom
        return TruncatedSeries(self.level + lam.k, terms, self.g2_floor + step, self.y_denom, self.q_denom)

    def map_coefficients(self, fn: Callable[[Key, object], object]) -> "TruncatedSeries":
        terms = {k: fn(k, c) for k, c in self.terms.items()}
        return TruncatedSeries(self.level, terms, self.g2_floor, self.y_denom, self.q_denom)

    def is_real(self) -> bool:
        return not any(isinstance(c, GaussianRational) for c in self.terms.values())

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        rows = []
        for (a, m), c in sorted(self.terms.items(), key=lambda kv: (-self.grade(kv[0]), kv[0])):
            rows.append({"h1": a, "d": m, "re": str(real_part(c)), "im": str(imag_part(c))})
        floor = None if self.g2_floor == NEG_INF else int(self.g2_floor)
        return {
            "level": self.level,
            "g2_floor": floor,
            "y_denom": self.y_denom,
            "q_denom": self.q_denom,
            "terms": rows,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TruncatedSeries":
        floor = obj.get("g2_floor")
        terms = {}
        for row in obj["terms"]:
            key = (int(row["h1"]), int(row["d"]))
            if key in terms:
                raise ValueError(f"duplicate exponent {key}")
            terms[key] = parse_scalar(str(row["re"]), str(row.get("im", "0")))
        return cls(
            int(obj["level"]),
            terms,
            NEG_INF if floor is None else int(floor),
            int(obj.get("y_denom", 1)),
            int(obj.get("q_denom", 1)),
        )

    def csv_rows(self) -> list[list[str]]:
        """Rows ``h1, d, re, im`` (header included), in the JSON term order."""
        rows = [["h1", "d", "re", "im"]]
        for t in self.to_json()["terms"]:
            rows.append([str(t["h1"]), str(t["d"]), t["re"], t["im"]])
        return rows


# ---------------------------------------------------------------------------


def constant(c, level: int = 0) -> TruncatedSeries:
    if level != 0:
        raise ValueError("constants live at level 0")
    return TruncatedSeries(0, {(0, 0): c})


def monomial(lam: Weight, coeff=1) -> TruncatedSeries:
    return TruncatedSeries(lam.k, {(lam.a, lam.m): coeff})


def _unify(f: TruncatedSeries, g: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
    if f.y_denom == g.y_denom and f.q_denom == g.q_denom:
        return f, g
    yd, qd = _lcm(f.y_denom, g.y_denom), _lcm(f.q_denom, g.q_denom)
    return f.with_denominators(yd, qd), g.with_denominators(yd, qd)


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Termwise sum; the floor is the larger of the two floors."""
    if f.level != g.level:
        raise ValueError(f"cannot add series of levels {f.level} and {g.level}")
    f, g = _unify(f, g)
    terms = dict(f.terms)
    for k, c in g.terms.items():
        terms[k] = terms.get(k, 0) + c
    return TruncatedSeries(f.level, terms, max(f.g2_floor, g.g2_floor), f.y_denom, f.q_denom)


def linear_combination(pairs: Iterable[tuple[object, TruncatedSeries]]) -> TruncatedSeries:
    out = None
    for c, s in pairs:
        term = s.scaled(c)
        out = term if out is None else add(out, term)
    if out is None:
        raise ValueError("empty linear combination")
    return out


def product_floor(f: TruncatedSeries, g: TruncatedSeries):
    return max(f.g2_floor + g.g2_ceil, g.g2_floor + f.g2_ceil)


def mul(f: TruncatedSeries, g: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """Product of two series.

    The result is guaranteed on grades >= max(floor_f + ceil_g, floor_g + ceil_f):
    anything unknown in one factor sits below its floor and can only be shifted
    up by the other factor's ceiling. Passing ``g2_floor`` raises the floor
    further, which is how exact products are truncated cheaply.
    """
    f, g = _unify(f, g)
    floor = product_floor(f, g)
    if g2_floor is not None:
        floor = max(floor, g2_floor)
    yd, qd = f.y_denom, f.q_denom
    if len(f.terms) < len(g.terms):
        f, g = g, f
    fs = sorted(((f.grade(k), k[0], k[1], c) for k, c in f.terms.items()), reverse=True, key=lambda t: t[0])
    out: dict[Key, object] = {}
    get = out.get
    for (ga, gm), gc in g.terms.items():
        limit = floor - (ga * qd + 4 * gm * yd)
        for fg, fa, fm, fc in fs:
            if fg < limit:
                break
            key = (fa + ga, fm + gm)
            out[key] = get(key, 0) + fc * gc
    return TruncatedSeries(f.level + g.level, out, floor, yd, qd)


def power(f: TruncatedSeries, n: int, g2_floor=None) -> TruncatedSeries:
    if n < 0:
        raise ValueError("use invert for negative powers")
    out = TruncatedSeries(0, {(0, 0): 1}, NEG_INF, f.y_denom, f.q_denom)
    for _ in range(n):
        out = mul(out, f, g2_floor)
    return out


# -- expansions ------------------------------------------------------------


def _as_weight(beta) -> Weight:
    return beta.weight if isinstance(beta, PositiveRoot) else beta


def geometric_factor(beta, sign: int, p: int, depth: int) -> TruncatedSeries:
    """(1 + sign*e^{-beta})^{-p} expanded to relative grade >= -depth, exact up to there."""
    b = _as_weight(beta)
    if b.k != 0 or b.g2 <= 0:
        raise ValueError(f"expansion direction {b} must be level 0 with positive grade")
    if sign not in (1, -1) or p < 1:
        raise ValueError("sign must be +1 or -1 and the power positive")
    terms = {}
    k = 0
    while k * b.g2 <= depth:
        terms[(-k * b.a, -k * b.m)] = comb(k + p - 1, p - 1) * (-sign) ** k
        k += 1
    return TruncatedSeries(0, terms, -depth)


def tau1_expand(numerator: Weight, factors: Iterable[tuple[object, int, int]], g2_floor: int, coeff=1) -> TruncatedSeries:
    """Expand coeff * e^numerator * prod (1 + s e^{-beta})^{-p} towards negative grade.

    Each factor is a triple ``(beta, s, p)`` with ``beta`` a
    :class:`PositiveRoot` or a level-0 weight of positive grade and ``s`` in
    {+1, -1}. The result is exact on grades >= ``g2_floor``.
    """
    depth = numerator.g2 - g2_floor
    out = TruncatedSeries(numerator.k, {(numerator.a, numerator.m): coeff}, g2_floor)
    if depth < 0:
        return out
    for beta, s, p in factors:
        out = mul(out, geometric_factor(beta, s, p, depth), g2_floor)
    return TruncatedSeries(out.level, out.terms, g2_floor)


def _level0_negative(f: TruncatedSeries, what: str) -> None:
    if f.level != 0:
        raise ValueError(f"{what} needs a level-0 argument, got level {f.level}")
    if f.terms and max(f.grade(k) for k in f.terms) >= 0:
        raise ValueError(f"{what} needs support in strictly negative grade")


def _require_window(f: TruncatedSeries, g2_floor, what: str):
    floor = f.g2_floor if g2_floor is None else max(f.g2_floor, g2_floor)
    if floor == NEG_INF:
        if not f.terms:
            return NEG_INF
        raise ValueError(f"{what} of an exact series needs an explicit g2_floor")
    return floor


def _power_sum(f: TruncatedSeries, coeff_of: Callable[[int], object], floor, start: int) -> TruncatedSeries:
    """Sum of coeff_of(n) * f^n for n >= start, truncated at ``floor``."""
    out = TruncatedSeries(0, {}, floor, f.y_denom, f.q_denom)
    if not f.terms:
        if start == 0:
            out = out + TruncatedSeries(0, {(0, 0): coeff_of(0)}, floor, f.y_denom, f.q_denom)
        return out
    top = max(f.grade(k) for k in f.terms)
    pw = TruncatedSeries(0, {(0, 0): 1}, NEG_INF, f.y_denom, f.q_denom)
    n = 0
    while True:
        if n >= start:
            c = coeff_of(n)
            if c:
                out = add(out, pw.scaled(c))
        n += 1
        if n * top < floor:
            break
        pw = mul(pw, f, floor)
    return TruncatedSeries(0, out.terms, floor, f.y_denom, f.q_denom)


def exp_series(f: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """exp(f) for level-0 f supported in negative grade; the floor is that of f."""
    _level0_negative(f, "exp_series")
    floor = _require_window(f, g2_floor, "exp_series")
    inv_fact = [Fraction(1)]

    def c(n: int):
        while len(inv_fact) <= n:
            inv_fact.append(inv_fact[-1] / len(inv_fact))
        return inv_fact[n]

    return _power_sum(f, c, floor, 0)


def log_one_plus(f: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """log(1 + f) for level-0 f supported in negative grade."""
    _level0_negative(f, "log_one_plus")
    floor = _require_window(f, g2_floor, "log_one_plus")
    return _power_sum(f, lambda n: Fraction((-1) ** (n + 1), n), floor, 1)


def leading_term(f: TruncatedSeries) -> tuple[Key, object]:
    if not f.terms:
        raise ValueError("empty series has no leading term")
    top = max(f.grade(k) for k in f.terms)
    keys = [k for k in f.terms if f.grade(k) == top]
    if len(keys) > 1:
        raise ValueError(f"{len(keys)} terms share the top grade {top}; leading term is not unique")
    return keys[0], f.terms[keys[0]]


def invert(f: TruncatedSeries, g2_floor=None) -> TruncatedSeries:
    """Inverse of c e^mu (1 + t), expanded as c^{-1} e^{-mu} sum (-t)^n.

    If f is known on grades >= F, the inverse is known on grades >= F - 2 g(mu).
    An exact f with more than one term needs an explicit ``g2_floor`` for the result.
    """
    (ka, km), c = leading_term(f)
    top = f.grade((ka, km))
    cinv = 1 / c if isinstance(c, GaussianRational) else gaussian(Fraction(1) / Fraction(c))
    t_terms = {(a - ka, m - km): v * cinv for (a, m), v in f.terms.items() if (a, m) != (ka, km)}
    floor = f.g2_floor - 2 * top
    if g2_floor is not None:
        floor = max(floor, g2_floor)
    rel_floor = floor + top  # window of sum (-t)^n before the final shift
    t = TruncatedSeries(0, t_terms, f.g2_floor - top if f.g2_floor != NEG_INF else NEG_INF, f.y_denom, f.q_denom)
    if rel_floor == NEG_INF:
        if t.terms:
            raise ValueError("invert of an exact multi-term series needs an explicit g2_floor")
        body = TruncatedSeries(0, {(0, 0): 1}, NEG_INF, f.y_denom, f.q_denom)
    else:
        body = _power_sum(t.truncate(rel_floor), lambda n: (-1) ** n, rel_floor, 0)
    terms = {(a - ka, m - km): v * cinv for (a, m), v in body.terms.items()}
    return TruncatedSeries(-f.level, terms, floor, f.y_denom, f.q_denom)


# -- diagonal operators ------------------------------------------------------


def _pairing_with_key(nu: Weight, f: TruncatedSeries, key: Key):
    a = Fraction(key[0], f.y_denom) if f.y_denom != 1 else key[0]
    m = Fraction(key[1], f.q_denom) if f.q_denom != 1 else key[1]
    return Fraction(nu.a * a, 2) + nu.k * m + f.level * nu.m


def derivative_pairing(nu: Weight, f: TruncatedSeries) -> TruncatedSeries:
    """The derivation e^mu -> (nu, mu) e^mu."""
    return f.map_coefficients(lambda key, c: c * gaussian(_pairing_with_key(nu, f, key)))


def laplace_apply(f: TruncatedSeries) -> TruncatedSeries:
    """e^mu -> (mu, mu) e^mu."""
    K = f.level

    def norm(key: Key):
        a = Fraction(key[0], f.y_denom)
        m = Fraction(key[1], f.q_denom)
        return gaussian(a * a / 2 + 2 * K * m)

    return f.map_coefficients(lambda key, c: c * norm(key))


# -- comparison ----------------------------------------------------------------


def equal_on_window(f: TruncatedSeries, g: TruncatedSeries, g2_floor=None) -> tuple[bool, dict]:
    """Exact comparison on the common guaranteed window.

    The report carries the window and, on failure, the highest-grade
    differing exponent with both coefficients.
    """
    if f.level != g.level:
        return False, {"reason": f"level mismatch {f.level} != {g.level}"}
    f, g = _unify(f, g)
    floor = max(f.g2_floor, g.g2_floor)
    if g2_floor is not None:
        floor = max(floor, g2_floor * f.scale)
    diffs = []
    for key in set(f.terms) | set(g.terms):
        if f.grade(key) < floor:
            continue
        a, b = f.terms.get(key, 0), g.terms.get(key, 0)
        if a != b:
            diffs.append((f.grade(key), key, a, b))
    report = {"window": None if floor == NEG_INF else floor, "scale": f.scale, "mismatches": len(diffs)}
    if diffs:
        diffs.sort(key=lambda d: (-d[0], d[1]))
        gr, key, a, b = diffs[0]
        report["witness"] = {"h1": key[0], "d": key[1], "grade": gr, "left": str(a), "right": str(b)}
        return False, report
    return True, report

