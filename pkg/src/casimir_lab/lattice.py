"""Weight lattice, roots, invariant form and Weyl group of affine sl2.

A weight is stored by its values on the coroot basis (h1, c, d):

    a = lambda(h1),  k = lambda(c)  (the level),  m = lambda(d).

Under the invariant form, (h1, h1) = 2 and (c, d) = 1, which gives

    (lambda, mu) = a a'/2 + k m' + k' m.

Grades are kept doubled, ``g2(lambda) = 2 (lambda, rho) = a + 4 m``, so they
stay integral even when ``a`` is odd.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator


@dataclass(frozen=True, order=True)
class Weight:
    a: int = 0
    k: int = 0
    m: int = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.a + other.a, self.k + other.k, self.m + other.m)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.a - other.a, self.k - other.k, self.m - other.m)

    def __neg__(self) -> "Weight":
        return Weight(-self.a, -self.k, -self.m)

    def __mul__(self, n: int) -> "Weight":
        return Weight(n * self.a, n * self.k, n * self.m)

    __rmul__ = __mul__

    @property
    def level(self) -> int:
        return self.k

    @property
    def g2(self) -> int:
        return self.a + 4 * self.m

    def h0(self) -> int:
        """Value on h0 = c - h1."""
        return self.k - self.a

    def is_dominant(self) -> bool:
        return self.a >= 0 and self.k - self.a >= 0

    def to_json(self) -> dict:
        return {"h1": self.a, "level": self.k, "d": self.m}

    @classmethod
    def from_json(cls, obj: dict) -> "Weight":
        return cls(int(obj["h1"]), int(obj["level"]), int(obj["d"]))

    @classmethod
    def from_fundamental(cls, n0: int, n1: int, d: int = 0) -> "Weight":
        """n0*varpi0 + n1*varpi1 + d*delta."""
        return cls(n1, n0 + n1, d)

    def fundamental_coords(self) -> tuple[int, int, int]:
        """Inverse of :meth:`from_fundamental`."""
        return self.k - self.a, self.a, self.m

    def __str__(self) -> str:
        return f"({self.a},{self.k},{self.m})"


ZERO = Weight(0, 0, 0)
VARPI0 = Weight(0, 1, 0)
VARPI1 = Weight(1, 1, 0)
DELTA = Weight(0, 0, 1)
ALPHA1 = Weight(2, 0, 0)
ALPHA0 = Weight(-2, 0, 1)
RHO = Weight(1, 2, 0)


def pairing(lam: Weight, mu: Weight) -> Fraction:
    return Fraction(lam.a * mu.a, 2) + lam.k * mu.m + mu.k * lam.m


def g2(lam: Weight) -> int:
    return lam.g2


def casimir_eigenvalue(lam: Weight) -> Fraction:
    """(lambda, lambda + 2 rho), the Casimir scalar on V(lambda)."""
    return pairing(lam, lam) + 2 * pairing(lam, RHO)


@dataclass(frozen=True)
class WeylElement:
    """The element r^l t_k, with r the simple reflection s_{alpha1}."""

    l: int = 0
    k: int = 0

    def __post_init__(self):
        if self.l not in (0, 1):
            raise ValueError(f"reflection flag must be 0 or 1, got {self.l}")

    def __matmul__(self, other: "WeylElement") -> "WeylElement":
        # r^l1 t_k1 r^l2 t_k2 = r^(l1+l2) t_{(-1)^l2 k1 + k2}, using t_k r = r t_{-k}
        sign = -1 if other.l else 1
        return WeylElement((self.l + other.l) % 2, sign * self.k + other.k)

    def inverse(self) -> "WeylElement":
        if self.l:
            return self
        return WeylElement(0, -self.k)

    @property
    def sign(self) -> int:
        return -1 if self.l else 1

    def length(self) -> int:
        # lengths of the alternating reduced words in s0, s1
        if self.l == 0:
            return 2 * abs(self.k)
        return abs(2 * self.k - 1) if self.k > 0 else 2 * abs(self.k) + 1

    def __call__(self, lam: Weight) -> Weight:
        return weyl_apply(self, lam)

    def __str__(self) -> str:
        parts = []
        if self.l:
            parts.append("r")
        if self.k or not self.l:
            parts.append(f"t_{self.k}")
        return " ".join(parts)


IDENTITY = WeylElement(0, 0)
REFLECTION = WeylElement(1, 0)


def translate(k: int, lam: Weight) -> Weight:
    a, K, m = lam.a, lam.k, lam.m
    return Weight(a - 2 * k * K, K, m + a * k - K * k * k)


def reflect(lam: Weight) -> Weight:
    return Weight(-lam.a, lam.k, lam.m)


def weyl_apply(w: WeylElement, lam: Weight) -> Weight:
    mu = translate(w.k, lam) if w.k else lam
    return reflect(mu) if w.l else mu


def dominant_representative(lam: Weight) -> tuple[Weight, WeylElement]:
    """Dominant weight in the W-orbit of ``lam`` and some w with w(lam) equal to it."""
    a, K = lam.a, lam.k
    if K == 0:
        if a == 0:
            return lam, IDENTITY
        raise ValueError(f"level-0 weight {lam} with nonzero h1-value has no dominant representative")
    if K < 0:
        raise ValueError(f"negative level {K}: no dominant representative")
    # t_j shifts a by -2jK; bring a into [-K, K) first
    j = (a + K) // (2 * K)
    w = WeylElement(0, j)
    mu = translate(j, lam)
    if mu.a < 0:
        w = REFLECTION @ w
        mu = reflect(mu)
    return mu, w


def orbit(lam: Weight, g2_floor: int) -> Iterator[tuple[Weight, WeylElement]]:
    """Distinct members of W*lam with grade >= g2_floor, each with one w mapping lam to it.

    Requires level >= 1 or lam in Z*delta.
    """
    if lam.k == 0:
        if lam.a != 0:
            raise ValueError("orbit of a level-0 weight off Z*delta is not grade-bounded")
        if lam.g2 >= g2_floor:
            yield lam, IDENTITY
        return
    if lam.k < 0:
        raise ValueError("negative level orbits are not grade-bounded above")
    seen = set()
    K, a = lam.k, lam.a
    for l in (0, 1):
        # grade of r^l t_k lam is concave in k with its vertex near k0
        k0 = round((4 * a + (4 * l - 2) * K) / (8 * K))
        for direction in (1, -1):
            k = k0 if direction == 1 else k0 - 1
            while True:
                w = WeylElement(l, k)
                mu = weyl_apply(w, lam)
                if mu.g2 < g2_floor:
                    break
                if mu not in seen:
                    seen.add(mu)
                    yield mu, w
                k += direction


@dataclass(frozen=True, order=True)
class PositiveRoot:
    """n*delta + s*alpha1 with s in {-1, 0, 1}."""

    n: int
    s: int

    def __post_init__(self):
        if self.s not in (-1, 0, 1):
            raise ValueError("root sign must be -1, 0 or 1")
        if self.n < 0 or (self.n == 0 and self.s != 1):
            raise ValueError(f"not a positive root: n={self.n}, s={self.s}")

    @property
    def weight(self) -> Weight:
        return Weight(2 * self.s, 0, self.n)

    @property
    def g2(self) -> int:
        return 2 * self.s + 4 * self.n

    @property
    def is_real(self) -> bool:
        return self.s != 0

    @property
    def height(self) -> int:
        return self.g2 // 2

    def __str__(self) -> str:
        base = {1: "+a1", -1: "-a1", 0: ""}[self.s]
        if self.n == 0:
            return "a1"
        return f"{self.n}d{base}"


def positive_roots_up_to(g2_bound: int) -> list[PositiveRoot]:
    """All positive roots alpha with 2(alpha, rho) <= g2_bound, sorted by grade."""
    if g2_bound < 0:
        return []
    roots = []
    if 2 <= g2_bound:
        roots.append(PositiveRoot(0, 1))
    n = 1
    while 4 * n - 2 <= g2_bound:
        for s in (-1, 0, 1):
            r = PositiveRoot(n, s)
            if r.g2 <= g2_bound:
                roots.append(r)
        n += 1
    roots.sort(key=lambda r: (r.g2, r.s))
    return roots


def height(beta: Weight) -> int:
    """Height x + y of beta = x*alpha0 + y*alpha1 (beta must be level 0 in Q)."""
    if beta.k != 0 or beta.a % 2:
        raise ValueError(f"{beta} is not in the root lattice")
    x = beta.m
    y = (beta.a + 2 * x) // 2
    return x + y
