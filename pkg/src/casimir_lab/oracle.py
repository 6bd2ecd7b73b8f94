"""Brute-force representation oracle for spherical expansions.

Vectors of the highest weight module are spanned by words ``f_{i1} ... f_{ik} v``
in the Chevalley lowering operators. Nothing about the module is assumed
beyond the commutation relations: the contravariant form is computed on words,
and its radical is exactly the kernel of the map onto the irreducible module.

For one-dimensional characters ``eta = (b0, b1)`` and ``chi = (a0, a1)`` of the
fixed-point subalgebra, with ``B_j = i (e_j - f_j)``:

* the eta-invariant vector ``v`` is characterised by ``S(v, w) = phi(w)`` where
  ``phi(v_top) = 1`` and ``phi(f_j w) = phi(e_j w) - i b_j phi(w)``;
* the chi-invariant functional satisfies ``u(v_top) = 1`` and
  ``u(f_j w) = u(e_j w) + i a_j u(w)``.

The coefficient of ``e^nu`` in the restriction is ``u(v_nu)``, where ``v_nu`` is
the weight-``nu`` component of ``v``. On each weight space ``v_nu`` solves
``G x = p`` with ``G`` the Gram matrix of the words and ``p`` the values of phi.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product

import sympy

from .coefficients import GaussianRational, gaussian
from .lattice import ALPHA0, ALPHA1, Weight
from .series import TruncatedSeries

Word = tuple[int, ...]

SIMPLE = {0: ALPHA0, 1: ALPHA1}

MAX_DEPTH = 4
MAX_LEVEL = 3


class OracleInconsistency(ArithmeticError):
    pass


class HighestWeightWords:
    """Action of e_0, e_1 on words in f_0, f_1 applied to a highest weight vector."""

    def __init__(self, lam: Weight):
        self.lam = lam
        self._e = lru_cache(maxsize=None)(self._e_uncached)

    def weight(self, word: Word) -> Weight:
        w = self.lam
        for j in word:
            w = w - SIMPLE[j]
        return w

    def h_value(self, j: int, word: Word) -> int:
        w = self.weight(word)
        return w.a if j == 1 else w.k - w.a

    def _e_uncached(self, j: int, word: Word) -> tuple[tuple[Word, int], ...]:
        if not word:
            return ()
        head, rest = word[0], word[1:]
        out: dict[Word, int] = {}
        for w, c in self._e(j, rest):
            key = (head,) + w
            out[key] = out.get(key, 0) + c
        if head == j:
            hv = self.h_value(j, rest)
            if hv:
                out[rest] = out.get(rest, 0) + hv
        return tuple((w, c) for w, c in out.items() if c)

    def e(self, j: int, vec: dict[Word, object]) -> dict[Word, object]:
        out: dict[Word, object] = {}
        for word, c in vec.items():
            for w, d in self._e(j, word):
                out[w] = out.get(w, 0) + c * d
        return {w: c for w, c in out.items() if c}

    def form(self, left: Word, right: Word) -> int:
        """Contravariant form S(f_left v, f_right v) with S(v, v) = 1."""
        vec: dict[Word, object] = {right: 1}
        for j in left:
            vec = self.e(j, vec)
            if not vec:
                return 0
        return vec.get((), 0)


def _functional(words: HighestWeightWords, step):
    """Build a functional on words from phi(f_j w) = phi(e_j w) + step(j) phi(w)."""

    @lru_cache(maxsize=None)
    def value(word: Word):
        if not word:
            return 1
        j, rest = word[0], word[1:]
        total = step(j) * value(rest)
        for w, c in words._e(j, rest):
            total = total + c * value(w)
        return total

    return value


def _rational(x) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def _to_sympy(c) -> sympy.Expr:
    if isinstance(c, GaussianRational):
        return _rational(c.re) + sympy.I * _rational(c.im)
    return _rational(c)


def _from_sympy(x: sympy.Expr):
    def frac(v):
        v = sympy.Rational(v)
        return Fraction(int(v.p), int(v.q))

    return gaussian(frac(sympy.re(x)), frac(sympy.im(x)))


def oracle_spherical(lam: Weight, eta, chi, depth: int) -> TruncatedSeries:
    """Restriction of the normalized spherical vector, exact down to ``depth`` heights."""
    from .spherical import InadmissibleError, admissible

    if depth > MAX_DEPTH or lam.k > MAX_LEVEL:
        raise ValueError(f"oracle limited to depth <= {MAX_DEPTH} and level <= {MAX_LEVEL}")
    if not admissible(lam, eta, chi):
        raise InadmissibleError(f"{lam} is not admissible for eta={eta}, chi={chi}")
    words = HighestWeightWords(lam)
    b = {0: eta.b0, 1: eta.b1}
    a = {0: chi.b0, 1: chi.b1}
    i_unit = GaussianRational(0, 1)
    phi = _functional(words, lambda j: -i_unit * b[j])
    u = _functional(words, lambda j: i_unit * a[j])

    by_weight: dict[Weight, list[Word]] = {}
    for k in range(depth + 1):
        for word in product((0, 1), repeat=k):
            by_weight.setdefault(words.weight(word), []).append(word)

    terms = {}
    for nu, ws in by_weight.items():
        n = len(ws)
        G = sympy.Matrix(n, n, lambda r, c: words.form(ws[r], ws[c]))
        p = sympy.Matrix([_to_sympy(phi(w)) for w in ws])
        q = sympy.Matrix([_to_sympy(u(w)) for w in ws])
        null = G.nullspace()
        for vec in null:
            if sympy.simplify((q.T * vec)[0]) != 0 or sympy.simplify((p.T * vec)[0]) != 0:
                raise OracleInconsistency(f"functional does not vanish on the radical at weight {nu}")
        if G.rank() == 0:
            continue
        sol, params = G.gauss_jordan_solve(p)
        sol = sol.subs({t: 0 for t in params})
        value = sympy.expand((q.T * sol)[0])
        if value != 0:
            terms[(nu.a, nu.m)] = _from_sympy(value)
    return TruncatedSeries(lam.k, terms, lam.g2 - 2 * depth)


def weight_multiplicity(lam: Weight, nu: Weight, max_words: int = 4096) -> int:
    """dim V(lam)_nu as the rank of the Gram matrix on words of weight nu."""
    words = HighestWeightWords(lam)
    beta = lam - nu
    if beta.k != 0:
        return 0
    x = beta.m
    if (beta.a + 2 * x) % 2:
        return 0
    y = (beta.a + 2 * x) // 2
    if x < 0 or y < 0:
        return 0
    ws = _words_with_counts(x, y)
    if len(ws) > max_words:
        raise ValueError("weight space too deep for brute force")
    G = sympy.Matrix(len(ws), len(ws), lambda r, c: words.form(ws[r], ws[c]))
    return int(G.rank())


def _words_with_counts(x: int, y: int) -> list[Word]:
    """All words with x letters 0 and y letters 1."""
    out: list[Word] = []

    def rec(prefix, zeros, ones):
        if zeros == 0 and ones == 0:
            out.append(tuple(prefix))
            return
        if zeros:
            rec(prefix + [0], zeros - 1, ones)
        if ones:
            rec(prefix + [1], zeros, ones - 1)

    rec([], x, y)
    return out
