"""Polynomials with rational coefficients in the doubled grading.

A monomial of ordinary degree k has graded degree 2k, matching the
convention that linear forms sit in degree 2.  Homogeneous pieces are
identified with coefficient vectors in the graded-lex monomial basis
returned by :func:`monomials`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Mapping, Sequence

from .linalg import LinMap, Vector, rat


@lru_cache(maxsize=None)
def monomials(d: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of all degree-k monomials in d variables.

    Graded-lex order: u1^k first, then decreasing in the first exponent,
    ties broken on the following ones.
    """
    if d < 0 or k < 0:
        raise ValueError("d and k must be nonnegative")
    if d == 0:
        return ((),) if k == 0 else ()
    out = []
    for combo in combinations_with_replacement(range(d), k):
        e = [0] * d
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(d: int, k: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(d, k))}


def n_monomials(d: int, k: int) -> int:
    return len(monomials(d, k))


def graded_dim(d: int, degree: int) -> int:
    """dim of the degree-``degree`` part of Q[u1..ud] in the doubled grading."""
    if degree < 0 or degree % 2:
        return 0
    return n_monomials(d, degree // 2)


class Poly:
    """Multivariate polynomial over Q in ``nvars`` variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            c = rat(c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, nvars: int, c=1) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_vector(cls, nvars: int, k: int, v: Vector) -> "Poly":
        mons = monomials(nvars, k)
        return cls(nvars, {mons[i]: c for i, c in v.items()})

    def to_vector(self, k: int | None = None) -> Vector:
        """Coefficients in the monomial basis of ordinary degree k."""
        if k is None:
            k = self.poly_degree()
        idx = monomial_index(self.nvars, k)
        out: Vector = {}
        for e, c in self.terms.items():
            if sum(e) != k:
                raise ValueError("polynomial is not homogeneous of the requested degree")
            out[idx[e]] = c
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def poly_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    @property
    def degree(self) -> int:
        """Graded degree (twice the ordinary degree)."""
        return 2 * self.poly_degree()

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = rat(other)
            return Poly(self.nvars, {e: c * x for e, x in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __call__(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, a in zip(point, e):
                if a:
                    t *= rat(x) ** a
            total += t
        return total

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), [-a for a in e])):
            c = self.terms[e]
            factors = [names[i] if a == 1 else f"{names[i]}^{a}" for i, a in enumerate(e) if a]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"Poly({self.to_string()})"


def substitute(f: Poly, S: Sequence[Sequence], new_nvars: int | None = None) -> Poly:
    """Compose ``f`` with the linear map whose matrix is ``S``.

    ``S`` has ``f.nvars`` rows and one column per new variable: the old
    variable i becomes ``sum_j S[i][j] * t_j``.  ``new_nvars`` is only needed
    when ``S`` has no rows.
    """
    if len(S) != f.nvars:
        raise ValueError(f"substitution has {len(S)} rows, polynomial has {f.nvars} variables")
    m = len(S[0]) if S else (new_nvars or 0)
    if any(len(r) != m for r in S):
        raise ValueError("ragged substitution matrix")
    images = [Poly(m, {tuple(int(i == j) for i in range(m)): c for j, c in enumerate(row)})
              for row in S]
    out = Poly(m)
    for e, c in f.terms.items():
        t = Poly.constant(m, c)
        for img, a in zip(images, e):
            if a:
                t = t * img ** a
        out = out + t
    return out


def substitution_map(S: Sequence[Sequence], k: int, new_nvars: int | None = None) -> LinMap:
    """The map on degree-k coefficient vectors induced by :func:`substitute`."""
    d_old = len(S)
    d_new = len(S[0]) if S else (new_nvars or 0)
    cols = [substitute(Poly(d_old, {e: 1}), S, d_new).to_vector(k) for e in monomials(d_old, k)]
    return LinMap(n_monomials(d_new, k), n_monomials(d_old, k), cols)


def multiplication_map(g: Poly, k: int, g_poly_degree: int | None = None) -> LinMap:
    """Multiplication by homogeneous ``g`` from degree k to degree k + deg g.

    Pass ``g_poly_degree`` when ``g`` may be zero.
    """
    kg = g.poly_degree() if g_poly_degree is None else g_poly_degree
    d = g.nvars
    cols = [(Poly(d, {e: 1}) * g).to_vector(k + kg) for e in monomials(d, k)]
    return LinMap(n_monomials(d, k + kg), n_monomials(d, k), cols)
