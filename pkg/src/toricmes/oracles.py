"""Combinatorial oracles that do not depend on the sheaf machinery.

Polynomials here are integer coefficient lists, lowest degree first.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Sequence


def _pmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _padd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return out


def _xm1_pow(k: int) -> list[int]:
    """(x - 1)^k."""
    out = [1]
    for _ in range(k):
        out = _pmul(out, [-1, 1])
    return out


def _trim(p: Sequence[int]) -> list[int]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def h_vector(f_vector: Sequence[int]) -> list[int]:
    """h-vector of a simplicial complex of dimension n - 1 from (f_0, .., f_{n-1}).

    h(x) = sum_i f_{i-1} (x - 1)^(n - i) with f_{-1} = 1; h_i is the
    coefficient of x^(n - i).
    """
    if any(x < 0 for x in f_vector):
        raise ValueError("f-vector entries must be nonnegative")
    n = len(f_vector)
    fs = [1] + list(f_vector)
    total = [0]
    for i, fi in enumerate(fs):
        total = _padd(total, [fi * c for c in _xm1_pow(n - i)])
    total += [0] * (n + 1 - len(total))
    return list(reversed(total[: n + 1]))


class FaceLattice:
    """Faces of a polytope as vertex sets, ordered by inclusion.

    Built from the facets: the faces are the empty set, the whole polytope
    and all intersections of facets.
    """

    def __init__(self, faces: Iterable[frozenset], check: bool = True):
        self.faces = sorted(set(faces), key=lambda s: (len(s), sorted(s)))
        self.bottom = frozenset()
        self.top = max(self.faces, key=len)
        self._rank = self._ranks()
        if check:
            self.check()

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], check: bool = True) -> "FaceLattice":
        facets = [frozenset(f) for f in facets]
        top = frozenset().union(*facets)
        faces = {top, frozenset()}
        frontier = set(facets)
        while frontier:
            faces |= frontier
            new = set()
            for a in frontier:
                for b in facets:
                    c = a & b
                    if c not in faces:
                        new.add(c)
            frontier = new
        faces.add(frozenset())
        return cls(faces, check)

    def _ranks(self) -> dict[frozenset, int]:
        rank = {}
        for s in self.faces:  # sorted by size, so subfaces come first
            below = [rank[t] for t in rank if t < s]
            rank[s] = 1 + max(below) if below else 0
        return rank

    def dim(self, face: frozenset) -> int:
        return self._rank[face] - 1

    @property
    def d(self) -> int:
        return self.dim(self.top)

    def interval(self, lo: frozenset, hi: frozenset) -> list[frozenset]:
        return [s for s in self.faces if lo <= s <= hi]

    def below(self, face: frozenset) -> "FaceLattice":
        return FaceLattice(self.interval(frozenset(), face), check=False)

    def check(self) -> None:
        """Raise ValueError unless graded, diamond-shaped and Eulerian."""
        for lo in self.faces:
            for hi in self.faces:
                if not lo <= hi:
                    continue
                iv = self.interval(lo, hi)
                length = self._rank[hi] - self._rank[lo]
                if length == 2 and len(iv) != 4:
                    raise ValueError(f"interval {sorted(lo)} < {sorted(hi)} is not a diamond")
                if length >= 1:
                    even = sum(1 for s in iv if (self._rank[s] - self._rank[lo]) % 2 == 0)
                    if 2 * even != len(iv):
                        raise ValueError(f"interval {sorted(lo)} < {sorted(hi)} is not Eulerian")
        for s in self.faces:
            for t in self.faces:
                if s < t:
                    # covers must raise rank by exactly one
                    mids = [u for u in self.faces if s < u < t]
                    if not mids and self._rank[t] != self._rank[s] + 1:
                        raise ValueError("face lattice is not graded")

    def f_vector(self) -> list[int]:
        """Number of faces of dimension 0..d-1."""
        return [sum(1 for s in self.faces if self.dim(s) == k) for k in range(self.d)]


def toric_gh(L: FaceLattice) -> tuple[list[int], list[int]]:
    """Stanley's toric h- and g-polynomials of a polytope, coefficients lowest first."""
    h, g = _toric_gh(tuple(L.faces))
    return list(h), list(g)


@lru_cache(maxsize=None)
def _toric_gh(faces: tuple) -> tuple[list[int], list[int]]:
    L = FaceLattice(faces, check=False)
    d = L.d
    if d <= 0:
        return [1], [1]
    h = [0]
    for F in L.faces:
        if F == L.top:
            continue
        e = L.dim(F)
        gF = [1] if e < 0 else _toric_gh(tuple(L.below(F).faces))[1]
        h = _padd(h, _pmul(gF, _xm1_pow(d - 1 - e)))
    h = _trim(h) + [0] * max(0, d + 1 - len(_trim(h)))
    g = [h[0]] + [h[i] - h[i - 1] for i in range(1, d // 2 + 1)]
    return h[: d + 1], g


# ---------------------------------------------------------------------------
# Fixture polytopes


def polygon_lattice(m: int) -> FaceLattice:
    return FaceLattice.from_facets([(i, (i + 1) % m) for i in range(m)])


def simplex_lattice(d: int) -> FaceLattice:
    return FaceLattice.from_facets(combinations(range(d + 1), d))


def cube_lattice() -> FaceLattice:
    verts = list(product((1, -1), repeat=3))
    return FaceLattice.from_facets(
        [i for i, v in enumerate(verts) if v[axis] == sign] for axis in range(3) for sign in (1, -1))


def cross_polytope_lattice(d: int) -> FaceLattice:
    """Vertices 2i and 2i+1 are +e_i and -e_i."""
    return FaceLattice.from_facets([2 * i + s for i, s in enumerate(signs)]
                                   for signs in product((0, 1), repeat=d))


def point_lattice() -> FaceLattice:
    return FaceLattice([frozenset(), frozenset({0})])
