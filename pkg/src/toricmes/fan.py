"""Rational polyhedral fans and their face lattices.

Cones are given by primitive integer ray generators.  Faces are found from
the dual description of each cone, computed by brute force over candidate
supporting hyperplanes; at the sizes this package targets (ambient dimension
at most 4, a few dozen rays) that is both exact and fast enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .linalg import Echelon, LinMap, kernel_from_rows, rank, solve, vec


class FanError(ValueError):
    """Invalid fan data: non-pointed cone, bad intersection, malformed input."""


RayVector = tuple  # tuple[int, ...], primitive


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Scale an integer vector to the primitive vector on its ray."""
    v = tuple(int(x) for x in v)
    g = reduce(gcd, (abs(x) for x in v), 0)
    if g == 0:
        raise FanError("zero vector does not span a ray")
    return tuple(x // g for x in v)


def _dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def _independent_prefix(vectors: Sequence[Sequence[int]]) -> list[int]:
    """Indices of the lexicographically first maximal independent subset."""
    ech = Echelon()
    return [i for i, v in enumerate(vectors) if ech.add(vec(v))]


def _coords(basis: Sequence[Sequence[int]], v: Sequence) -> list[Fraction]:
    """Coordinates of v in the basis given as a list of column vectors."""
    if not basis:
        if any(v):
            raise ValueError("vector is not in the span")
        return []
    m = LinMap.from_rows([[b[i] for b in basis] for i in range(len(v))], len(basis))
    x = solve(m, vec(v))
    if x is None:
        raise ValueError("vector is not in the span")
    return [x.get(i, Fraction(0)) for i in range(len(basis))]


@dataclass(frozen=True)
class Cone:
    """A pointed cone spanned by some rays of a fan.

    ``span_basis`` lists the generators (as ambient vectors) that form the
    coordinate basis of the linear span; coordinates on the span always
    refer to this basis.
    """

    ray_ids: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    dim: int
    span_basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rays(cls, ray_ids: Sequence[int], generators: Sequence[Sequence[int]]) -> "Cone":
        order = sorted(range(len(ray_ids)), key=lambda i: ray_ids[i])
        ids = tuple(ray_ids[i] for i in order)
        gens = tuple(tuple(generators[i]) for i in order)
        basis = tuple(gens[i] for i in _independent_prefix(gens))
        return cls(ids, gens, len(basis), basis)

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.ray_ids)

    def local_coords(self, v: Sequence) -> list[Fraction]:
        return _coords(self.span_basis, v)

    @cached_property
    def local_generators(self) -> list[list[Fraction]]:
        return [self.local_coords(g) for g in self.generators]

    @cached_property
    def facet_data(self) -> dict[frozenset, list[Fraction]]:
        """Facets as sets of local generator indices, with inner normals.

        Normals are linear forms in span coordinates, nonnegative on the cone
        and vanishing exactly on the facet's generators.
        """
        return _facets(self.local_generators, self.dim)

    def contains(self, v: Sequence) -> bool:
        try:
            x = self.local_coords(v)
        except ValueError:
            return False
        return all(_dot(w, x) >= 0 for w in self.facet_data.values())


def _facets(points: list[list[Fraction]], d: int) -> dict[frozenset, list[Fraction]]:
    if d == 0:
        return {}
    if d == 1:
        if not all(p[0] > 0 for p in points):
            raise FanError("cone is not pointed")
        return {frozenset(): [Fraction(1)]}
    facets: dict[frozenset, list[Fraction]] = {}
    for subset in combinations(range(len(points)), d - 1):
        rows = [vec(points[i]) for i in subset]
        ker = kernel_from_rows(rows, d)
        if len(ker) != 1:
            continue
        w = [ker[0].get(i, Fraction(0)) for i in range(d)]
        vals = [_dot(w, p) for p in points]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            w = [-x for x in w]
            vals = [-x for x in vals]
        else:
            continue
        zero = frozenset(i for i, x in enumerate(vals) if x == 0)
        if zero not in facets:
            # scale to a primitive integral normal for readable output
            den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in w), 1)
            wi = [int(x * den) for x in w]
            g = reduce(gcd, (abs(x) for x in wi), 0)
            facets[zero] = [Fraction(x, g) for x in wi]
    if not facets:
        raise FanError("cone is not pointed")
    if reduce(frozenset.intersection, facets.keys()):
        raise FanError("cone is not pointed")
    return facets


def _face_index_sets(cone: Cone) -> set[frozenset]:
    facets = list(cone.facet_data)
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for f in frontier:
            for g in facets:
                h = f & g
                if h not in faces:
                    new.add(h)
        faces |= new
        frontier = new
    faces.add(frozenset())
    if cone.dim >= 2:
        for i in range(len(cone.generators)):
            if frozenset([i]) not in faces:
                raise FanError(f"generator {cone.generators[i]} is not an extremal ray of its cone")
    return faces


def cone_faces(c: Cone) -> list[Cone]:
    """All proper faces of ``c``, the zero cone included, sorted by dimension."""
    out = []
    for s in _face_index_sets(c):
        idx = sorted(s)
        out.append(Cone.from_rays([c.ray_ids[i] for i in idx], [c.generators[i] for i in idx]))
    out.sort(key=lambda f: (f.dim, f.ray_ids))
    return out


def _h_representation(c: Cone, n: int) -> tuple[list[dict], list[dict]]:
    """Equations and inequalities (as ambient linear forms) cutting out ``c``."""
    basis_rows = [vec(b) for b in c.span_basis]
    eqs = kernel_from_rows(basis_rows, n)
    ineqs = []
    for w in c.facet_data.values():
        # ambient u with u . b_j = w_j for every basis vector b_j
        u = solve(LinMap.from_rows([list(b) for b in c.span_basis], n), vec(w))
        ineqs.append(u)
    return eqs, ineqs


def _extreme_rays(eqs: list[dict], ineqs: list[dict], n: int) -> list[list[Fraction]]:
    """Extreme rays of the pointed cone {x : eqs.x = 0, ineqs.x >= 0}."""
    K = kernel_from_rows(eqs, n)
    m = len(K)
    if m == 0:
        return []
    # express inequalities in the kernel coordinates y, x = sum y_j K_j
    A = [[sum((u.get(i, 0) * k.get(i, 0) for i in range(n)), Fraction(0)) for k in K]
         for u in ineqs]
    candidates = []
    if m == 1:
        candidates = [[Fraction(1)], [Fraction(-1)]]
    else:
        for subset in combinations(range(len(A)), m - 1):
            ker = kernel_from_rows([vec(A[i]) for i in subset], m)
            if len(ker) != 1:
                continue
            y = [ker[0].get(i, Fraction(0)) for i in range(m)]
            candidates += [y, [-t for t in y]]
    rays = []
    for y in candidates:
        if all(_dot(a, y) >= 0 for a in A):
            x = [sum((y[j] * K[j].get(i, 0) for j in range(m)), Fraction(0)) for i in range(n)]
            rays.append(x)
    return rays


class Fan:
    """A fan in Q^n given by primitive rays and the cones they span.

    Cones are closed under faces and indexed by position in ``cones``, which
    is sorted by ``(dim, ray_ids)``; index 0 is always the zero cone.
    ``labels`` maps the indices used for the generating cones in an input
    file to cone ids.
    """

    def __init__(self, ambient_dim: int, rays: Sequence[Sequence[int]],
                 cones: Iterable[Sequence[int]], labels: Sequence[int] | None = None,
                 check: bool = True):
        if ambient_dim < 1:
            raise FanError("ambient dimension must be at least 1")
        self.ambient_dim = n = ambient_dim
        prim = []
        for r in rays:
            if len(r) != n:
                raise FanError(f"ray {tuple(r)} does not have {n} coordinates")
            prim.append(primitive(r))
        if len(set(prim)) != len(prim):
            dup = next(p for p in prim if prim.count(p) > 1)
            raise FanError(f"duplicate ray {dup} after primitive normalization")
        self.rays: tuple[tuple[int, ...], ...] = tuple(prim)

        gens = [tuple(sorted(set(c))) for c in cones]
        if labels is None:
            labels = list(range(len(gens)))
        if len(labels) != len(gens):
            raise FanError("one label per generating cone is required")
        for g in gens:
            for i in g:
                if not 0 <= i < len(prim):
                    raise FanError(f"cone refers to unknown ray index {i}")

        by_rays: dict[tuple, Cone] = {(): Cone.from_rays((), ())}
        for g in gens:
            c = Cone.from_rays(g, [prim[i] for i in g])
            by_rays[c.ray_ids] = c
            for f in cone_faces(c):
                by_rays.setdefault(f.ray_ids, f)
        self.cones: tuple[Cone, ...] = tuple(sorted(by_rays.values(), key=lambda c: (c.dim, c.ray_ids)))
        self.index: dict[tuple, int] = {c.ray_ids: i for i, c in enumerate(self.cones)}
        self.labels: dict[int, int] = {lab: self.index[g] for lab, g in zip(labels, gens)}

        facets: list[list[int]] = [[] for _ in self.cones]
        cofacets: list[list[int]] = [[] for _ in self.cones]
        faces: list[list[int]] = [[] for _ in self.cones]
        for i, c in enumerate(self.cones):
            s = set(c.ray_ids)
            for j, t in enumerate(self.cones[:i]):
                if set(t.ray_ids) < s and t.dim < c.dim:
                    faces[i].append(j)
                    if t.dim == c.dim - 1:
                        facets[i].append(j)
                        cofacets[j].append(i)
        self.facets = tuple(tuple(f) for f in facets)
        self.cofacets = tuple(tuple(f) for f in cofacets)
        self.proper_faces = tuple(tuple(f) for f in faces)
        self.maximal = tuple(i for i in range(len(self.cones)) if not self.cofacets[i])
        if check:
            self._check_faces()
            self._check_intersections()

    # -- validation ------------------------------------------------------

    def _check_faces(self) -> None:
        for i, c in enumerate(self.cones):
            expected = {f.ray_ids for f in cone_faces(c)} if c.dim else set()
            got = {self.cones[j].ray_ids for j in self.proper_faces[i]}
            if expected != got:
                raise FanError(f"cone {c.ray_ids}: ray subsets that are not faces collide "
                               "with other cones")

    def _check_intersections(self) -> None:
        n = self.ambient_dim
        hrep = {i: _h_representation(self.cones[i], n) for i in self.maximal}
        for a, b in combinations(self.maximal, 2):
            ca, cb = self.cones[a], self.cones[b]
            common = tuple(sorted(set(ca.ray_ids) & set(cb.ray_ids)))
            if common not in self.index:
                raise FanError(f"cones {ca.ray_ids} and {cb.ray_ids} share rays {common} "
                               "that do not span a common face")
            t = self.index[common]
            tau = self.cones[t]
            if not (self.is_face(t, a) and self.is_face(t, b)):
                raise FanError(f"rays {common} do not span a common face of {ca.ray_ids} "
                               f"and {cb.ray_ids}")
            eqs = hrep[a][0] + hrep[b][0]
            ineqs = hrep[a][1] + hrep[b][1]
            for x in _extreme_rays(eqs, ineqs, n):
                if not _in_span(tau, x):
                    raise FanError(f"cones {ca.ray_ids} and {cb.ray_ids} intersect in more "
                                   "than a common face")

    # -- basic queries ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.cones)

    def __repr__(self) -> str:
        return f"Fan(n={self.ambient_dim}, rays={len(self.rays)}, cones={len(self.cones)})"

    def cone_id(self, ray_ids: Iterable[int]) -> int:
        key = tuple(sorted(ray_ids))
        try:
            return self.index[key]
        except KeyError:
            raise FanError(f"rays {key} do not span a cone of the fan") from None

    def ray_cone(self, ray: int) -> int:
        return self.cone_id((ray,))

    def dim(self, cid: int) -> int:
        return self.cones[cid].dim

    def cones_of_dim(self, k: int) -> list[int]:
        return [i for i, c in enumerate(self.cones) if c.dim == k]

    def f_vector(self) -> list[int]:
        """Number of cones of dimension 1..n."""
        return [len(self.cones_of_dim(k)) for k in range(1, self.ambient_dim + 1)]

    def is_face(self, tau: int, sigma: int) -> bool:
        return tau == sigma or tau in self.proper_faces[sigma]

    def meet(self, a: int, b: int) -> int:
        """The common face of two cones."""
        return self.cone_id(set(self.cones[a].ray_ids) & set(self.cones[b].ray_ids))

    def canonical_key(self) -> tuple:
        return (self.ambient_dim,
                frozenset(frozenset(self.rays[i] for i in c.ray_ids) for c in self.cones))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    # -- coordinates -----------------------------------------------------

    def restriction_matrix(self, sigma: int, tau: int) -> list[list[Fraction]]:
        """Matrix S with B_tau = B_sigma S for a face tau of sigma.

        A polynomial f on V_sigma (in sigma's span coordinates) restricts to
        ``substitute(f, S)`` on V_tau.
        """
        key = (sigma, tau)
        cache = self.__dict__.setdefault("_restr_cache", {})
        if key not in cache:
            if not self.is_face(tau, sigma):
                raise FanError(f"cone {tau} is not a face of cone {sigma}")
            s, t = self.cones[sigma], self.cones[tau]
            cols = [s.local_coords(b) for b in t.span_basis]
            cache[key] = [[cols[j][i] for j in range(t.dim)] for i in range(s.dim)]
        return cache[key]

    def global_coordinate_forms(self, sigma: int) -> list[list[Fraction]]:
        """Coefficients of the restrictions u_1..u_n to V_sigma, one row each."""
        c = self.cones[sigma]
        return [[Fraction(b[j]) for b in c.span_basis] for j in range(self.ambient_dim)]

    def facet_normal(self, sigma: int, tau: int) -> list[Fraction]:
        """Linear form on V_sigma vanishing on the facet tau, positive on sigma."""
        if tau not in self.facets[sigma]:
            raise FanError(f"cone {tau} is not a facet of cone {sigma}")
        s, t = self.cones[sigma], self.cones[tau]
        key = frozenset(s.ray_ids.index(r) for r in t.ray_ids)
        return s.facet_data[key]

    def annihilator(self, sigma: int) -> list[list[Fraction]]:
        """Basis of the global linear forms vanishing on V_sigma."""
        c = self.cones[sigma]
        ker = kernel_from_rows([vec(b) for b in c.span_basis], self.ambient_dim)
        return [[k.get(i, Fraction(0)) for i in range(self.ambient_dim)] for k in ker]

    # -- subfans ---------------------------------------------------------

    def closure(self, cone_ids: Iterable[int]) -> "Subfan":
        ids = set()
        for c in cone_ids:
            ids.add(c)
            ids.update(self.proper_faces[c])
        ids.add(0)
        return Subfan(self, frozenset(ids))

    @property
    def whole(self) -> "Subfan":
        return Subfan(self, frozenset(range(len(self.cones))))

    def generated(self, sigma: int) -> "Subfan":
        """The affine subfan of sigma and all its faces."""
        return self.closure([sigma])

    def label_subfan(self, labels: Iterable[int]) -> "Subfan":
        try:
            return self.closure(self.labels[lab] for lab in labels)
        except KeyError as e:
            raise FanError(f"unknown cone label {e.args[0]}") from None


def _in_span(c: Cone, x: Sequence) -> bool:
    return rank([vec(b) for b in c.span_basis] + [vec(x)]) == c.dim


@dataclass(frozen=True)
class Subfan:
    """A face-closed set of cones of a fan."""

    fan: Fan = field(repr=False, compare=False)
    cone_ids: frozenset

    def __post_init__(self):
        for c in self.cone_ids:
            if not set(self.fan.proper_faces[c]) <= self.cone_ids:
                raise FanError(f"cone set is not closed under faces (cone {c})")

    def __contains__(self, cid: int) -> bool:
        return cid in self.cone_ids

    def __iter__(self):
        return iter(sorted(self.cone_ids))

    def __len__(self) -> int:
        return len(self.cone_ids)

    def __and__(self, other: "Subfan") -> "Subfan":
        return Subfan(self.fan, self.cone_ids & other.cone_ids)

    def __or__(self, other: "Subfan") -> "Subfan":
        return Subfan(self.fan, self.cone_ids | other.cone_ids)

    def __le__(self, other: "Subfan") -> bool:
        return self.cone_ids <= other.cone_ids

    @property
    def maximal(self) -> list[int]:
        cof = self.fan.cofacets
        return [c for c in sorted(self.cone_ids) if not any(s in self.cone_ids for s in cof[c])]


def boundary_fan(f: Fan, sigma: int) -> Subfan:
    """The subfan of proper faces of sigma (empty for the zero cone)."""
    if not 0 <= sigma < len(f.cones):
        raise FanError(f"cone {sigma} is not in the fan")
    return Subfan(f, frozenset(f.proper_faces[sigma]))


def skeleton(f: Fan, k: int) -> Subfan:
    if not 0 <= k <= f.ambient_dim:
        raise FanError(f"skeleton dimension {k} out of range 0..{f.ambient_dim}")
    return Subfan(f, frozenset(i for i, c in enumerate(f.cones) if c.dim <= k))


def is_simplicial(f: Fan) -> bool:
    return all(c.is_simplicial for c in f.cones)


def is_purely_top(f: Fan) -> bool:
    return all(f.cones[i].dim == f.ambient_dim for i in f.maximal)


def is_complete(f: Fan) -> bool:
    """Combinatorial completeness test.

    Purely n-dimensional, every (n-1)-cone lies in exactly two n-cones and
    the adjacency graph of the n-cones is connected.  For n = 1 this reduces
    to both rays being present.
    """
    n = f.ambient_dim
    if not is_purely_top(f):
        return False
    top = f.cones_of_dim(n)
    if not top:
        return False
    if n == 1:
        return len(top) == 2
    adj: dict[int, set[int]] = {t: set() for t in top}
    for t in f.cones_of_dim(n - 1):
        up = f.cofacets[t]
        if len(up) != 2:
            return False
        a, b = up
        adj[a].add(b)
        adj[b].add(a)
    seen = {top[0]}
    stack = [top[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(top)


def star_complement(f: Fan, ray: int) -> Subfan:
    """All cones of a complete fan not containing the given ray."""
    if not 0 <= ray < len(f.rays):
        raise FanError(f"ray index {ray} out of range")
    if not is_complete(f):
        raise FanError("star complement is only defined here for complete fans")
    return Subfan(f, frozenset(i for i, c in enumerate(f.cones) if ray not in c.ray_ids))


def subfan_as_fan(sub: Subfan) -> Fan:
    """Re-index a subfan as a fan in its own right (rays renumbered)."""
    f = sub.fan
    used = sorted({r for c in sub.cone_ids for r in f.cones[c].ray_ids})
    remap = {r: i for i, r in enumerate(used)}
    return Fan(f.ambient_dim, [f.rays[r] for r in used],
               [[remap[r] for r in f.cones[c].ray_ids] for c in sub.maximal], check=False)
