"""Sections of sheaves of graded modules on a fan.

Everything here works for any sheaf whose stalks are free over the
polynomial rings A_sigma of the cones and whose restrictions to facets are
given by matrices of polynomials.  The sheaf of piecewise polynomial
functions is the special case with one generator of degree 0 per cone and
identity matrices; :mod:`toricmes.mes` supplies the minimal extension sheaf.

An element of E^d(sigma) is stored as a sparse vector: one block per basis
generator e_i with d_i <= d, holding the coefficients of a polynomial of
ordinary degree (d - d_i) / 2 in sigma's span coordinates.  Sections over a
subfan are tuples of such vectors over its maximal cones, concatenated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Protocol, Sequence

from .fan import Fan, FanError, Subfan, is_simplicial
from .linalg import Echelon, LinMap, Vector, axpy, kernel_from_rows, rank, shift
from .poly import Poly, graded_dim, monomials, multiplication_map, n_monomials, substitute, substitution_map


class PoincareVector(tuple):
    """Graded dimensions in even degrees: entry k is the dimension in degree 2k.

    Trailing zeros are dropped; the zero vector is ``(0,)``.
    """

    def __new__(cls, dims: Sequence[int] = ()):
        dims = list(dims)
        while len(dims) > 1 and dims[-1] == 0:
            dims.pop()
        if not dims:
            dims = [0]
        if any(x < 0 for x in dims):
            raise ValueError("dimensions must be nonnegative")
        return super().__new__(cls, dims)

    @classmethod
    def from_degrees(cls, degrees: Sequence[int]) -> "PoincareVector":
        """Histogram of a multiset of even graded degrees."""
        if not degrees:
            return cls()
        out = [0] * (max(degrees) // 2 + 1)
        for d in degrees:
            if d % 2:
                raise ValueError(f"odd degree {d}")
            out[d // 2] += 1
        return cls(out)

    def degrees(self) -> list[int]:
        return [2 * k for k, m in enumerate(self) for _ in range(m)]

    def __str__(self) -> str:
        return " ".join(str(x) for x in self)


class Stalks(Protocol):
    """Free stalks with polynomial facet restriction matrices."""

    fan: Fan

    def degrees(self, cid: int) -> Sequence[int]: ...

    def facet_matrix(self, sigma: int, tau: int) -> Sequence[Sequence[Poly]]: ...


class StructureSheaf:
    """The sheaf A of piecewise polynomial functions, as free rank-one stalks."""

    def __init__(self, fan: Fan):
        self.fan = fan

    def degrees(self, cid: int) -> tuple[int, ...]:
        return (0,)

    def facet_matrix(self, sigma: int, tau: int) -> list[list[Poly]]:
        return [[Poly.constant(self.fan.dim(tau))]]


def _check_degree(deg: int) -> None:
    if deg % 2:
        raise ValueError(f"graded degree {deg} is odd; all sections live in even degrees")


@dataclass
class Blocks:
    """Coordinate layout of E^d(sigma)."""

    dim: int
    # (generator index, ordinary polynomial degree, offset, size)
    blocks: list[tuple[int, int, int, int]]


@dataclass
class SectionSpace:
    """Basis of E^d over a list of maximal cones, in concatenated coordinates."""

    cones: tuple[int, ...]
    degree: int
    offsets: dict[int, int]
    total: int
    basis: list[Vector]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def split(self, v: Vector) -> dict[int, Vector]:
        out: dict[int, Vector] = {c: {} for c in self.cones}
        bounds = sorted((o, c) for c, o in self.offsets.items())
        for i, x in v.items():
            for o, c in reversed(bounds):
                if i >= o:
                    out[c][i - o] = x
                    break
        return out

    def join(self, parts: Mapping[int, Vector]) -> Vector:
        out: Vector = {}
        for c, v in parts.items():
            out.update(shift(v, self.offsets[c]))
        return out


class SectionEngine:
    """Degreewise linear algebra for sections of a sheaf with free stalks."""

    def __init__(self, stalks: Stalks):
        self.stalks = stalks
        self.fan = stalks.fan
        self._layout: dict = {}
        self._facet: dict = {}
        self._restr: dict = {}
        self._mult: dict = {}
        self._spaces: dict = {}

    def invalidate(self) -> None:
        for c in (self._layout, self._facet, self._restr, self._mult, self._spaces):
            c.clear()

    # -- single cones ------------------------------------------------------

    def layout(self, cid: int, d: int) -> Blocks:
        key = (cid, d)
        if key not in self._layout:
            dim = self.fan.dim(cid)
            blocks, off = [], 0
            for i, di in enumerate(self.stalks.degrees(cid)):
                if di <= d and (d - di) % 2 == 0:
                    k = (d - di) // 2
                    size = n_monomials(dim, k)
                    if size:
                        blocks.append((i, k, off, size))
                        off += size
            self._layout[key] = Blocks(off, blocks)
        return self._layout[key]

    def stalk_dim(self, cid: int, d: int) -> int:
        if d % 2:
            return 0
        return self.layout(cid, d).dim

    def facet_map(self, sigma: int, tau: int, d: int) -> LinMap:
        """The restriction E^d(sigma) -> E^d(tau) for a facet tau."""
        key = (sigma, tau, d)
        if key in self._facet:
            return self._facet[key]
        fan = self.fan
        src, dst = self.layout(sigma, d), self.layout(tau, d)
        R = self.stalks.facet_matrix(sigma, tau)
        S = fan.restriction_matrix(sigma, tau)
        dst_block = {i: (k, off) for i, k, off, _ in dst.blocks}
        cols: list[Vector] = [{} for _ in range(src.dim)]
        dt = fan.dim(tau)
        for i, k, off, size in src.blocks:
            sub = substitution_map(S, k, dt)
            for j, row in enumerate(R):
                entry = row[i]
                if entry.is_zero() or j not in dst_block:
                    continue
                kj, offj = dst_block[j]
                m = multiplication_map(entry, k, kj - k).compose(sub)
                for c in range(size):
                    axpy(Fraction(1), shift(m.columns[c], offj), cols[off + c])
        self._facet[key] = LinMap(dst.dim, src.dim, cols)
        return self._facet[key]

    def facet_chain(self, sigma: int, rho: int) -> list[int]:
        """Cones from sigma down to its face rho, always taking the first facet."""
        fan = self.fan
        if not fan.is_face(rho, sigma):
            raise FanError(f"cone {rho} is not a face of cone {sigma}")
        chain = [sigma]
        while chain[-1] != rho:
            cur = chain[-1]
            chain.append(next(t for t in fan.facets[cur] if fan.is_face(rho, t)))
        return chain

    def restriction(self, sigma: int, rho: int, d: int) -> LinMap:
        key = (sigma, rho, d)
        if key not in self._restr:
            if sigma == rho:
                m = LinMap.identity(self.stalk_dim(sigma, d))
            else:
                tau = self.facet_chain(sigma, rho)[1]
                m = self.restriction(tau, rho, d).compose(self.facet_map(sigma, tau, d))
            self._restr[key] = m
        return self._restr[key]

    def mult_map(self, cid: int, form: Sequence, d: int) -> LinMap:
        """Multiplication by a linear form on V_sigma, E^d(sigma) -> E^(d+2)(sigma)."""
        key = (cid, tuple(form), d)
        if key not in self._mult:
            dim = self.fan.dim(cid)
            src, dst = self.layout(cid, d), self.layout(cid, d + 2)
            dst_off = {i: off for i, _, off, _ in dst.blocks}
            ell = Poly.linear(list(form)) if dim else Poly(0)
            cols: list[Vector] = [{} for _ in range(src.dim)]
            for i, k, off, size in src.blocks:
                if i not in dst_off:  # the zero cone has nothing above degree 0
                    continue
                m = multiplication_map(ell, k, 1)
                for c in range(size):
                    cols[off + c] = shift(m.columns[c], dst_off[i])
            self._mult[key] = LinMap(dst.dim, src.dim, cols)
        return self._mult[key]

    # -- subfans ---------------------------------------------------------

    def space(self, cones: Sequence[int], d: int) -> SectionSpace:
        """Sections of degree d over the subfan generated by ``cones``.

        ``cones`` must be the maximal cones of that subfan.  The section space
        is the kernel of the pairwise agreement conditions on intersections.
        """
        cones = tuple(sorted(cones))
        key = (cones, d)
        if key in self._spaces:
            return self._spaces[key]
        offsets, total = {}, 0
        for c in cones:
            offsets[c] = total
            total += self.stalk_dim(c, d)
        rows: list[Vector] = []
        if d % 2 == 0:
            fan = self.fan
            for a, b in combinations(cones, 2):
                rho = fan.meet(a, b)
                if not self.stalk_dim(rho, d):
                    continue
                ra = self.restriction(a, rho, d).rows()
                rb = self.restriction(b, rho, d).rows()
                for x, y in zip(ra, rb):
                    row = shift(x, offsets[a])
                    for i, v in y.items():
                        row[i + offsets[b]] = -v
                    if row:
                        rows.append(row)
        basis = kernel_from_rows(rows, total) if d % 2 == 0 else []
        sp = SectionSpace(cones, d, offsets, total, basis)
        self._spaces[key] = sp
        return sp

    def subfan_space(self, sub: Subfan, d: int) -> SectionSpace:
        return self.space(sub.maximal, d)

    def restrict(self, src: SectionSpace, dst: SectionSpace, v: Vector) -> Vector:
        """Restrict a section over src's subfan to the smaller subfan of dst."""
        fan = self.fan
        parts = src.split(v)
        out = {}
        for rho in dst.cones:
            sigma = next((s for s in src.cones if fan.is_face(rho, s)), None)
            if sigma is None:
                raise FanError(f"cone {rho} is not in the source subfan")
            out[rho] = self.restriction(sigma, rho, src.degree).apply(parts[sigma])
        return dst.join(out)

    def times_form(self, sp: SectionSpace, form_rows: Mapping[int, Sequence], v: Vector,
                   target: SectionSpace) -> Vector:
        parts = sp.split(v)
        return target.join({c: self.mult_map(c, form_rows[c], sp.degree).apply(parts[c])
                            for c in sp.cones})

    def m_part(self, cones: Sequence[int], d: int) -> list[Vector]:
        """Spanning set of (m E)^d = A^2 E^(d-2) inside the degree-d sections."""
        if d < 2:
            return []
        fan = self.fan
        lower = self.space(cones, d - 2)
        upper = self.space(cones, d)
        forms = {c: fan.global_coordinate_forms(c) for c in upper.cones}
        out = []
        for j in range(fan.ambient_dim):
            rows = {c: forms[c][j] for c in upper.cones}
            for b in lower.basis:
                w = self.times_form(lower, rows, b, upper)
                if w:
                    out.append(w)
        return out

    def mod_m_dims(self, cones: Sequence[int], cutoff: int) -> PoincareVector:
        """Degreewise dimensions of E/mE over the subfan, through ``cutoff``."""
        _check_degree(cutoff)
        dims = []
        for d in range(0, cutoff + 1, 2):
            dims.append(self.space(cones, d).dim - rank(self.m_part(cones, d)))
        return PoincareVector(dims)

    def dims(self, cones: Sequence[int], cutoff: int) -> PoincareVector:
        _check_degree(cutoff)
        return PoincareVector([self.space(cones, d).dim for d in range(0, cutoff + 1, 2)])


def structure_engine(fan: Fan) -> SectionEngine:
    eng = fan.__dict__.get("_structure_engine")
    if eng is None:
        eng = fan.__dict__["_structure_engine"] = SectionEngine(StructureSheaf(fan))
    return eng


# ---------------------------------------------------------------------------
# Piecewise polynomial functions


@dataclass
class PiecewiseSection:
    """A compatible family of polynomials on the maximal cones of a subfan.

    ``pieces[sigma]`` is a polynomial in sigma's span coordinates.
    """

    fan: Fan
    cones: tuple[int, ...]
    pieces: dict[int, Poly]
    degree: int

    def piece_on(self, rho: int) -> Poly:
        """The polynomial on any cone of the subfan (restricting from a maximal one)."""
        for s in self.cones:
            if self.fan.is_face(rho, s):
                p = self.pieces[s]
                if s == rho:
                    return p
                return substitute(p, self.fan.restriction_matrix(s, rho), self.fan.dim(rho))
        raise FanError(f"cone {rho} is not in the section's subfan")

    def value(self, point: Sequence) -> Fraction:
        for s in self.cones:
            c = self.fan.cones[s]
            if c.contains(point):
                return self.pieces[s](c.local_coords(point))
        raise ValueError(f"point {tuple(point)} is outside the support")

    def is_compatible(self) -> bool:
        fan = self.fan
        for a, b in combinations(self.cones, 2):
            rho = fan.meet(a, b)
            pa = substitute(self.pieces[a], fan.restriction_matrix(a, rho), fan.dim(rho))
            pb = substitute(self.pieces[b], fan.restriction_matrix(b, rho), fan.dim(rho))
            if pa != pb:
                return False
        return True

    def to_vector(self, sp: SectionSpace) -> Vector:
        k = self.degree // 2
        return sp.join({c: self.pieces[c].to_vector(k) if not self.pieces[c].is_zero() else {}
                        for c in self.cones})

    @classmethod
    def from_vector(cls, fan: Fan, sp: SectionSpace, v: Vector) -> "PiecewiseSection":
        k = sp.degree // 2
        parts = sp.split(v)
        return cls(fan, sp.cones, {c: Poly.from_vector(fan.dim(c), k, parts[c]) for c in sp.cones},
                   sp.degree)

    def __mul__(self, other: "PiecewiseSection") -> "PiecewiseSection":
        if other.cones != self.cones:
            raise ValueError("sections live on different subfans")
        return PiecewiseSection(self.fan, self.cones,
                                {c: self.pieces[c] * other.pieces[c] for c in self.cones},
                                self.degree + other.degree)

    def __add__(self, other: "PiecewiseSection") -> "PiecewiseSection":
        if other.cones != self.cones or other.degree != self.degree:
            raise ValueError("sections are not in the same space")
        return PiecewiseSection(self.fan, self.cones,
                                {c: self.pieces[c] + other.pieces[c] for c in self.cones},
                                self.degree)


class PLF(PiecewiseSection):
    """A piecewise linear function with integral values on the ray generators."""

    def ray_values(self) -> dict[int, int]:
        fan = self.fan
        out = {}
        for s in self.cones:
            c = fan.cones[s]
            for r, g in zip(c.ray_ids, c.local_generators):
                out[r] = self.pieces[s](g)
        return {r: int(v) for r, v in sorted(out.items())}


def constant_section(fan: Fan, sub: Subfan | None = None, c=1) -> PiecewiseSection:
    sub = sub or fan.whole
    cones = tuple(sub.maximal)
    return PiecewiseSection(fan, cones, {s: Poly.constant(fan.dim(s), c) for s in cones}, 0)


def global_polynomial(fan: Fan, g: Poly, sub: Subfan | None = None) -> PiecewiseSection:
    """Restriction of a polynomial on V = Q^n to the cones of a subfan."""
    if g.nvars != fan.ambient_dim:
        raise ValueError("polynomial must be in the ambient coordinates")
    if not g.is_homogeneous():
        raise ValueError("only homogeneous polynomials are graded sections")
    sub = sub or fan.whole
    cones = tuple(sub.maximal)
    pieces = {}
    for s in cones:
        B = fan.global_coordinate_forms(s)
        pieces[s] = substitute(g, B, fan.dim(s))
    return PiecewiseSection(fan, cones, pieces, g.degree)


def multiply(s: PiecewiseSection, g: Poly) -> PiecewiseSection:
    """Action of a global polynomial on a piecewise section."""
    return s * global_polynomial(s.fan, g, s.fan.closure(s.cones))


def sections_A(f: Fan, sub: Subfan, deg: int) -> list[PiecewiseSection]:
    """Basis of the degree-``deg`` piecewise polynomials on a subfan."""
    _check_degree(deg)
    if deg < 0:
        return []
    sp = structure_engine(f).subfan_space(sub, deg)
    return [PiecewiseSection.from_vector(f, sp, v) for v in sp.basis]


def dim_A(f: Fan, sub: Subfan, deg: int) -> int:
    _check_degree(deg)
    return structure_engine(f).subfan_space(sub, deg).dim


def mod_m_dims(f: Fan, sub: Subfan, cutoff: int) -> PoincareVector:
    """Dimensions of A(sub)/m A(sub) in degrees 0..cutoff."""
    return structure_engine(f).mod_m_dims(sub.maximal, cutoff)


def plf_from_values(f: Fan, values: Mapping[int, int], sub: Subfan | None = None) -> PLF:
    """The piecewise linear function with given integral values on the rays.

    Raises FanError when the values are not linear on some cone.
    """
    sub = sub or f.whole
    cones = tuple(sub.maximal)
    pieces = {}
    for s in cones:
        c = f.cones[s]
        missing = [r for r in c.ray_ids if r not in values]
        if missing:
            raise FanError(f"no value given for rays {missing}")
        basis_ids = [c.ray_ids[c.generators.index(b)] for b in c.span_basis]
        ell = Poly.linear([values[r] for r in basis_ids]) if c.dim else Poly(0)
        for r, g in zip(c.ray_ids, c.local_generators):
            if ell(g) != values[r]:
                raise FanError(f"values are not linear on cone {c.ray_ids}")
        pieces[s] = ell
    for v in values.values():
        if int(v) != v:
            raise FanError("PLF values must be integers")
    return PLF(f, cones, pieces, 2)


def courant_basis(f: Fan) -> list[PLF]:
    """One Courant function per ray: 1 on its generator, 0 on all others."""
    if not is_simplicial(f):
        raise FanError("Courant functions need a simplicial fan")
    return [plf_from_values(f, {r: int(r == i) for r in range(len(f.rays))})
            for i in range(len(f.rays))]


# ---------------------------------------------------------------------------
# Stanley-Reisner rings


@dataclass
class SRPresentation:
    """Q[t_rho] with the face ideal I and the linear ideal J.

    Linear generators are coefficient lists over the rays, one per
    coordinate u_j of the ambient space.
    """

    nvars: int
    I_generators: list[frozenset]
    J_generators: list[list[int]]


def face_ray_sets(f: Fan) -> set[frozenset]:
    """Ray sets contained in some cone of the fan."""
    out = set()
    for c in f.cones:
        ids = c.ray_ids
        for k in range(len(ids) + 1):
            out.update(frozenset(s) for s in combinations(ids, k))
    return out


def sr_presentation(f: Fan) -> SRPresentation:
    faces = face_ray_sets(f)
    nr = len(f.rays)
    minimal = []
    for k in range(1, nr + 1):
        for s in combinations(range(nr), k):
            fs = frozenset(s)
            if fs in faces:
                continue
            if all(fs - {x} in faces for x in fs):
                minimal.append(fs)
    J = [[f.rays[r][j] for r in range(nr)] for j in range(f.ambient_dim)]
    return SRPresentation(nr, minimal, J)


def _face_monomials(f: Fan, faces: set[frozenset], k: int) -> list[tuple[int, ...]]:
    return [e for e in monomials(len(f.rays), k)
            if frozenset(i for i, a in enumerate(e) if a) in faces]


def sr_hilbert(f: Fan, cutoff: int) -> PoincareVector:
    """Hilbert function of Q[t]/I in doubled degrees 0..cutoff."""
    _check_degree(cutoff)
    faces = face_ray_sets(f)
    return PoincareVector([len(_face_monomials(f, faces, k)) for k in range(cutoff // 2 + 1)])


def sr_quotient_hilbert(f: Fan, cutoff: int) -> PoincareVector:
    """Hilbert function of Q[t]/(I + J), by linear algebra on face monomials."""
    _check_degree(cutoff)
    pres = sr_presentation(f)
    faces = face_ray_sets(f)
    nr = len(f.rays)
    dims = []
    for k in range(cutoff // 2 + 1):
        basis = _face_monomials(f, faces, k)
        idx = {e: i for i, e in enumerate(basis)}
        span = Echelon()
        if k >= 1:
            for m in _face_monomials(f, faces, k - 1):
                for lin in pres.J_generators:
                    v: Vector = {}
                    for r, c in enumerate(lin):
                        if not c:
                            continue
                        e = list(m)
                        e[r] += 1
                        i = idx.get(tuple(e))
                        if i is not None:  # monomials outside the face set lie in I
                            v[i] = v.get(i, 0) + Fraction(c)
                    span.add({i: x for i, x in v.items() if x})
        dims.append(len(basis) - span.rank)
    return PoincareVector(dims)


def courant_monomial(f: Fan, courant: Sequence[PLF], e: Sequence[int]) -> PiecewiseSection:
    """Image of the monomial t^e under t_rho -> Courant(rho)."""
    out = constant_section(f)
    for r, a in enumerate(e):
        for _ in range(a):
            out = out * courant[r]
    return out


# ---------------------------------------------------------------------------
# Mayer-Vietoris


def mayer_vietoris_coker(f: Fan, left: Subfan, right: Subfan, deg: int,
                         engine: SectionEngine | None = None) -> int:
    """dim coker(E(left) + E(right) -> E(left & right)) in degree ``deg``.

    Uses the sheaf A unless another engine is given.
    """
    _check_degree(deg)
    eng = engine or structure_engine(f)
    meet = left & right
    target = eng.subfan_space(meet, deg)
    ech = Echelon()
    for sub in (left, right):
        src = eng.subfan_space(sub, deg)
        for v in src.basis:
            ech.add(eng.restrict(src, target, v))
    return target.dim - ech.rank


# ---------------------------------------------------------------------------
# Line bundle fans


def lift_fan_by_plf(f: Fan, psi: PLF | Mapping[int, int]) -> Fan:
    """Fan of the line bundle whose graph cones lie over f.

    Rays: the graph points (v_rho, psi(v_rho)) with the same indices as in f,
    followed by the vertical ray (0, .., 0, 1).  Cones: graph cones over all
    cones of f and their sums with the vertical ray.
    """
    values = psi.ray_values() if isinstance(psi, PLF) else dict(psi)
    plf_from_values(f, values)  # linearity check on every cone
    n = f.ambient_dim
    rays = [tuple(r) + (values[i],) for i, r in enumerate(f.rays)]
    vertical = len(rays)
    rays.append((0,) * n + (1,))
    cones = [list(f.cones[s].ray_ids) + [vertical] for s in f.maximal]
    return Fan(n + 1, rays, cones)


def graph_part(lifted: Fan) -> list[int]:
    """Cone ids of the lifted fan that do not contain the vertical ray."""
    vertical = len(lifted.rays) - 1
    return [i for i, c in enumerate(lifted.cones) if vertical not in c.ray_ids]


def graph_projects_bijectively(f: Fan, lifted: Fan) -> bool:
    """Dropping the last coordinate maps the graph cones one-to-one onto f's cones."""
    n = f.ambient_dim
    images = []
    for c in graph_part(lifted):
        cone = lifted.cones[c]
        if any(lifted.rays[r][:n] != f.rays[r] for r in cone.ray_ids):
            return False
        if cone.ray_ids not in f.index or f.dim(f.index[cone.ray_ids]) != cone.dim:
            return False
        images.append(cone.ray_ids)
    return sorted(images) == sorted(c.ray_ids for c in f.cones)
