"""The minimal extension sheaf of a fan.

The stalk on a cone sigma is built from the sections on its boundary:
E(sigma) = A_sigma (x) Ebar(boundary sigma), where Ebar = E / mE.  Cones
are processed by increasing dimension.  For each one we compute the sections
of E over the boundary degree by degree, pick lifts of a basis of the
quotient by m, and record the facet components of those lifts as the
restriction matrices of the new stalk.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fan import Fan, FanError, Subfan, skeleton
from .linalg import Echelon, Vector, rank
from .poly import Poly, graded_dim, substitute
from .sections import PoincareVector, SectionEngine, SectionSpace, _check_degree


class TruncationWarning(UserWarning):
    """A result may depend on degrees above the cutoff."""


def default_cutoff(f: Fan) -> int:
    return 2 * f.ambient_dim + 2


class MESAtlas:
    """Generator degrees of every stalk and polynomial facet restriction matrices.

    ``matrices[(sigma, tau)]`` has one row per basis element of E(tau) and
    one column per basis element of E(sigma); its entries are polynomials in
    tau's span coordinates.
    """

    def __init__(self, fan: Fan, cutoff: int, seed: int | None = None):
        self.fan = fan
        self.cutoff = cutoff
        self.seed = seed
        self.basis_degrees: dict[int, tuple[int, ...]] = {}
        self.matrices: dict[tuple[int, int], list[list[Poly]]] = {}
        self.warnings: list[str] = []
        self.engine = SectionEngine(self)

    # Stalks protocol
    def degrees(self, cid: int) -> tuple[int, ...]:
        return self.basis_degrees[cid]

    def facet_matrix(self, sigma: int, tau: int) -> list[list[Poly]]:
        return self.matrices[(sigma, tau)]

    def rank(self, cid: int) -> int:
        return len(self.basis_degrees[cid])

    def copy(self) -> "MESAtlas":
        new = MESAtlas(self.fan, self.cutoff, self.seed)
        new.basis_degrees = dict(self.basis_degrees)
        new.matrices = {k: [list(r) for r in m] for k, m in self.matrices.items()}
        new.warnings = list(self.warnings)
        return new

    def set_entry(self, sigma: int, tau: int, row: int, col: int, value: Poly) -> None:
        """Overwrite one restriction entry (used to build negative controls)."""
        self.matrices[(sigma, tau)][row][col] = value
        self.engine.invalidate()

    def _warn(self, msg: str) -> None:
        self.warnings.append(msg)
        warnings.warn(msg, TruncationWarning, stacklevel=3)


def _choose_lifts(sp: SectionSpace, m_vectors: list[Vector], rng: random.Random | None) -> list[Vector]:
    """Section vectors whose classes form a basis of the quotient by m.

    Without an rng, kernel basis vectors are taken in order whenever they
    are independent of the m-part and the lifts chosen so far.  With an rng,
    candidates are random integer combinations of the kernel basis.
    """
    ech = Echelon(m_vectors)
    target = sp.dim - ech.rank
    lifts: list[Vector] = []
    if rng is None:
        candidates = iter(sp.basis)
    else:
        def gen():
            while True:
                v: Vector = {}
                for b in sp.basis:
                    c = rng.randint(-3, 3)
                    for i, x in b.items():
                        v[i] = v.get(i, 0) + c * x
                v = {i: x for i, x in v.items() if x}
                if v:
                    yield v
        candidates = gen()
    while len(lifts) < target:
        v = next(candidates)
        if ech.add(v):
            lifts.append(v)
    return lifts


def build_mes(f: Fan, cutoff: int | None = None, seed: int | None = None) -> MESAtlas:
    """Construct the minimal extension sheaf on ``f`` through degree ``cutoff``.

    ``seed`` switches from deterministic pivoting to random lifts; the
    resulting sheaves are isomorphic.
    """
    cutoff = default_cutoff(f) if cutoff is None else cutoff
    _check_degree(cutoff)
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    atlas = MESAtlas(f, cutoff, seed)
    eng = atlas.engine
    rng = random.Random(seed) if seed is not None else None
    atlas.basis_degrees[0] = (0,)
    for sigma in range(1, len(f.cones)):
        bd = f.facets[sigma]
        degrees: list[int] = []
        lifts_by_degree = []
        for d in range(0, cutoff + 1, 2):
            sp = eng.space(bd, d)
            lifts = _choose_lifts(sp, eng.m_part(bd, d), rng)
            degrees += [d] * len(lifts)
            lifts_by_degree.append((sp, lifts))
        if lifts_by_degree[-1][1]:
            atlas._warn(f"cone {sigma}: boundary quotient is nonzero in degree {cutoff}; "
                        "stalk generators above the cutoff may be missing")
        atlas.basis_degrees[sigma] = tuple(degrees)
        for tau in bd:
            tdeg = atlas.basis_degrees[tau]
            dt = f.dim(tau)
            mat = [[] for _ in tdeg]
            for sp, lifts in lifts_by_degree:
                d = sp.degree
                lay = eng.layout(tau, d)
                for v in lifts:
                    part = sp.split(v)[tau]
                    col = [Poly(dt) for _ in tdeg]
                    for j, k, off, size in lay.blocks:
                        col[j] = Poly.from_vector(dt, k, {i - off: x for i, x in part.items()
                                                          if off <= i < off + size})
                    for j in range(len(tdeg)):
                        mat[j].append(col[j])
            atlas.matrices[(sigma, tau)] = mat
    return atlas


# ---------------------------------------------------------------------------
# Poincare vectors


def local_poincare(atlas: MESAtlas, sigma: int) -> PoincareVector:
    if sigma not in atlas.basis_degrees:
        raise FanError(f"cone {sigma} is not in the atlas")
    return PoincareVector.from_degrees(atlas.basis_degrees[sigma])


def _cutoff(atlas: MESAtlas, cutoff: int | None) -> int:
    cutoff = atlas.cutoff if cutoff is None else cutoff
    _check_degree(cutoff)
    if cutoff > atlas.cutoff:
        atlas._warn(f"requested degree {cutoff} exceeds the atlas cutoff {atlas.cutoff}")
    return cutoff


def global_E_dims(atlas: MESAtlas, f: Fan, sub: Subfan | None = None,
                  cutoff: int | None = None) -> PoincareVector:
    """dim E^d(sub) for even d through the cutoff."""
    _same_fan(atlas, f)
    sub = sub or f.whole
    return atlas.engine.dims(sub.maximal, _cutoff(atlas, cutoff))


def global_ih_dims(atlas: MESAtlas, f: Fan, cutoff: int | None = None,
                   sub: Subfan | None = None) -> PoincareVector:
    """dim of E(Delta) / m E(Delta) degreewise.

    For equivariantly formal fans these are the intersection cohomology
    Betti numbers; otherwise they only count minimal generators.
    """
    _same_fan(atlas, f)
    sub = sub or f.whole
    cutoff = _cutoff(atlas, cutoff)
    dims = atlas.engine.mod_m_dims(sub.maximal, cutoff)
    if len(dims) > cutoff // 2 and dims[cutoff // 2]:
        atlas._warn(f"generators found in degree {cutoff}; higher generators are not excluded")
    return dims


def _same_fan(atlas: MESAtlas, f: Fan) -> None:
    if atlas.fan is not f and atlas.fan != f:
        raise FanError("atlas was built on a different fan")


@dataclass
class FormalityReport:
    formal: bool
    through_degree: int
    generator_degrees: PoincareVector
    section_dims: PoincareVector
    free_dims: PoincareVector
    first_failure: int | None = None

    def __bool__(self) -> bool:
        return self.formal

    def summary(self) -> str:
        verdict = "yes" if self.formal else "no"
        s = f"formal-through-degree {self.through_degree}: {verdict}"
        if self.first_failure is not None:
            k = self.first_failure // 2
            s += (f" (degree {self.first_failure}: dim E = {self.section_dims[k] if k < len(self.section_dims) else 0}"
                  f", free module would have {self.free_dims[k] if k < len(self.free_dims) else 0})")
        return s


def is_equivariantly_formal(atlas: MESAtlas, f: Fan, cutoff: int | None = None,
                            sub: Subfan | None = None) -> FormalityReport:
    """Compare dim E^d with a free module on the minimal generators, d <= cutoff."""
    sub = sub or f.whole
    cutoff = _cutoff(atlas, cutoff)
    gens = global_ih_dims(atlas, f, cutoff, sub)
    dims = global_E_dims(atlas, f, sub, cutoff)
    n = f.ambient_dim
    free, failure = [], None
    for k in range(cutoff // 2 + 1):
        d = 2 * k
        expect = sum(m * graded_dim(n, d - 2 * j) for j, m in enumerate(gens))
        free.append(expect)
        got = dims[k] if k < len(dims) else 0
        if failure is None and got != expect:
            failure = d
    return FormalityReport(failure is None, cutoff, gens, dims, PoincareVector(free), failure)


# ---------------------------------------------------------------------------
# Torsion


@dataclass
class TorsionWitness:
    """A nonzero global section killed by a nonzero global linear form."""

    cone: int
    degree: int
    section: dict[int, list[Poly]]
    form: list[Fraction]
    verified: bool

    def describe(self, f: Fan) -> str:
        sig = f.cones[self.cone]
        parts = "; ".join(f"cone {c}: [" + ", ".join(p.to_string() for p in v) + "]"
                          for c, v in sorted(self.section.items()))
        lin = Poly.linear(self.form).to_string([f"u{i + 1}" for i in range(len(self.form))])
        return f"cone {sig.ray_ids} degree {self.degree}: {parts} killed by {lin}"


def torsion_witness(atlas: MESAtlas, f: Fan) -> TorsionWitness | None:
    """Torsion element of E(Delta) supported on a maximal cone of dimension < n."""
    _same_fan(atlas, f)
    n = f.ambient_dim
    low = [s for s in f.maximal if f.dim(s) < n]
    if not low:
        return None
    sigma = low[0]
    ds = f.dim(sigma)
    h = Poly.constant(ds)
    for tau in f.facets[sigma]:
        h = h * Poly.linear(f.facet_normal(sigma, tau))
    degree = h.degree
    eng = atlas.engine
    rank0 = atlas.basis_degrees[sigma].index(0)
    section = {}
    for c in f.maximal:
        col = [Poly(f.dim(c)) for _ in atlas.basis_degrees[c]]
        if c == sigma:
            col[rank0] = h
        section[c] = col
    form = f.annihilator(sigma)[0]
    sp = eng.space(f.maximal, degree)
    upper = eng.space(f.maximal, degree + 2)
    v = sp.join({c: _module_vector(eng, c, section[c], degree) for c in f.maximal})
    rows = {c: [sum(Fraction(b[j]) * form[j] for j in range(n)) for b in f.cones[c].span_basis]
            for c in f.maximal}
    is_section = Echelon(sp.basis).contains(v)
    verified = bool(v) and is_section and any(form) and not eng.times_form(sp, rows, v, upper)
    return TorsionWitness(sigma, degree, section, form, verified)


def _module_vector(eng: SectionEngine, cid: int, col: Sequence[Poly], d: int) -> Vector:
    out: Vector = {}
    for i, k, off, size in eng.layout(cid, d).blocks:
        p = col[i]
        if not p.is_zero():
            for j, x in p.to_vector(k).items():
                out[off + j] = x
    return out


# ---------------------------------------------------------------------------
# Verification


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AxiomReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def by_name(self, name: str) -> list[Check]:
        return [c for c in self.checks if c.name == name]

    def summary(self) -> str:
        names = []
        for c in self.checks:
            if c.name not in names:
                names.append(c.name)
        lines = []
        for name in names:
            fails = [c for c in self.checks if c.name == name and not c.passed]
            lines.append(f"{name}: {'pass' if not fails else 'FAIL'}")
            for c in fails:
                lines.append(f"  {c.detail}")
        return "\n".join(lines)


def _compose(f: Fan, outer: list[list[Poly]], inner: list[list[Poly]], mid: int, low: int) -> list[list[Poly]]:
    """Matrix of restricting sigma -> mid -> low, entries on V_low."""
    S = f.restriction_matrix(mid, low)
    dl = f.dim(low)
    inner_low = [[substitute(p, S, dl) for p in row] for row in inner]
    ncols = len(inner[0]) if inner else 0
    out = []
    for row in outer:
        new = []
        for i in range(ncols):
            acc = Poly(dl)
            for j, a in enumerate(row):
                if not a.is_zero() and not inner_low[j][i].is_zero():
                    acc = acc + a * inner_low[j][i]
            new.append(acc)
        out.append(new)
    return out


def restriction_consistency(atlas: MESAtlas, f: Fan) -> tuple[bool, list[tuple[int, int, int]]]:
    """Check both facet chains from each cone to each codimension-2 face agree.

    Returns ``(ok, offending)`` with offending triples ``(sigma, tau, rho)``:
    rho is the codimension-2 face and tau the first facet on the chain.
    """
    bad = []
    for sigma in range(len(f.cones)):
        for rho in f.proper_faces[sigma]:
            if f.dim(rho) != f.dim(sigma) - 2:
                continue
            chains = [t for t in f.facets[sigma] if f.is_face(rho, t)]
            mats = [_compose(f, atlas.matrices[(t, rho)], atlas.matrices[(sigma, t)], t, rho)
                    for t in chains]
            if any(m != mats[0] for m in mats[1:]):
                bad.append((sigma, chains[0], rho))
    return not bad, bad


def verify_axioms(atlas: MESAtlas, f: Fan, cutoff: int | None = None) -> AxiomReport:
    """Check normalization, pointwise freeness, local minimal extension,
    flabbiness, odd vanishing and path independence."""
    _same_fan(atlas, f)
    cutoff = _cutoff(atlas, cutoff)
    eng = atlas.engine
    rep = AxiomReport()
    add = rep.checks.append

    add(Check("N", atlas.basis_degrees.get(0) == (0,),
              f"E(o) has generator degrees {atlas.basis_degrees.get(0)}"))

    for sigma in range(len(f.cones)):
        degs = atlas.basis_degrees[sigma]
        ds = f.dim(sigma)
        ok = all(d % 2 == 0 and d >= 0 for d in degs)
        for d in range(0, cutoff + 1, 2):
            expect = sum(graded_dim(ds, d - di) for di in degs)
            got = eng.space([sigma], d).dim
            if got != expect:
                ok = False
                add(Check("PF", False, f"cone {sigma} degree {d}: dim {got}, free rank gives {expect}"))
        for tau in f.facets[sigma]:
            mat = atlas.matrices[(sigma, tau)]
            tdeg = atlas.basis_degrees[tau]
            for j, row in enumerate(mat):
                for i, p in enumerate(row):
                    if p.is_zero():
                        continue
                    if not p.is_homogeneous() or p.degree != degs[i] - tdeg[j]:
                        ok = False
                        add(Check("PF", False, f"restriction {sigma}->{tau} entry ({j},{i}) "
                                               f"has wrong degree"))
        if ok:
            add(Check("PF", True, f"cone {sigma}"))

    for sigma in range(1, len(f.cones)):
        bd = f.facets[sigma]
        for d in range(0, cutoff + 1, 2):
            loc = eng.space([sigma], d)
            bsp = eng.space(bd, d)
            images = [eng.restrict(loc, bsp, v) for v in loc.basis]
            sec = Echelon(bsp.basis)
            if not all(sec.contains(w) for w in images):
                add(Check("LME", False, f"cone {sigma} degree {d}: restriction does not land in "
                                        "sections of the boundary"))
                continue
            mb = eng.m_part(bd, d)
            ebar_b = bsp.dim - rank(mb)
            ebar_s = loc.dim - rank(eng.m_part([sigma], d))
            onto = rank(mb + images) == bsp.dim
            if not onto or ebar_b != ebar_s:
                add(Check("LME", False, f"cone {sigma} degree {d}: dim Ebar(sigma) = {ebar_s}, "
                                        f"dim Ebar(boundary) = {ebar_b}, surjective = {onto}"))
            else:
                add(Check("LME", True, f"cone {sigma} degree {d}"))

    whole = f.maximal
    targets = [(f"<cone {s}>", [s]) for s in range(len(f.cones))]
    targets += [(f"skeleton {k}", skeleton(f, k).maximal) for k in range(f.ambient_dim)]
    for d in range(0, cutoff + 1, 2):
        gsp = eng.space(whole, d)
        for name, cones in targets:
            tsp = eng.space(cones, d)
            r = rank([eng.restrict(gsp, tsp, v) for v in gsp.basis])
            if r != tsp.dim:
                add(Check("flabby", False, f"{name} degree {d}: image rank {r} of {tsp.dim}"))
    if not rep.by_name("flabby"):
        add(Check("flabby", True))

    odd_ok = all(d % 2 == 0 for degs in atlas.basis_degrees.values() for d in degs)
    odd_ok = odd_ok and all(eng.space(whole, d).dim == 0 for d in range(1, cutoff + 1, 2))
    add(Check("odd-vanishing", odd_ok, "" if odd_ok else "odd-degree generators or sections"))

    ok, bad = restriction_consistency(atlas, f)
    add(Check("path-independence", ok,
              "; ".join(f"cone {s} via facet {t} to face {r}" for s, t, r in bad)))
    return rep


# ---------------------------------------------------------------------------
# Text dump


def dump_atlas(atlas: MESAtlas) -> str:
    f = atlas.fan
    lines = [f"cutoff {atlas.cutoff}"]
    for c in range(len(f.cones)):
        degs = " ".join(str(d) for d in atlas.basis_degrees[c])
        rays = " ".join(str(r) for r in f.cones[c].ray_ids)
        lines.append(f"cone {c} rays [{rays}] degrees {degs}")
    for (s, t) in sorted(atlas.matrices):
        lines.append(f"restr {s} {t}")
        names = [f"x{i}" for i in range(f.dim(t))]
        for row in atlas.matrices[(s, t)]:
            lines.append("  " + " | ".join(p.to_string(names) for p in row))
    return "\n".join(lines) + "\n"


def corrupt_atlas(atlas: MESAtlas) -> tuple[MESAtlas, tuple[int, int, int, int]]:
    """Copy of the atlas with one nonzero restriction entry replaced by zero.

    Prefers an entry of positive degree on a non-simplicial cone, since
    that is where real data lives; returns the copy and (sigma, tau, row, col).
    """
    bad = atlas.copy()
    keys = sorted(atlas.matrices, key=lambda k: (-atlas.rank(k[0]), k))
    for s, t in keys:
        mat = atlas.matrices[(s, t)]
        for j, row in enumerate(mat):
            for i, p in enumerate(row):
                if not p.is_zero() and (p.degree > 0 or atlas.rank(s) == 1):
                    bad.set_entry(s, t, j, i, Poly(p.nvars))
                    return bad, (s, t, j, i)
    raise ValueError("atlas has no nonzero restriction entries")
