"""End-to-end acceptance checks, one test per criterion, each with its time limit."""

import io
from contextlib import redirect_stdout

from toricmes import fixtures as fx
from toricmes.cli import main
from toricmes.fan import Fan, is_complete, is_purely_top, star_complement
from toricmes.fanio import parse_fan, serialize_fan
from toricmes.mes import (build_mes, corrupt_atlas, global_E_dims, global_ih_dims,
                          is_equivariantly_formal, local_poincare, restriction_consistency,
                          torsion_witness, verify_axioms)
from toricmes.oracles import cube_lattice, h_vector, polygon_lattice, toric_gh
from toricmes.poly import Poly
from toricmes.sections import (PoincareVector, courant_basis, dim_A, graph_part,
                               graph_projects_bijectively, lift_fan_by_plf, sr_quotient_hilbert)


def every_fixture():
    return {
        "P1": fx.p1(),
        "P2": fx.p2_complete(),
        "polygon_cone3": fx.polygon_cone(3),
        "polygon_cone4": fx.polygon_cone(4),
        "polygon_cone5": fx.polygon_cone(5),
        "polygon_cone6": fx.polygon_cone(6),
        "cube_face_fan": fx.cube_face_fan(),
        "octahedron_fan": fx.octahedron_fan(),
        "ex15": fx.ex15(),
        "ex62": fx.ex62(),
        "affine_quadrant": fx.affine_cone([(1, 0), (0, 1)]),
        "cube_simplicialization": fx.cube_simplicialization(),
    }


def test_mayer_vietoris_cokernel_on_vertical_facets(acceptance, tmp_path):
    f = fx.ex15()
    lines = ["dim 3"] + [f"ray {i} " + " ".join(map(str, r)) for i, r in enumerate(f.rays)]
    for lab, cid in sorted(f.labels.items()):
        lines.append(f"cone {lab} " + " ".join(map(str, f.cones[cid].ray_ids)))
    path = tmp_path / "ex15.fan"
    path.write_text("\n".join(lines) + "\n")
    left, right = (",".join(map(str, s)) for s in fx.EX15_SPLIT)
    with acceptance(1, "mv on ex15 split: cokernel dimension 1 in degree 2", 1.0):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["mv", str(path), "--left", left, "--right", right, "--degree", "2"])
        assert code == 0
        assert buf.getvalue() == "coker-dim(deg 2) = 1\n"


def test_simplicial_fans_collapse_to_piecewise_polynomials(acceptance):
    with acceptance(2, "simplicial fans: local vectors (1), MES equals A", 5.0):
        for f in (fx.p2_complete(), fx.octahedron_fan(), fx.polygon_cone(3)):
            a = build_mes(f)
            for c in range(len(f.cones)):
                assert local_poincare(a, c) == (1,)
            for m in a.matrices.values():
                assert m == [[Poly.constant(m[0][0].nvars)]]
            subs = [f.whole] + [f.generated(c) for c in range(len(f.cones))]
            for sub in subs:
                e = global_E_dims(a, f, sub)
                assert e == PoincareVector([dim_A(f, sub, d) for d in range(0, a.cutoff + 1, 2)])


def test_intersection_betti_numbers_match_stanley_reisner(acceptance):
    with acceptance(3, "P2 and octahedron: ih = SR quotient = h-vector", 10.0):
        for f, expected in ((fx.p2_complete(), (1, 1, 1)), (fx.octahedron_fan(), (1, 3, 3, 1))):
            a = build_mes(f)
            ih = global_ih_dims(a, f)
            sr = sr_quotient_hilbert(f, a.cutoff)
            oracle = PoincareVector(h_vector(f.f_vector()))
            assert ih == sr == oracle == expected


def test_polygon_cone_local_ranks(acceptance):
    with acceptance(4, "polygon_cone(4,5,6): top local vector (1, m-3) = g-oracle", 10.0):
        for m in (4, 5, 6):
            f = fx.polygon_cone(m)
            a = build_mes(f)
            top = f.maximal[0]
            g = PoincareVector(toric_gh(polygon_lattice(m))[1])
            assert local_poincare(a, top) == g == (1, m - 3)


def test_cube_global_intersection_cohomology(acceptance):
    with acceptance(5, "cube_face_fan: ih (1,5,5,1) = toric h, palindromic", 60.0):
        f = fx.cube_face_fan()
        a = build_mes(f, cutoff=8)
        ih = global_ih_dims(a, f, 8)
        h = PoincareVector(toric_gh(cube_lattice())[0])
        assert ih == h == (1, 5, 5, 1)
        assert list(ih) == list(ih)[::-1]


def test_formality_verdicts(acceptance):
    with acceptance(6, "formality: complete, affine, star complements true; ex62 false", 60.0):
        complete = [fx.p1(), fx.p2_complete(), fx.cube_face_fan(), fx.octahedron_fan(),
                    fx.cube_simplicialization()]
        for f in complete:
            assert is_complete(f)
            assert is_equivariantly_formal(build_mes(f), f).formal
        affine = [fx.polygon_cone(m) for m in (3, 4, 5, 6)]
        affine += [fx.affine_cone([(1, 0), (0, 1)]), fx.affine_cone([(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
                   fx.affine_cone([(1, 2), (-1, 3)])]
        for f in affine:
            assert len(f.maximal) == 1 and f.dim(f.maximal[0]) == f.ambient_dim
            assert is_equivariantly_formal(build_mes(f), f).formal
        # every full-dimensional cone of every fixture, taken as an affine subfan
        for name, f in every_fixture().items():
            a = build_mes(f)
            for c in f.maximal:
                if f.dim(c) == f.ambient_dim:
                    assert is_equivariantly_formal(a, f, sub=f.generated(c)).formal, (name, c)
        for f in (fx.p2_complete(), fx.octahedron_fan()):
            a = build_mes(f)
            for r in range(len(f.rays)):
                assert is_equivariantly_formal(a, f, sub=star_complement(f, r)).formal
        f = fx.ex62()
        assert not is_equivariantly_formal(build_mes(f), f).formal


def test_torsion_dichotomy(acceptance):
    suite = {
        "P2": fx.p2_complete(),
        "cube_face_fan": fx.cube_face_fan(),
        "ex62": fx.ex62(),
        "ex15": fx.ex15(),
        "polygon_cone4": fx.polygon_cone(4),
        "ray_in_plane": Fan(2, [(1, 0)], [[0]]),
        "zero_fan": Fan(2, [], []),
        "line_in_plane": Fan(2, [(1, 0), (-1, 0)], [[0], [1]]),
        "cone_with_fin": Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, 0)], [[0, 1, 2], [1, 3]]),
        "square_cone_with_ray": Fan(3, [(1, 1, 1), (-1, 1, 1), (-1, -1, 1), (1, -1, 1), (0, 0, -1)],
                                    [[0, 1, 2, 3], [4]]),
    }
    with acceptance(7, f"torsion witness iff not purely n-dimensional ({len(suite)} fans)", 10.0):
        for name, f in suite.items():
            w = torsion_witness(build_mes(f), f)
            if is_purely_top(f):
                assert w is None, name
            else:
                assert w is not None and w.verified, name
                assert any(w.form)


def test_axiom_suite(acceptance):
    with acceptance(8, "axioms pass on every fixture; corrupted atlas located", 60.0):
        for name, f in every_fixture().items():
            rep = verify_axioms(build_mes(f), f)
            assert rep.passed, f"{name}: {rep.summary()}"
        f = fx.cube_face_fan()
        bad, (s, t, _, _) = corrupt_atlas(build_mes(f))
        rep = verify_axioms(bad, f)
        assert not rep.passed
        assert any(c.name in ("LME", "path-independence") for c in rep.failures())
        assert any(f"cone {s}" in c.detail for c in rep.failures())
        ok, triples = restriction_consistency(bad, f)
        assert not ok and triples and triples[0][0] == s


def test_uniqueness_under_pivot_choice(acceptance):
    with acceptance(9, "seeded builds give identical generator degrees", 60.0):
        for name, f in every_fixture().items():
            a = build_mes(f, seed=1)
            b = build_mes(f, seed=2)
            c = build_mes(f)
            assert a.basis_degrees == b.basis_degrees == c.basis_degrees, name


def test_line_bundle_lift(acceptance):
    with acceptance(10, "lift on P1: product fan for psi=0, valid fan for Courant psi", 1.0):
        f = fx.p1()
        flat = lift_fan_by_plf(f, {0: 0, 1: 0})
        expected = Fan(2, [(1, 0), (-1, 0), (0, 1)], [[0, 2], [1, 2]])
        assert flat == expected
        got = {frozenset(flat.rays[r] for r in c.ray_ids) for c in flat.cones}
        want = {frozenset(expected.rays[r] for r in c.ray_ids) for c in expected.cones}
        assert got == want and len(got) == 6
        for psi in courant_basis(f):
            g = lift_fan_by_plf(f, psi)
            assert graph_projects_bijectively(f, g)
            assert len(graph_part(g)) == len(f.cones)
            # rebuilding from its own file runs every fan check again
            assert parse_fan(serialize_fan(g)) == g
