from itertools import combinations

import pytest

from toricmes import fixtures as fx
from toricmes.fan import (Fan, FanError, boundary_fan, cone_faces, is_complete, is_purely_top,
                          is_simplicial, skeleton, star_complement, subfan_as_fan)

ALL_FIXTURES = {
    "P1": fx.p1,
    "P2": fx.p2_complete,
    "polygon_cone3": lambda: fx.polygon_cone(3),
    "polygon_cone4": lambda: fx.polygon_cone(4),
    "polygon_cone6": lambda: fx.polygon_cone(6),
    "polygon_cone8": lambda: fx.polygon_cone(8),
    "cube": fx.cube_face_fan,
    "octahedron": fx.octahedron_fan,
    "ex15": fx.ex15,
    "ex62": fx.ex62,
    "cube_simplicialization": fx.cube_simplicialization,
}


def test_p2_face_closure():
    f = Fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
    assert len(f.cones) == 7
    assert f.cones[0].ray_ids == ()
    assert f.f_vector() == [3, 3]


def test_p1_has_three_cones():
    f = fx.p1()
    assert len(f.cones) == 3
    assert is_complete(f)


def test_non_primitive_duplicate_ray_rejected():
    with pytest.raises(FanError, match="duplicate ray"):
        Fan(2, [(1, 0), (2, 0)], [[0], [1]])


def test_non_pointed_rejected():
    with pytest.raises(FanError, match="not pointed"):
        Fan(2, [(1, 0), (0, 1), (-1, 0)], [[0, 1, 2]])


def test_overlapping_cones_rejected():
    with pytest.raises(FanError):
        Fan(2, [(1, 0), (0, 1), (1, 1)], [[0, 1], [2, 1]])


def test_non_extremal_generator_rejected():
    with pytest.raises(FanError):
        Fan(2, [(1, 0), (1, 1), (0, 1)], [[0, 1, 2]])


def test_faces_of_quadrant():
    f = Fan(2, [(1, 0), (0, 1)], [[0, 1]])
    top = f.cone_id([0, 1])
    faces = sorted(f.cones[i].ray_ids for i in f.proper_faces[top])
    assert faces == [(), (0,), (1,)]


def test_square_cone_faces():
    f = fx.polygon_cone(4)
    top = f.maximal[0]
    faces = cone_faces(f.cones[top])
    assert len(faces) == 9
    assert [c.dim for c in faces].count(2) == 4
    assert not is_simplicial(f)


def test_ray_faces():
    f = fx.p1()
    assert [f.cones[i].ray_ids for i in f.proper_faces[f.ray_cone(0)]] == [()]


def test_boundary_fan():
    f = fx.p2_complete()
    assert len(boundary_fan(f, 0)) == 0
    assert len(boundary_fan(f, f.cone_id([0, 1]))) == 3
    sq = fx.polygon_cone(4)
    assert len(boundary_fan(sq, sq.maximal[0])) == 9


def test_skeletons():
    f = fx.p2_complete()
    assert set(skeleton(f, 0)) == {0}
    assert len(skeleton(f, 1)) == 4
    assert skeleton(f, 2).cone_ids == f.whole.cone_ids
    with pytest.raises(FanError):
        skeleton(f, 3)


def test_predicates():
    assert not is_simplicial(fx.polygon_cone(4))
    f = fx.p2_complete()
    assert is_simplicial(f) and is_purely_top(f) and is_complete(f)
    ray = Fan(2, [(1, 0)], [[0]])
    assert not is_purely_top(ray) and not is_complete(ray)
    assert is_complete(fx.cube_face_fan())
    assert not is_complete(fx.ex15())
    assert is_purely_top(fx.ex62()) and not is_complete(fx.ex62())
    assert is_complete(fx.octahedron_fan())


def test_star_complement_p2():
    f = fx.p2_complete()
    sub = star_complement(f, 0)
    assert [f.cones[c].ray_ids for c in sub.maximal] == [(1, 2)]


def test_star_complement_octahedron():
    f = fx.octahedron_fan()
    sub = star_complement(f, 0)  # ray 0 is e1
    tops = [f.cones[c] for c in sub.maximal]
    assert len(tops) == 4
    assert all(all(g[0] <= 0 for g in c.generators) for c in tops)


def test_star_complement_p1():
    f = fx.p1()
    sub = star_complement(f, 0)
    assert sorted(f.cones[c].ray_ids for c in sub) == [(), (1,)]


def test_star_complement_requires_complete():
    with pytest.raises(FanError):
        star_complement(fx.ex62(), 0)


def test_fixture_shapes():
    cube = fx.cube_face_fan()
    assert len(cube.rays) == 8 and len(cube.maximal) == 6 and not is_simplicial(cube)
    ex62 = fx.ex62()
    a, b = ex62.maximal
    assert ex62.meet(a, b) == 0
    assert is_simplicial(fx.polygon_cone(3))
    assert fx.cube_simplicialization().f_vector() == [8, 18, 12]


@pytest.mark.parametrize("name", sorted(ALL_FIXTURES))
def test_face_closure_and_intersections(name):
    f = ALL_FIXTURES[name]()
    ids = {c.ray_ids for c in f.cones}
    for i, c in enumerate(f.cones):
        for face in cone_faces(c) if c.dim else []:
            assert face.ray_ids in ids
        for j in f.proper_faces[i]:
            # faces of faces are faces
            assert set(f.proper_faces[j]) <= set(f.proper_faces[i])
        for j in f.facets[i]:
            assert f.cones[j].dim == c.dim - 1
    for a, b in combinations(range(len(f.cones)), 2):
        m = f.meet(a, b)
        assert f.is_face(m, a) and f.is_face(m, b)


@pytest.mark.parametrize("name", sorted(ALL_FIXTURES))
def test_restriction_matrix_is_coordinate_change(name):
    f = ALL_FIXTURES[name]()
    for s in range(len(f.cones)):
        for t in f.facets[s]:
            S = f.restriction_matrix(s, t)
            for j, b in enumerate(f.cones[t].span_basis):
                image = [sum(S[i][j] * f.cones[s].span_basis[i][k] for i in range(f.dim(s)))
                         for k in range(f.ambient_dim)]
                assert image == list(b)


def test_facet_normals_vanish_on_facets():
    f = fx.cube_face_fan()
    for s in f.maximal:
        for t in f.facets[s]:
            w = f.facet_normal(s, t)
            sig = f.cones[s]
            for r, g in zip(sig.ray_ids, sig.local_generators):
                val = sum(a * b for a, b in zip(w, g))
                assert (val == 0) == (r in f.cones[t].ray_ids)
                assert val >= 0


def test_annihilator():
    f = Fan(3, [(1, 0, 0), (0, 1, 0)], [[0, 1]])
    ann = f.annihilator(f.maximal[0])
    assert ann == [[0, 0, 1]]


def test_subfan_operations():
    f = fx.ex15()
    left = f.label_subfan([0, 1])
    right = f.label_subfan([2, 3])
    both = left & right
    assert sorted(f.cones[c].dim for c in both.maximal) == [2, 2]
    assert (left | right).cone_ids == f.whole.cone_ids
    assert both <= left
    with pytest.raises(FanError):
        f.label_subfan([9])


def test_subfan_must_be_face_closed():
    from toricmes.fan import Subfan
    f = fx.p2_complete()
    with pytest.raises(FanError):
        Subfan(f, frozenset({f.cone_id([0, 1])}))


def test_subfan_as_fan():
    f = fx.octahedron_fan()
    g = subfan_as_fan(star_complement(f, 0))
    assert len(g.maximal) == 4 and len(g.rays) == 5


def test_geometric_equality_ignores_order():
    a = Fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])
    b = Fan(2, [(-1, -1), (0, 1), (1, 0)], [[2, 1], [0, 1], [0, 2]])
    assert a == b
    assert a != fx.ex62()


def test_cone_contains():
    f = fx.polygon_cone(4)
    c = f.cones[f.maximal[0]]
    assert c.contains((0, 0, 1))
    assert not c.contains((2, 0, 1))
    assert not c.contains((0, 0, -1))
