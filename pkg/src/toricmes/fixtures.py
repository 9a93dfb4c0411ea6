"""Named fixture fans used by the tests and the ``gen`` command."""

from __future__ import annotations

from itertools import product
from typing import Sequence

from .fan import Fan, FanError

_POLYGONS = {
    3: [(1, 0), (0, 1), (-1, -1)],
    4: [(1, 1), (-1, 1), (-1, -1), (1, -1)],
    5: [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)],
    6: [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
}


def polygon_vertices(m: int) -> list[tuple[int, int]]:
    """Vertices of a convex lattice m-gon in cyclic order."""
    if m < 3:
        raise FanError("a polygon needs at least 3 vertices")
    if m in _POLYGONS:
        return list(_POLYGONS[m])
    # points on a parabola are in convex position; close up through the top
    return [(i, i * i) for i in range(m)]


def p1() -> Fan:
    return Fan(1, [(1,), (-1,)], [[0], [1]])


def p2_complete() -> Fan:
    return Fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


def polygon_cone(m: int) -> Fan:
    """Affine fan of the cone over a lattice m-gon placed at height 1."""
    verts = polygon_vertices(m)
    return Fan(3, [(x, y, 1) for x, y in verts], [list(range(m))])


def cube_face_fan() -> Fan:
    rays = list(product((1, -1), repeat=3))
    cones = []
    for axis in range(3):
        for sign in (1, -1):
            cones.append([i for i, r in enumerate(rays) if r[axis] == sign])
    return Fan(3, rays, cones)


def octahedron_fan() -> Fan:
    rays = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    cones = [[a, 2 + b, 4 + c] for a, b, c in product((0, 1), repeat=3)]
    return Fan(3, rays, cones)


def ex15() -> Fan:
    """The four vertical facet cones of the cube.

    Cone labels: 0 is x = 1, 1 is y = 1, 2 is x = -1, 3 is y = -1, so the
    labels {0, 1} and {2, 3} give two pairs of adjacent facets.
    """
    rays = list(product((1, -1), repeat=3))
    cones = []
    for axis, sign in ((0, 1), (1, 1), (0, -1), (1, -1)):
        cones.append([i for i, r in enumerate(rays) if r[axis] == sign])
    return Fan(3, rays, cones)


EX15_SPLIT = ((0, 1), (2, 3))


def ex62() -> Fan:
    """Two quadrants of the plane meeting only in the origin."""
    return Fan(2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [[0, 1], [2, 3]])


def affine_cone(rays: Sequence[Sequence[int]]) -> Fan:
    rays = [tuple(r) for r in rays]
    if not rays:
        raise FanError("affine_cone needs at least one ray")
    return Fan(len(rays[0]), rays, [list(range(len(rays)))])


def cube_simplicialization() -> Fan:
    """cube_face_fan with every square cone cut along one diagonal."""
    f = cube_face_fan()
    cones = []
    for c in f.maximal:
        ids = f.cones[c].ray_ids
        # order the square's vertices cyclically, then split along 0-2
        gens = {i: f.rays[i] for i in ids}
        a = ids[0]
        adj = [j for j in ids if j != a and sum(x != y for x, y in zip(gens[a], gens[j])) == 1]
        opp = next(j for j in ids if j != a and j not in adj)
        cones += [[a, adj[0], opp], [a, adj[1], opp]]
    return Fan(3, f.rays, cones)


FIXTURES = {
    "P1": p1,
    "P2_complete": p2_complete,
    "polygon_cone": polygon_cone,
    "cube_face_fan": cube_face_fan,
    "octahedron_fan": octahedron_fan,
    "ex15": ex15,
    "ex62": ex62,
    "affine_cone": affine_cone,
    "cube_simplicialization": cube_simplicialization,
}


def fixtures(name: str, *params) -> Fan:
    try:
        build = FIXTURES[name]
    except KeyError:
        raise FanError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
    return build(*params)
