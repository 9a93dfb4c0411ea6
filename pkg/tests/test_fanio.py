import pytest

from toricmes import fixtures as fx
from toricmes.fan import FanError
from toricmes.fanio import parse_fan, parse_plf, serialize_fan, serialize_plf

P2_TEXT = """\
# complete fan of the projective plane
dim 2
ray 0 1 0
ray 1 0 1
ray 2 -1 -1
cone 0 0 1
cone 1 1 2
cone 2 0 2
"""


def test_parse_p2():
    f = parse_fan(P2_TEXT)
    assert len(f.cones) == 7
    assert f == fx.p2_complete()
    assert f.labels[1] == f.cone_id([1, 2])


def test_parse_p1():
    f = parse_fan("dim 1\nray 0 1\nray 1 -1\ncone 0 0\ncone 1 1\n")
    assert len(f.cones) == 3


def test_rays_normalized_to_primitive():
    f = parse_fan("dim 2\nray 0 2 0\nray 1 0 3\ncone 0 0 1\n")
    assert f.rays == ((1, 0), (0, 1))


def test_duplicate_after_normalization():
    with pytest.raises(FanError, match="duplicate"):
        parse_fan("dim 2\nray 0 1 0\nray 1 2 0\ncone 0 0\ncone 1 1\n")


@pytest.mark.parametrize("text,msg", [
    ("ray 0 1 0\n", "before dim"),
    ("dim 2\nray 0 1\n", "coordinates"),
    ("dim 2\nray 0 1 x\n", "integer"),
    ("dim 2\nray 0 1 0\ncone 0 0 5\n", "undeclared"),
    ("dim 2\nbogus\n", "unknown keyword"),
    ("", "missing dim"),
    ("dim 2\nray 1 1 0\n", "numbered"),
    ("dim 2\nray 0 1 0\nray 0 0 1\n", "twice"),
])
def test_malformed(text, msg):
    with pytest.raises(FanError, match=msg):
        parse_fan(text)


@pytest.mark.parametrize("build", [fx.p1, fx.p2_complete, fx.cube_face_fan, fx.octahedron_fan,
                                   fx.ex15, fx.ex62, lambda: fx.polygon_cone(5)])
def test_round_trip(build):
    f = build()
    text = serialize_fan(f)
    g = parse_fan(text)
    assert g == f
    assert serialize_fan(g) == text


def test_serialization_is_canonical():
    a = parse_fan(P2_TEXT)
    b = parse_fan("dim 2\nray 0 -1 -1\nray 1 1 0\nray 2 0 1\ncone 0 1 2\ncone 1 0 2\ncone 2 0 1\n")
    assert serialize_fan(a) == serialize_fan(b)


def test_plf_round_trip():
    values = {0: 1, 1: 0, 2: -3}
    assert parse_plf(serialize_plf(values)) == values


@pytest.mark.parametrize("text", ["", "value 0 1\n", "plf\nvalue 0\n", "plf\nvalue 0 1\nvalue 0 2\n"])
def test_plf_malformed(text):
    with pytest.raises(FanError):
        parse_plf(text)
