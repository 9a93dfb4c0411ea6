from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toricmes.poly import (Poly, graded_dim, monomials, multiplication_map, substitute,
                           substitution_map)


def test_monomials_small():
    assert monomials(2, 1) == ((1, 0), (0, 1))
    assert len(monomials(3, 2)) == 6
    assert monomials(0, 0) == ((),)
    assert monomials(0, 2) == ()


def test_graded_dim():
    assert graded_dim(2, 4) == 3
    assert graded_dim(2, 3) == 0
    assert graded_dim(2, -2) == 0


def test_degree_is_doubled():
    u = Poly.var(2, 0)
    assert u.degree == 2
    assert (u * u).degree == 4


def test_substitute_to_axis_kills_product():
    f = Poly.var(2, 0) * Poly.var(2, 1)
    assert substitute(f, [[1], [0]]).is_zero()


def test_substitute_identity():
    f = Poly.var(2, 0) ** 2
    assert substitute(f, [[1, 0], [0, 1]]) == f


def test_substitute_diagonal():
    f = (Poly.var(2, 0) + Poly.var(2, 1)) ** 2
    assert substitute(f, [[1], [1]]) == Poly(1, {(2,): 4})


def test_substitute_dimension_mismatch():
    with pytest.raises(ValueError):
        substitute(Poly.var(2, 0), [[1]])


def test_to_string():
    f = Poly(2, {(1, 0): 2, (0, 1): -1})
    assert f.to_string() == "2*x0 - x1"
    assert Poly(2).to_string() == "0"


def test_vector_round_trip():
    f = Poly(3, {(2, 0, 0): 1, (0, 1, 1): Fraction(-1, 2)})
    assert Poly.from_vector(3, 2, f.to_vector(2)) == f


def test_substitution_map_matches_substitute():
    S = [[1, 2], [0, -1], [3, 1]]
    f = Poly(3, {(1, 1, 0): 1, (0, 0, 2): 5})
    m = substitution_map(S, 2)
    assert Poly.from_vector(2, 2, m.apply(f.to_vector(2))) == substitute(f, S)


def test_multiplication_map():
    g = Poly.var(2, 0)
    m = multiplication_map(g, 1)
    f = Poly(2, {(0, 1): 3})
    assert Poly.from_vector(2, 2, m.apply(f.to_vector(1))) == g * f


coeff = st.integers(-3, 3)


def polys(nvars, max_deg=2):
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(nvars)])
    return st.dictionaries(exps, coeff, max_size=4).map(lambda t: Poly(nvars, t))


matrices_3x2 = st.lists(st.lists(coeff, min_size=2, max_size=2), min_size=3, max_size=3)


@given(polys(3), polys(3), matrices_3x2)
def test_substitute_is_ring_homomorphism(f, g, S):
    assert substitute(f * g, S) == substitute(f, S) * substitute(g, S)
    assert substitute(f + g, S) == substitute(f, S) + substitute(g, S)


@given(polys(3), matrices_3x2)
def test_substitute_does_not_raise_degree(f, S):
    assert substitute(f, S).poly_degree() <= f.poly_degree()


@given(polys(2), st.lists(coeff, min_size=2, max_size=2))
def test_evaluation_commutes_with_substitution(f, point):
    S = [[1, 1], [0, 2]]
    image = [sum(S[i][j] * point[j] for j in range(2)) for i in range(2)]
    assert substitute(f, S)(point) == f(image)
