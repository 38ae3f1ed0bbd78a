from fractions import Fraction

import pytest

from exactcat.bundles import (LineBundleClass, NodalCurve, NonInvertibleGluing, RankMismatch, descend,
                              line_bundle, pullback, trivial_bundle)
from exactcat.curves import global_sections, line_bundle_iso, pic_classes, rank_degree_slope
from exactcat.linalg import Field, Matrix
from exactcat.oracles import pic_bruteforce
from exactcat.sampling import random_invertible

F5 = Field(5)
CUBIC = NodalCurve.nodal_cubic(F5)


def test_rank_degree_slope():
    assert rank_degree_slope((3,)) == (1, 3, 3)
    assert rank_degree_slope((2, 1)) == (2, 3, Fraction(3, 2))
    g = Matrix(F5, [[0, 1], [1, 0]])
    assert rank_degree_slope(descend(CUBIC, [1, -1], [g])) == (2, 0, 0)


def test_trivial_descent_roundtrip():
    eye = Matrix.identity(F5, 2)
    v = descend(CUBIC, [0, 0], [eye])
    assert v == trivial_bundle(CUBIC, [0, 0])
    assert pullback(v) == ((0, 0), (eye,))


def test_random_descent_roundtrip(rng):
    for _ in range(100):
        r = rng.randint(1, 3)
        up = sorted((rng.randint(-2, 2) for _ in range(r)), reverse=True)
        glue = [random_invertible(F5, r, rng)]
        v = descend(CUBIC, up, glue)
        assert pullback(v) == (tuple(up), tuple(glue))


def test_descend_reorders_with_gluing():
    g = Matrix(F5, [[1, 2], [0, 1]])
    v = descend(CUBIC, [-1, 1], [g])
    assert v.upstairs == (1, -1)
    assert v.gluings[0].tolist() == [[1, 0], [2, 1]]


def test_singular_gluing_rejected():
    with pytest.raises(NonInvertibleGluing):
        descend(CUBIC, [0, 0], [[[1, 0], [0, 0]]])
    with pytest.raises(RankMismatch):
        descend(CUBIC, [0, 0], [[[1]]])
    with pytest.raises(NonInvertibleGluing):
        LineBundleClass(0, (0,))


def test_global_sections_values():
    assert global_sections(trivial_bundle(CUBIC, [0])).dim == 1
    assert global_sections(line_bundle(CUBIC, 0, [2])).dim == 0
    for lam in range(1, 5):
        assert global_sections(line_bundle(CUBIC, 1, [lam])).dim == 1
    assert global_sections(trivial_bundle(CUBIC, [-1])).dim == 0


def test_line_bundle_iso():
    assert line_bundle_iso(CUBIC, LineBundleClass(0, (1,)), trivial_bundle(CUBIC, [0]))
    assert not line_bundle_iso(CUBIC, LineBundleClass(0, (2,)), LineBundleClass(0, (3,)))
    assert not line_bundle_iso(CUBIC, LineBundleClass(2, (2,)), LineBundleClass(3, (2,)))


def test_degree_one_is_a_torsor():
    assert len(pic_classes(CUBIC, 1)) == 4 == pic_bruteforce(CUBIC, 1)


@pytest.mark.parametrize("q,expected", [(2, 1), (3, 2), (5, 4), (7, 6)])
def test_pic_nodal_cubic(q, expected):
    C = NodalCurve.nodal_cubic(Field(q))
    assert len(pic_classes(C, 0)) == expected == pic_bruteforce(C, 0)


@pytest.mark.parametrize("q", [3, 5])
def test_pic_two_nodes(q):
    C = NodalCurve.two_nodes(Field(q))
    assert len(pic_classes(C, 0)) == (q - 1) ** 2 == pic_bruteforce(C, 0)


def test_two_nodes_needs_four_points():
    with pytest.raises(ValueError):
        NodalCurve.two_nodes(Field(2))


def test_repeated_point_rejected():
    with pytest.raises(ValueError):
        NodalCurve(F5, (((1, 0), (0, 1)), ((1, 0), (1, 1))))
