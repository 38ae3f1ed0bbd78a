import random

import pytest

from exactcat import oracles
from exactcat.bundles import NodalCurve, line_bundle, trivial_bundle
from exactcat.categories import FinVect, VectNodal, VectP1
from exactcat.complexes import Complex, is_acyclic
from exactcat.linalg import Field, Matrix
from exactcat.oracles import (SUITES, SuiteReport, _guard, acyclic_oracle, chi_ext1, enumerate_f2_complexes,
                              form_determinant, p1_graded_exact, pic_bruteforce, rank_mod_p, run_suite)

X, Y = [1, 0], [0, 1]


def test_rank_oracle_matches_matrix():
    rng = random.Random(5)
    for _ in range(200):
        r, c = rng.randint(0, 6), rng.randint(0, 6)
        rows = [[rng.randrange(5) for _ in range(c)] for _ in range(r)]
        assert rank_mod_p(rows, 5) == (Matrix(Field(5), rows, r, c).rank() if r and c else 0)


def test_f2_enumeration_size():
    cs = list(enumerate_f2_complexes(6))
    assert len(cs) == 2710
    assert all(c.total_size() <= 6 for c in cs)


def test_f2_enumeration_small_counts():
    # total dimension <= 2: k, k^2, and k -> k with d = 0 or 1
    assert len(list(enumerate_f2_complexes(2))) == 4


def test_graded_oracle(p1):
    a = p1.matrix(p1.bundle(-1), p1.bundle(0, 0), [[X], [Y]])
    b = p1.matrix(p1.bundle(0, 0), p1.bundle(1), [[[0, -1], [1, 0]]])
    assert p1_graded_exact(Complex.from_maps(-2, [a, b]))
    t = Complex.from_maps(0, [p1.matrix(p1.bundle(0), p1.bundle(1), [[X]])])
    assert not acyclic_oracle(t)


def test_oracle_sees_inexact(fv):
    assert not acyclic_oracle(Complex.single(fv.space(2)))
    assert acyclic_oracle(Complex.zero(fv))


def test_chi_ext1_values(p1):
    assert chi_ext1(p1.bundle(0), p1.bundle(-2)) == 1
    assert chi_ext1(p1.bundle(-2), p1.bundle(0)) == 0
    N = VectNodal(Field(5))
    O = N.bundle(trivial_bundle(N.curve, [0]))
    assert chi_ext1(O, O) == 1
    L = N.bundle(line_bundle(N.curve, 0, [2]))
    assert chi_ext1(O, L) == 0


def test_pic_bruteforce_values():
    assert pic_bruteforce(NodalCurve.nodal_cubic(Field(3)), 0) == 2
    assert pic_bruteforce(NodalCurve.two_nodes(Field(3)), 0) == 4


def test_form_determinant():
    F = Field(7)
    # [[x, y], [0, x]] -> x^2 at y = 1 is t^2
    det = form_determinant(F, [[(1, 0), (0, 1)], [(), (1, 0)]], 2)
    assert det == [0, 0, 1]


def test_dualmod_periodic_is_acyclic():
    assert is_acyclic(oracles.dualmod_periodic())


def test_guard_records_exceptions():
    rep = SuiteReport("demo", 0)

    def boom():
        raise RuntimeError("bad")
    _guard(rep, "k0", lambda: ({"x": 1}, 3), boom)
    _guard(rep, "k1", lambda: ({"x": 2}, 1), lambda: "wrong")
    _guard(rep, "k2", lambda: ({"x": 3}, 0), lambda: None)
    assert rep.cases == 3 and not rep.passed
    out = rep.to_json()
    assert out["failures"] == 2
    assert out["counterexample"]["case"] == "k1"  # the smallest instance wins
    assert "RuntimeError" in rep.failures[0]["reason"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", 0)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_small(name):
    rep = run_suite(name, 3, cases=4)
    assert rep.passed, rep.to_json()


def test_suite_determinism():
    a = run_suite("fitting-uniqueness", 9, cases=10).to_json()
    b = run_suite("fitting-uniqueness", 9, cases=10).to_json()
    assert a == b


def test_finvect_hereditary_backends():
    names = [B.name for B in oracles.hereditary_backends()]
    assert names == [FinVect.name, VectP1.name, VectNodal.name]
