import pytest

from exactcat.bundles import NodalBundle, trivial_bundle
from exactcat.complexes import ChainMap, Complex, direct_sum, find_homotopy, is_contractible
from exactcat.fitting import (NotHomotopyIdempotent, fitting_decompose, fitting_decompose_complex, power,
                              split_homotopy_idempotent, stabilization_index)
from exactcat.linalg import Matrix
from exactcat.oracles import fitting_uniqueness, random_fitting_endo
from exactcat.sampling import random_complex, random_homotopy_idempotent, random_null_homotopic


def test_identity(fv, p1):
    for x in (fv.space(3), p1.bundle(2, -1)):
        d = fitting_decompose(x.identity())
        assert d.Vpp.is_zero and d.Vp == x and d.check()


def test_unipotent_plus_nilpotent(fv):
    f = fv.matrix(fv.space(3), fv.space(3), [[1, 1, 0], [0, 1, 0], [0, 0, 0]])
    d = fitting_decompose(f)
    assert d.check()
    assert d.n == 1 == stabilization_index(f)
    assert d.ip.data.tolist() == [[1, 0], [0, 1], [0, 0]]
    assert d.ipp.data.tolist() == [[0], [0], [1]]
    assert d.fp.data.tolist() == [[1, 1], [0, 1]]


def test_nodal_constant_idempotent(nodal):
    O2 = nodal.bundle(trivial_bundle(nodal.curve, [0, 0]))
    f = nodal.matrix(O2, O2, [[[1], [1]], [[0], [0]]])
    d = fitting_decompose(f)
    assert d.check()
    assert d.Vp.size == 1 and d.Vpp.size == 1
    assert d.Vp.key.gluings[0] == Matrix.identity(nodal.field, 1)
    # V' is spanned by (1, 0) and V'' by (1, -1), read off at a point
    assert d.ip.data[0][0] == (1,) and d.ip.data[1][0] == (0,)
    c = d.ipp.data
    assert nodal.field.add(c[0][0][0], c[1][0][0]) == 0


def test_nilpotent_power(p1):
    x = p1.bundle(1, 0)
    f = p1.matrix(x, x, [[[], [1, 2]], [[], []]])
    assert not f.is_zero() and power(f, 2).is_zero()
    d = fitting_decompose(f)
    assert d.Vp.is_zero and d.n == 2 and d.check()


def test_uniqueness_random(rng, fv, p1, nodal):
    for B in (fv, p1, nodal):
        for _ in range(30):
            d = fitting_decompose(random_fitting_endo(B, rng))
            assert d.check()
            assert fitting_uniqueness(d) is None


def test_complex_identity(fv, rng):
    X = random_complex(fv, rng, 3)
    cf = fitting_decompose_complex(X.identity())
    assert cf.X2.is_zero() and cf.X1 == X


def test_complex_mixed(F7):
    from exactcat.categories import FinVect
    fv = FinVect(F7)
    k = fv.space(1)
    P = Complex(fv, 0, [k, k], [fv.identity(k)])
    S = Complex.single(k)
    X, ia, ib, pa, pb = direct_sum(P, S)
    f = ia @ P.identity().scale(2) @ pa
    cf = fitting_decompose_complex(f)
    assert cf.X1.total_size() == 2 and is_contractible(cf.X1) is not None
    assert cf.X2.total_size() == 1 and cf.X2.support() == (0, 0)


def test_null_homotopic_gives_contractible(nodal, rng):
    for _ in range(100):
        X = random_complex(nodal, rng, rng.randint(1, 3), max_rank=2, twists=(-1, 1))
        f = random_null_homotopic(X, X, rng)
        cf = fitting_decompose_complex(f)
        assert is_contractible(cf.X1) is not None


def test_strict_idempotent(fv):
    X = Complex.single(fv.space(2))
    e = ChainMap(X, X, {0: fv.matrix(fv.space(2), fv.space(2), [[1, 0], [0, 0]])})
    s = split_homotopy_idempotent(e)
    assert s.validate()
    assert s.object[0] == fv.space(1)


def test_contractible_idempotent(fv):
    k = fv.space(1)
    X = Complex(fv, 0, [k, k], [fv.identity(k)])
    e = X.identity().scale(2)
    s = split_homotopy_idempotent(e)
    assert s.validate()
    assert is_contractible(s.object) is not None


def test_mixed_idempotent(fv):
    k = fv.space(1)
    P = Complex(fv, 0, [k, k], [fv.identity(k)])
    X, ia, _, pa, _ = direct_sum(P, Complex.single(k))
    s = split_homotopy_idempotent(ia @ P.identity().scale(2) @ pa)
    assert s.validate()
    assert is_contractible(s.object) is not None


def test_not_idempotent(fv):
    X = Complex.single(fv.space(1))
    with pytest.raises(NotHomotopyIdempotent):
        split_homotopy_idempotent(X.identity().scale(3))


def test_random_idempotents(nodal, rng):
    for _ in range(10):
        X, e = random_homotopy_idempotent(nodal, rng)
        s = split_homotopy_idempotent(e)
        assert s.validate()
        assert find_homotopy(s.p @ s.i, s.object.identity()) is not None
        assert find_homotopy(s.i @ s.p, e) is not None


def test_rank_one_gluing_survives(nodal):
    v = NodalBundle(nodal.curve, (1, 0), (Matrix(nodal.field, [[1, 0], [3, 2]]),))
    x = nodal.bundle(v)
    d = fitting_decompose(x.identity().scale(3))
    assert d.Vp == x and d.check()
