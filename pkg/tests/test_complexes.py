import pytest

from exactcat.categories import SplitExact
from exactcat.complexes import (ChainMap, Complex, NotSplitAcyclic, cone, direct_sum, find_homotopy,
                                is_acyclic, is_contractible, split_contractible, support_truncate)
from exactcat.oracles import acyclic_oracle
from exactcat.sampling import random_acyclic_complex, random_chain_map, random_complex, random_null_homotopic

X, Y = [1, 0], [0, 1]


def short_exact(fv, lo=0):
    k, k2 = fv.space(1), fv.space(2)
    a = fv.matrix(k, k2, [[1], [1]])
    b = fv.matrix(k2, k, [[1, -1]])
    return Complex(fv, lo, [k, k2, k], [a, b])


def identity_piece(B, x, lo=0):
    return Complex(B, lo, [x, x], [B.identity(x)])


def euler(p1):
    a = p1.matrix(p1.bundle(-1), p1.bundle(0, 0), [[X], [Y]])
    b = p1.matrix(p1.bundle(0, 0), p1.bundle(1), [[[0, -1], [1, 0]]])
    return Complex(p1, -2, [a.source, a.target, b.target], [a, b])


def test_dd_checked(fv):
    k = fv.space(1)
    one = fv.identity(k)
    with pytest.raises(ValueError):
        Complex(fv, 0, [k, k, k], [one, one])


def test_is_acyclic_short_exact(fv):
    w = is_acyclic(short_exact(fv))
    assert w and w.verify()
    assert w.K[0].is_zero and w.K[1] == fv.space(1)


def test_is_acyclic_euler(p1):
    c = euler(p1)
    w = is_acyclic(c)
    assert w and w.verify()
    assert acyclic_oracle(c)


def test_is_acyclic_torsion(p1):
    c = Complex.from_maps(0, [p1.matrix(p1.bundle(0), p1.bundle(1), [[X]])])
    ob = is_acyclic(c)
    assert not ob
    assert ob.kind == "not-admissible"
    assert not acyclic_oracle(c)


def test_not_exact(fv):
    c = Complex.single(fv.space(1))
    ob = is_acyclic(c)
    assert not ob and ob.kind == "not-exact"


def test_cone_of_identity_contractible(p1, rng):
    for _ in range(10):
        c = random_complex(p1, rng)
        C = cone(c.identity()).complex
        h = is_contractible(C)
        assert h is not None and h.is_valid()


def test_cone_of_zero(fv, rng):
    A = random_complex(fv, rng, 3)
    Bc = random_complex(fv, rng, 2, lo=1)
    C = cone(A.zero_map(Bc)).complex
    for i in range(C.lo, C.hi + 1):
        assert C[i].size == Bc[i].size + A[i + 1].size


def test_cone_koszul(p1):
    g = p1.matrix(p1.bundle(-1), p1.bundle(0, 0), [[X], [Y]])
    f = ChainMap(Complex.single(g.source), Complex.single(g.target), {0: g})
    C = cone(f).complex
    assert not is_acyclic(C)
    assert C.support() == (-1, 0)


def test_find_homotopy_examples(fv):
    k = fv.space(1)
    P = identity_piece(fv, k)
    h = find_homotopy(P.identity(), P.identity())
    assert h is not None and not h.maps
    h = find_homotopy(P.identity(), P.zero_map(P))
    assert h is not None and h.is_valid() and h[1].data.tolist() == [[1]]
    S = Complex.single(k)
    assert find_homotopy(S.identity(), S.zero_map(S)) is None


def test_random_null_homotopic_found(nodal, rng):
    for _ in range(20):
        A = random_complex(nodal, rng, 3, max_rank=2)
        Bc = random_complex(nodal, rng, 3, max_rank=2)
        f = random_null_homotopic(A, Bc, rng)
        h = find_homotopy(f, A.zero_map(Bc))
        assert h is not None and h.is_valid()


def test_chain_map_laws(fv, rng):
    A, Bc = random_complex(fv, rng, 3), random_complex(fv, rng, 3)
    f = random_chain_map(A, Bc, rng)
    assert not f.commutation_defect()
    assert f @ A.identity() == f == Bc.identity() @ f


def test_split_contractible_examples(fv):
    S = SplitExact(fv.field, fv)
    k = S.wrap(fv.space(1))
    dec = split_contractible(identity_piece(S, k))
    assert dec.pieces == [k]
    c = S.wrap(short_exact(fv))
    dec = split_contractible(c)
    assert dec.pieces == [k, k]
    assert dec.contraction.is_valid()
    for i in c.degrees:
        assert dec.retract[i] @ dec.alpha[i] == S.identity(dec.K[i]) or dec.K[i].is_zero
    assert split_contractible(Complex.zero(S)).pieces == []


def test_split_contractible_rejects_koszul(p1):
    S = SplitExact(p1.field, p1)
    with pytest.raises(NotSplitAcyclic):
        split_contractible(S.wrap(euler(p1)))


def test_support_truncate(fv):
    c = Complex.from_maps(0, [fv.matrix(fv.space(2), fv.space(1), [[0, 1]])])
    t = support_truncate(c, 0, 0)
    assert t.result.support() == (0, 0) and t.result[0] == fv.space(1)
    assert t.to_original.target == c
    d = short_exact(fv)
    assert support_truncate(d, -1, 3).result == d
    assert support_truncate(Complex.zero(fv), 2, 4).result.is_zero()


def test_direct_sum_and_acyclic_samples(nodal, rng):
    for _ in range(20):
        a = random_acyclic_complex(nodal, rng, max_rank=3)
        b = random_acyclic_complex(nodal, rng, max_rank=3)
        s = direct_sum(a, b)[0]
        assert is_acyclic(a) and is_acyclic(s)
