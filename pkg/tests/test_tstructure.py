import pytest

from exactcat.categories import DualMod, FinVect
from exactcat.complexes import ChainMap, Complex, NotAcyclic, cone, find_homotopy, is_acyclic, is_contractible
from exactcat.linalg import Field
from exactcat.oracles import dualmod_periodic
from exactcat.sampling import random_acyclic_complex, random_chain_map
from exactcat.tstructure import (HeartObject, MembershipViolation, construct_heart_cover, ext_dim, h0,
                                 heart_ker_coker, hom_vanishing_witness, in_ge, in_le, truncate)


def short_exact(fv, lo=-2):
    k, k2 = fv.space(1), fv.space(2)
    return Complex(fv, lo, [k, k2, k], [fv.matrix(k, k2, [[1], [1]]), fv.matrix(k2, k, [[1, -1]])])


def four_term(fv, lo=-3):
    k, k2 = fv.space(1), fv.space(2)
    a = fv.matrix(k, k2, [[1], [0]])
    b = fv.matrix(k2, k2, [[0, 1], [0, 0]])
    c = fv.matrix(k2, k, [[0, 1]])
    return Complex(fv, lo, [k, k2, k2, k], [a, b, c])


def is_equivalence(u):
    return is_contractible(cone(u).complex) is not None


def euler(p1):
    X, Y = [1, 0], [0, 1]
    a = p1.matrix(p1.bundle(-1), p1.bundle(0, 0), [[X], [Y]])
    b = p1.matrix(p1.bundle(0, 0), p1.bundle(1), [[[0, -1], [1, 0]]])
    return Complex(p1, -2, [a.source, a.target, b.target], [a, b])


def test_membership():
    fv = FinVect(Field(7))
    t = short_exact(fv)
    assert in_le(t, 0) and not in_le(t, -1)
    assert in_ge(t, 0) and not in_ge(t, 1)


def test_truncate_heart_object(fv):
    t = short_exact(fv)
    tri = truncate(t, 0)
    assert tri.certified()
    assert is_equivalence(tri.u)
    assert is_contractible(tri.B) is not None


def test_truncate_shifted(fv):
    t = short_exact(fv, lo=-1)
    tri = truncate(t, 0)
    assert tri.certified()
    assert is_contractible(tri.A) is not None
    assert is_equivalence(tri.v)
    assert in_le(tri.A, 0) and in_ge(tri.B, 1)


def test_truncate_zero(fv):
    tri = truncate(Complex.zero(fv), 0)
    assert tri.A.is_zero() and tri.B.is_zero()


def test_truncate_far_windows(nodal, rng):
    t = random_acyclic_complex(nodal, rng, length=3, lo=0)
    for n in (-5, 8):
        tri = truncate(t, n)
        assert tri.certified() and in_le(tri.A, n) and in_ge(tri.B, n + 1)


def test_truncate_rejects_non_acyclic(fv):
    with pytest.raises(NotAcyclic):
        truncate(Complex.single(fv.space(1)), 0)


def test_hom_vanishing_random(fv, rng):
    nonzero = 0
    for _ in range(100):
        la, lb = rng.randint(2, 4), rng.randint(2, 4)
        a = random_acyclic_complex(fv, rng, length=la, max_rank=3, lo=1 - la)
        b = random_acyclic_complex(fv, rng, length=lb, max_rank=3, lo=-1)
        f = random_chain_map(a, b, rng)
        nonzero += not f.is_zero()
        h = hom_vanishing_witness(f)
        assert h.is_valid() and h.g.is_zero()
        assert find_homotopy(f, a.zero_map(b)) is not None
    assert nonzero > 10


def test_hom_vanishing_zero(fv):
    a, b = short_exact(fv), short_exact(fv, lo=-1)
    h = hom_vanishing_witness(a.zero_map(b))
    assert not h.maps


def test_hom_vanishing_contractible_source(fv):
    k = fv.space(1)
    a = Complex(fv, -1, [k, k], [fv.identity(k)])
    b = short_exact(fv, lo=-1)
    f = ChainMap(a, b, {-1: fv.identity(k), 0: fv.matrix(k, fv.space(2), [[1], [1]])})
    h = hom_vanishing_witness(f)
    contraction = is_contractible(a)
    alt = contraction.compose_left(f)
    assert h.is_valid() and alt.is_valid()


def test_hom_vanishing_membership(fv):
    t = short_exact(fv, lo=0)
    with pytest.raises(MembershipViolation):
        hom_vanishing_witness(t.zero_map(t))


def test_split_sequences_are_zero_in_heart(fv):
    # over a semisimple category every acyclic complex is contractible
    assert HeartObject(short_exact(fv)).is_zero_in_heart()


def test_h0_of_heart_object(p1):
    t = euler(p1)
    H = h0(t)
    assert not H.is_zero_in_heart()
    assert H.complex == t


def test_h0_kills_negative_part(fv):
    assert h0(short_exact(fv, lo=-3)).is_zero_in_heart()


def test_h0_four_term(fv):
    t = four_term(fv)
    H = h0(t)
    twice = truncate(truncate(t, 0).A, -1).B
    assert H.complex == twice.extend(-2, 0).restrict(-2, 0)
    assert H.is_zero_in_heart()


def test_heart_object_checks(fv):
    with pytest.raises(MembershipViolation):
        HeartObject(short_exact(fv, lo=-1))


def test_heart_ker_coker(fv, p1):
    t = euler(p1)
    kc = heart_ker_coker(t.identity())
    assert kc.kernel.is_zero_in_heart() and kc.cokernel.is_zero_in_heart()
    kc = heart_ker_coker(t.zero_map(t))
    assert not kc.kernel.is_zero_in_heart() and not kc.cokernel.is_zero_in_heart()
    assert is_equivalence(kc.kernel_map) and is_equivalence(kc.cokernel_map)
    t = short_exact(fv)
    kc = heart_ker_coker(t.identity().scale(2))
    assert kc.kernel.is_zero_in_heart() and kc.cokernel.is_zero_in_heart()
    assert is_contractible(cone(t.identity().scale(2)).complex) is not None


def test_ext_dims(fv, p1, nodal):
    from exactcat.bundles import trivial_bundle
    k = fv.space(1)
    assert ext_dim(k, k, 2) == 0 and ext_dim(k, k, 0) == 1
    D = DualMod(Field(2))
    kk = D.module(0, 1)
    assert ext_dim(kk, kk, 1) == 1 and ext_dim(kk, kk, 2) == 1
    assert ext_dim(D.module(1, 0), kk, 2) == 0
    O = nodal.bundle(trivial_bundle(nodal.curve, [0]))
    assert ext_dim(O, O, 1) == 1
    assert ext_dim(O, O, 2) == 0
    assert ext_dim(p1.bundle(0), p1.bundle(-2), 1) == 1


def test_heart_cover_heart_object(fv):
    t = short_exact(fv)
    cov = construct_heart_cover(t)
    assert cov and cov.b.is_zero() or is_contractible(cov.b) is not None
    assert is_equivalence(cov.phi)


def test_heart_cover_four_term(fv):
    cov = construct_heart_cover(four_term(fv))
    assert cov
    assert cov.contraction.is_valid()
    assert in_le(cov.b, -1)


def test_heart_cover_random_hereditary(p1, nodal, rng):
    for B in (p1, nodal):
        for _ in range(10):
            length = rng.randint(1, 5)
            t = random_acyclic_complex(B, rng, length=length, max_rank=3, lo=1 - length)
            cov = construct_heart_cover(t)
            assert cov, cov.reason


def test_no_cover_dualmod():
    t = dualmod_periodic()
    assert is_acyclic(t)
    res = construct_heart_cover(t)
    assert not res
    assert res.augmented_rank > res.rank
