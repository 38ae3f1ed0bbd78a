import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exactcat.linalg import KERNEL, QQ, Field, IncrementalSpan, Matrix, kernel_image, solve_affine
from exactcat.linalg import _kernels_py
from exactcat.oracles import rank_mod_p

F7 = Field(7)


def test_identity_kernel_image():
    K, I, r = kernel_image(Matrix.identity(F7, 2))
    assert (K.cols, I.cols, r) == (0, 2, 2)


def test_zero_kernel_image():
    K, I, r = kernel_image(Matrix.zeros(F7, 3, 2))
    assert (K.cols, I.cols, r) == (2, 0, 0)


def test_hand_reduced_example():
    m = Matrix(F7, [[1, 1, 0], [0, 1, 0], [0, 0, 0]])
    K, I, r = kernel_image(m)
    assert r == 2
    assert K.tolist() == [[0], [0], [1]]
    assert I.tolist() == [[1, 0], [0, 1], [0, 0]]


def test_solve_affine_identity():
    b = Matrix.column(F7, [3, 5, 1])
    x, null = solve_affine(Matrix.identity(F7, 3), b)
    assert x == b and null.cols == 0


def test_solve_affine_zero():
    x, null = solve_affine(Matrix.zeros(F7, 2, 3), Matrix.column(F7, [0, 0]))
    assert x.is_zero() and null.cols == 3


def test_solve_affine_inconsistent():
    assert solve_affine(Matrix(F7, [[1, 1], [0, 0]]), Matrix.column(F7, [0, 1])) is None


def test_solve_affine_shape_error():
    with pytest.raises(ValueError):
        solve_affine(Matrix.identity(F7, 2), Matrix.column(F7, [1, 2, 3]))


def test_rationals_exact():
    m = Matrix(QQ, [[Fraction(1, 3), 2], [1, 6]])
    assert m.rank() == 1
    K = m.kernel()
    assert (m @ K).is_zero()
    inv = Matrix(QQ, [[2, 1], [1, 1]]).inverse()
    assert inv.tolist() == [[1, -1], [-1, 2]]


def test_bad_modulus():
    with pytest.raises(ValueError):
        Field(8)


def test_incremental_span():
    s = IncrementalSpan(F7, 3)
    assert s.add([1, 2, 0])
    assert s.add([0, 1, 1])
    assert not s.add([1, 3, 1])
    assert s.contains([2, 6, 2])
    assert len(s) == 2


def _random(rng, r, c, p=7):
    return Matrix(Field(p), [[rng.randrange(p) for _ in range(c)] for _ in range(r)], r, c)


def test_kernel_image_properties():
    rng = random.Random(3)
    for _ in range(500):
        m = _random(rng, rng.randint(0, 8), rng.randint(0, 8))
        K, I, r = kernel_image(m)
        assert (m @ K).is_zero()
        assert r + K.cols == m.cols
        assert I.cols == r == rank_mod_p(m.tolist(), 7)
        if r:
            assert Matrix.hstack(F7, [m, I], m.rows).rank() == r
        # kernel basis columns are independent
        assert kernel_image(K.T)[2] == K.cols


def test_solve_affine_properties():
    rng = random.Random(4)
    for _ in range(300):
        A = _random(rng, rng.randint(1, 6), rng.randint(1, 6))
        b = _random(rng, A.rows, 1)
        sol = solve_affine(A, b)
        if sol is None:
            assert Matrix.hstack(F7, [A, b]).rank() == A.rank() + 1
        else:
            x, null = sol
            assert A @ x == b
            assert (A @ null).is_zero() and null.cols == A.cols - A.rank()


rows_st = st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 10 ** 6), min_size=c, max_size=c), min_size=1, max_size=9))


@settings(max_examples=200, deadline=None)
@given(rows=rows_st, p=st.sampled_from([2, 3, 5, 7, 65521, 2147483647]))
def test_compiled_kernel_matches_python(rows, p):
    rows = [[x % p for x in r] for r in rows]
    expected = _kernels_py.rref_modp(rows, p)
    if KERNEL != "cython":
        pytest.skip("compiled kernels not built")
    from exactcat.linalg import _kernels
    assert _kernels.rref_modp([list(r) for r in rows], p) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 6), st.randoms(use_true_random=False))
def test_compiled_matmul_matches_python(n, k, m, r):
    p = 7
    left = [[r.randrange(p) for _ in range(k)] for _ in range(n)]
    right = [[r.randrange(p) for _ in range(m)] for _ in range(k)]
    expected = _kernels_py.matmul_modp(left, right, k, m, p)
    if KERNEL != "cython":
        pytest.skip("compiled kernels not built")
    from exactcat.linalg import _kernels
    assert _kernels.matmul_modp(left, right, k, m, p) == expected
