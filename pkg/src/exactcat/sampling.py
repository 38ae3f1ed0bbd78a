"""Seeded random generators for objects, maps and complexes.

Every function takes a :class:`random.Random`; nothing touches global
entropy, so a seed fixes the whole stream.
"""

from __future__ import annotations

import random
from typing import Optional

from .bundles import NodalBundle, fiber_matrix
from .categories import DualMod, FinVect, SplitExact, VectNodal, VectP1
from .categories.base import Backend, Equation, Morphism, Obj
from .complexes import ChainMap, Complex, direct_sum
from .linalg import Matrix


def random_matrix(F, rows, cols, rng: random.Random) -> Matrix:
    return Matrix.raw(F, [[F.random(rng) for _ in range(cols)] for _ in range(rows)], rows, cols)


def random_invertible(F, n, rng: random.Random) -> Matrix:
    while True:
        m = random_matrix(F, n, n, rng)
        if m.is_invertible():
            return m


def random_object(B: Backend, rng: random.Random, max_rank: int = 3, min_rank: int = 0,
                  twists=(-2, 2)) -> Obj:
    if isinstance(B, SplitExact):
        return B.wrap(random_object(B.base, rng, max_rank, min_rank, twists))
    r = rng.randint(min_rank, max_rank)
    if isinstance(B, FinVect):
        return B.space(r)
    if isinstance(B, DualMod):
        a = rng.randint(0, r // 2)
        return B.module(a, r - 2 * a)
    if isinstance(B, VectP1):
        return B.bundle([rng.randint(*twists) for _ in range(r)])
    if isinstance(B, VectNodal):
        up = sorted((rng.randint(*twists) for _ in range(r)), reverse=True)
        glue = tuple(random_invertible(B.field, r, rng) for _ in B.curve.nodes)
        return B.obj(NodalBundle(B.curve, tuple(up), glue))
    raise TypeError(f"no sampler for {B.name}")


def random_morphism(x: Obj, y: Obj, rng: random.Random, density: float = 1.0) -> Morphism:
    B = x.backend
    basis = B.hom_basis(x, y)
    F = B.field
    coeffs = [F.random(rng) if rng.random() < density else F.zero for _ in basis]
    return B.combine(basis, coeffs, x, y)


def random_automorphism(x: Obj, rng: random.Random, tries: int = 8) -> Morphism:
    B = x.backend
    for _ in range(tries):
        g = random_morphism(x, x, rng)
        if B.classify(g).is_iso:
            return g
    return B.identity(x)


def random_admissible_mono(K: Obj, rng: random.Random, max_rank: int = 4, tries: int = 12,
                           twists=(-2, 2)):
    """``(alpha, E)`` with ``alpha : K -> E`` an admissible mono."""
    B = K.backend
    r = K.size
    if isinstance(B, VectNodal) and rng.random() < 0.5:
        return _nodal_extension(K, rng, max_rank, twists)
    for _ in range(tries):
        E = random_object(B, rng, max_rank, min_rank=min(r, max_rank), twists=twists)
        if isinstance(B, DualMod) and B.dim(E.key) < B.dim(K.key):
            continue
        a = random_morphism(K, E, rng)
        try:
            if B.classify(a).is_admissible_mono:
                return a, E
        except Exception:  # noqa: BLE001 - a failed draw is simply retried
            continue
    C = random_object(B, rng, max(0, max_rank - r), twists=twists)
    E, (i1, _), _ = B.direct_sum([K, C])
    return i1, E


def _nodal_extension(K: Obj, rng, max_rank, twists):
    """A (usually non-split) extension of a random bundle by ``K``, glued block-triangularly."""
    B = K.backend
    F = B.field
    C = random_object(B, rng, max(0, max_rank - K.size), twists=twists)
    S, (i1, i2), (p1, p2) = B.direct_sum([K, C])
    n = S.size
    pt = (F.one, F.zero)
    I1 = fiber_matrix(F, i1.data, n, K.size, pt)
    P2 = fiber_matrix(F, p2.data, C.size, n, pt)
    glue = []
    for g in S.key.gluings:
        X = random_matrix(F, K.size, C.size, rng)
        glue.append(g + I1 @ X @ P2)
    E = B.obj(NodalBundle(B.curve, S.key.upstairs, tuple(glue)))
    return Morphism(K, E, i1.data), E


def random_acyclic_complex(B: Backend, rng: random.Random, length: Optional[int] = None,
                           max_rank: int = 4, lo: Optional[int] = None, twists=(-2, 2)) -> Complex:
    """Splice random admissible short exact sequences."""
    if length is None:
        length = rng.randint(1, 6)
    if lo is None:
        lo = rng.randint(-4, 1)
    K = B.zero_object()
    objs, diffs = [], []
    alpha_prev = None
    for i in range(length):
        if i == length - 1:
            E = K
            alpha = random_automorphism(K, rng) if not K.is_zero else B.identity(K)
        else:
            if K.is_zero:
                E = random_object(B, rng, max_rank, min_rank=1, twists=twists)
                alpha = B.zero(K, E)
            else:
                alpha, E = random_admissible_mono(K, rng, max_rank, twists=twists)
        if alpha_prev is not None:
            diffs.append(alpha @ alpha_prev)
        objs.append(E)
        if i < length - 1:
            beta = B.cokernel(alpha) if not K.is_zero else B.identity(E)
            alpha_prev, K = beta, beta.target
    c = Complex(B, lo, objs, diffs)
    return c


def random_complex(B: Backend, rng: random.Random, length: Optional[int] = None, max_rank: int = 3,
                   lo: int = 0, twists=(-2, 2)) -> Complex:
    """Random objects with random differentials satisfying ``d d = 0``."""
    if length is None:
        length = rng.randint(1, 4)
    objs = [random_object(B, rng, max_rank, twists=twists) for _ in range(length)]
    diffs = []
    for i in range(length - 1):
        x, y = objs[i], objs[i + 1]
        if not diffs:
            diffs.append(random_morphism(x, y, rng))
            continue
        prev = diffs[-1]
        sol = B.solve([(x, y)], [Equation(prev.source, y, [(0, None, prev)], None)], nullspace=True)
        _, null = sol
        F = B.field
        d = B.zero(x, y)
        for m in null:
            d = d + m[0].scale(F.random(rng))
        diffs.append(d)
    return Complex(B, lo, objs, diffs)


def random_chain_map(X: Complex, Y: Complex, rng: random.Random) -> ChainMap:
    B = X.backend
    degs = [i for i in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 1)
            if not X[i].is_zero and not Y[i].is_zero]
    if not degs:
        return X.zero_map(Y)
    idx = {i: k for k, i in enumerate(degs)}
    unknowns = [(X[i], Y[i]) for i in degs]
    eqs = []
    for i in range(min(degs) - 1, max(degs) + 1):
        # d_Y f^i - f^{i+1} d_X = 0 in Hom(X^i, Y^{i+1})
        if X[i].is_zero or Y[i + 1].is_zero:
            continue
        terms = []
        if i in idx:
            terms.append((idx[i], Y.d(i), None))
        if i + 1 in idx:
            terms.append((idx[i + 1], None, X.d(i).scale(-1)))
        if terms:
            eqs.append(Equation(X[i], Y[i + 1], terms, None))
    _, null = B.solve(unknowns, eqs, nullspace=True)
    F = B.field
    comps = {i: B.zero(X[i], Y[i]) for i in degs}
    for sol in null:
        c = F.random(rng)
        if c:
            for i, m in zip(degs, sol):
                comps[i] = comps[i] + m.scale(c)
    return ChainMap(X, Y, comps)


def random_null_homotopic(X: Complex, Y: Complex, rng: random.Random) -> ChainMap:
    """``d h + h d`` for a random ``h``."""
    B = X.backend
    comps = {}
    h = {i: random_morphism(X[i], Y[i - 1], rng) for i in range(X.lo, X.hi + 2)}
    for i in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 1):
        m = Y.d(i - 1) @ h.get(i, B.zero(X[i], Y[i - 1])) + h.get(i + 1, B.zero(X[i + 1], Y[i])) @ X.d(i)
        comps[i] = m
    return ChainMap(X, Y, comps)


def random_homotopy_idempotent(B: Backend, rng: random.Random, max_rank: int = 3, length: int = 4,
                               twists=(-1, 1)):
    """``(X, e)`` with ``e`` a projection onto a summand plus a null-homotopic map."""
    A = random_complex(B, rng, rng.randint(1, length), max_rank, lo=0, twists=twists)
    C = random_acyclic_complex(B, rng, rng.randint(1, length), max_rank, lo=0, twists=twists) \
        if rng.random() < 0.5 else random_complex(B, rng, rng.randint(1, length), max_rank, lo=0, twists=twists)
    X, ia, ic, pa, pc = direct_sum(A, C)
    e = ia @ pa
    if rng.random() < 0.5:
        e = ic @ pc
    e = e + random_null_homotopic(X, X, rng)
    return X, e


def random_split_acyclic(B: SplitExact, rng: random.Random, length: Optional[int] = None,
                         max_rank: int = 2) -> Complex:
    """``E^i = K^i + K^{i+1}`` twisted by random automorphisms."""
    if length is None:
        length = rng.randint(1, 5)
    Ks = [B.zero_object()] + [random_object(B, rng, max_rank, min_rank=1) for _ in range(length - 1)] \
        + [B.zero_object()]
    objs, ins, prs = [], [], []
    for i in range(length):
        S, inj, proj = B.direct_sum([Ks[i], Ks[i + 1]])
        g = random_automorphism(S, rng)
        ginv = B.inverse(g)
        objs.append(S)
        ins.append((g @ inj[0], g @ inj[1]))
        prs.append((proj[0] @ ginv, proj[1] @ ginv))
    diffs = [ins[i + 1][0] @ prs[i][1] for i in range(length - 1)]
    return Complex(B, rng.randint(-2, 1), objs, diffs)
