"""Fitting decompositions and splitting of homotopy idempotents.

An endomorphism ``f`` of a bundle (or vector space) splits the object as
``V' + V''`` with ``V' = Im f^n`` on which ``f`` is invertible and
``V'' = Ker f^n`` on which it is nilpotent, ``n`` being the point where
the kernels of the powers stop growing.  Degreewise this splits chain
endomorphisms, and that in turn splits homotopy idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional

from .categories import VectNodal, VectP1
from .categories.base import Morphism, Obj
from .complexes import ChainMap, Complex, Homotopy, find_homotopy
from .errors import ExactCatError


class NotHomotopyIdempotent(ExactCatError):
    pass


@dataclass
class FittingDecomposition:
    V: Obj
    f: Morphism
    n: int
    Vp: Obj  # V', where f is invertible
    Vpp: Obj  # V'', where f is nilpotent
    ip: Morphism
    ipp: Morphism
    pp: Morphism
    ppp: Morphism
    fp: Morphism
    fpp: Morphism

    def check(self) -> bool:
        B = self.V.backend
        idV = B.identity(self.V)
        ok = (self.pp @ self.ip == B.identity(self.Vp)
              and self.ppp @ self.ipp == B.identity(self.Vpp)
              and (self.ppp @ self.ip).is_zero() and (self.pp @ self.ipp).is_zero()
              and self.ip @ self.pp + self.ipp @ self.ppp == idV
              and self.ip @ self.fp @ self.pp + self.ipp @ self.fpp @ self.ppp == self.f)
        if not ok:
            return False
        if not self.Vp.is_zero and B.inverse(self.fp) is None:
            return False
        return power(self.fpp, self.n).is_zero()


def power(f: Morphism, k: int) -> Morphism:
    B = f.backend
    out = B.identity(f.source)
    for _ in range(k):
        out = f @ out
    return out


def _kernel_size(B, g: Morphism) -> int:
    """Rank of the kernel sheaf.  For a non-stable power on a nodal curve the
    kernel need not descend to a subbundle, so bundles use the generic rank."""
    if isinstance(B, VectNodal):
        return g.source.size - B.up.generic_rank(B.lift(g))
    if isinstance(B, VectP1):
        return g.source.size - B.generic_rank(g)
    return B.kernel(g).source.size


def stabilization_index(f: Morphism) -> int:
    """Least ``n`` with ``Ker f^n = Ker f^(n+1)``."""
    B = f.backend
    if f.source != f.target:
        raise ValueError("Fitting decomposition needs an endomorphism")
    cap = f.source.size
    g = B.identity(f.source)
    prev = 0
    for n in range(cap + 1):
        nxt = _kernel_size(B, f @ g)
        if nxt == prev:
            return n
        prev = nxt
        g = f @ g
    return cap


def fitting_decompose(f: Morphism) -> FittingDecomposition:
    B = f.backend
    V = f.source
    n = stabilization_index(f)
    fn = power(f, n)
    fac = B.admissible_factorization(fn)
    ip = fac.mono
    ipp = B.kernel(fn)
    S, (j1, j2), (q1, q2) = B.direct_sum([ip.source, ipp.source])
    u = ip @ q1 + ipp @ q2
    w = B.inverse(u)
    if w is None:  # pragma: no cover - image and kernel of f^n are complementary
        raise AssertionError("image and kernel of the stable power are not complementary")
    pp, ppp = q1 @ w, q2 @ w
    fp = pp @ f @ ip
    fpp = ppp @ f @ ipp
    d = FittingDecomposition(V, f, n, ip.source, ipp.source, ip, ipp, pp, ppp, fp, fpp)
    if not d.check():  # pragma: no cover
        raise AssertionError("Fitting decomposition failed its identities")
    return d


@dataclass
class ComplexFitting:
    X: Complex
    f: ChainMap
    X1: Complex
    X2: Complex
    i1: ChainMap
    i2: ChainMap
    p1: ChainMap
    p2: ChainMap
    f1: ChainMap
    f2: ChainMap
    indices: Dict[int, int]  # per-degree nilpotence index of f2
    pieces: Dict[int, FittingDecomposition] = field(default_factory=dict)


def fitting_decompose_complex(f: ChainMap) -> ComplexFitting:
    X = f.source
    B = X.backend
    if not X.objs:
        Z = Complex.zero(B)
        z = ChainMap(Z, Z, {})
        return ComplexFitting(X, f, Z, Z, z, z, z, z, z, z, {})
    pieces = {i: fitting_decompose(f[i]) for i in X.degrees}
    d1, d2 = [], []
    for i in range(X.lo, X.hi):
        a, b = pieces[i], pieces[i + 1]
        d = X.d(i)
        if not (b.ppp @ d @ a.ip).is_zero() or not (b.pp @ d @ a.ipp).is_zero():
            raise AssertionError(f"differential {i} does not respect the Fitting splitting")  # pragma: no cover
        d1.append(b.pp @ d @ a.ip)
        d2.append(b.ppp @ d @ a.ipp)
    X1 = Complex(B, X.lo, [pieces[i].Vp for i in X.degrees], d1)
    X2 = Complex(B, X.lo, [pieces[i].Vpp for i in X.degrees], d2)
    i1 = ChainMap(X1, X, {i: p.ip for i, p in pieces.items()})
    i2 = ChainMap(X2, X, {i: p.ipp for i, p in pieces.items()})
    p1 = ChainMap(X, X1, {i: p.pp for i, p in pieces.items()})
    p2 = ChainMap(X, X2, {i: p.ppp for i, p in pieces.items()})
    f1 = ChainMap(X1, X1, {i: p.fp for i, p in pieces.items()})
    f2 = ChainMap(X2, X2, {i: p.fpp for i, p in pieces.items()})
    return ComplexFitting(X, f, X1, X2, i1, i2, p1, p2, f1, f2,
                          {i: p.n for i, p in pieces.items()}, pieces)


@dataclass
class IdempotentSplitting:
    e: ChainMap
    idempotency: Homotopy  # e e ~ e
    object: Complex
    i: ChainMap
    p: ChainMap
    pi_homotopy: Homotopy  # p i ~ id
    ip_homotopy: Homotopy  # e ~ i p
    unit_homotopy: Homotopy  # e1 ~ id on the invertible part
    null_homotopy: Homotopy  # e2 ~ 0 on the nilpotent part
    series_lengths: Dict[int, int]  # terms of sum e2^k kept per degree
    fitting: Optional[ComplexFitting] = None

    def validate(self) -> bool:
        return all(h.is_valid() for h in (self.idempotency, self.pi_homotopy, self.ip_homotopy,
                                          self.unit_homotopy, self.null_homotopy))


def split_homotopy_idempotent(e: ChainMap, certificate: Optional[Homotopy] = None) -> IdempotentSplitting:
    X = e.source
    B = X.backend
    H = find_homotopy(e @ e, e)
    if H is None:
        raise NotHomotopyIdempotent("e e is not homotopic to e")
    fit = fitting_decompose_complex(e)
    X1, X2 = fit.X1, fit.X2
    # invertible part: e1 - 1 = e1^{-1} (e1 e1 - e1)
    G1 = {}
    for i in X1.degrees:
        if X1[i].is_zero or X1[i - 1].is_zero:
            continue
        inv = B.inverse(fit.f1[i - 1])
        G1[i] = inv @ fit.p1[i - 1] @ H[i] @ fit.i1[i]
    unit = Homotopy(fit.f1, X1.identity(), G1)
    # nilpotent part: e2 = (e2 - e2 e2) S with S = sum_{k < n_i} e2^k
    lengths = {}
    S = {}
    for i in X2.degrees:
        n = fit.indices.get(i, 0) if not X2[i].is_zero else 0
        lengths[i] = n
        acc = B.zero(X2[i], X2[i])
        term = B.identity(X2[i])
        for _ in range(n):
            acc = acc + term
            term = fit.f2[i] @ term
        S[i] = acc
    G2 = {}
    for i in X2.degrees:
        if X2[i].is_zero or X2[i - 1].is_zero:
            continue
        G2[i] = -(fit.p2[i - 1] @ H[i] @ fit.i2[i] @ S[i])
    null = Homotopy(fit.f2, X2.zero_map(X2), G2)
    i1, p1 = fit.i1, fit.p1
    pi = Homotopy(p1 @ i1, X1.identity(), {})
    maps = {}
    for i in X.degrees:
        m = i1[i - 1] @ unit[i] @ p1[i] + fit.i2[i - 1] @ null[i] @ fit.p2[i]
        if not m.is_zero():
            maps[i] = m
    ip = Homotopy(e, i1 @ p1, maps)
    out = IdempotentSplitting(e, H, X1, i1, p1, pi, ip, unit, null, lengths, fit)
    if not out.validate():  # pragma: no cover
        raise AssertionError("idempotent splitting failed to validate")
    return out
