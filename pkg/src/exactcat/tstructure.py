"""The t-structure on acyclic complexes and what is built from it.

For an acyclic complex ``t`` with factorizations ``d^i = alpha^{i+1} beta^i``
through objects ``K^i``, the truncation at ``n`` is the pair

    A = (... -> t^{n-1} --beta--> K^n)           (zero above degree n)
    B = (K^n --alpha--> t^n -> t^{n+1} -> ...)   (zero below degree n-1)

with ``A -> t -> B`` a distinguished triangle.  ``A^{<=n}`` holds the
acyclic complexes vanishing above ``n`` and ``A^{>=m}`` those vanishing
below ``m - 2``; the heart is the admissible short exact sequences placed
in degrees -2, -1, 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .categories import DualMod, FinVect, SplitExact, VectNodal, VectP1
from .categories.base import Equation, Morphism
from .bundles import trivial_bundle
from .complexes import (ChainMap, Complex, Homotopy, NotAcyclic, cone, find_homotopy, is_acyclic,
                        is_contractible)
from .errors import ExactCatError
from .linalg import Matrix


class MembershipViolation(ExactCatError):
    pass


class NotHereditaryBackend(ExactCatError):
    pass


def in_le(c: Complex, n: int) -> bool:
    """Entries vanish above degree ``n``."""
    s = c.support()
    return s is None or s[1] <= n


def in_ge(c: Complex, m: int) -> bool:
    """Entries vanish below degree ``m - 2``."""
    s = c.support()
    return s is None or s[0] >= m - 2


def _witness(t: Complex):
    w = is_acyclic(t)
    if not w:
        raise NotAcyclic(f"complex is not acyclic at degree {w.degree}: {w.reason}", w)
    return w


@dataclass
class Triangle:
    """``A --u--> E --v--> B --w--> A[1]`` with ``B`` identified with ``cone(u)``."""

    A: Complex
    E: Complex
    B: Complex
    u: ChainMap
    v: ChainMap
    w: ChainMap
    phi: ChainMap  # cone(u) -> B
    psi: ChainMap  # B -> cone(u)
    homotopy: Optional[Homotopy]  # psi phi ~ id on cone(u); phi psi = id exactly

    def certified(self) -> bool:
        C = self.psi.target
        if self.phi @ self.psi != self.B.identity():
            return False
        if self.homotopy is None or not self.homotopy.is_valid():
            return False
        h = self.homotopy
        return h.f == self.psi @ self.phi and h.g == C.identity()


def truncate(t: Complex, n: int) -> Triangle:
    w = _witness(t)
    Bk = t.backend
    if not t.objs:
        t = Complex.single(Bk.zero_object(), n)
    lo, hi = t.lo, t.hi
    inside = lo <= n <= hi + 1
    Kn = w.K[n] if inside and n in w.K else Bk.zero_object()
    alpha_n = w.alpha[n] if inside and n in w.alpha and not Kn.is_zero else Bk.zero(Kn, t[n])
    beta_n1 = w.beta[n - 1] if inside and (n - 1) in w.beta and not Kn.is_zero else Bk.zero(t[n - 1], Kn)

    a_lo = min(lo, n)
    A = Complex(Bk, a_lo, [t[i] for i in range(a_lo, n)] + [Kn],
                [t.d(i) for i in range(a_lo, n - 1)] + ([beta_n1] if n > a_lo else []), check=False)
    b_hi = max(hi, n - 1)
    B = Complex(Bk, n - 1, [Kn] + [t[i] for i in range(n, b_hi + 1)],
                ([alpha_n] if b_hi >= n else []) + [t.d(i) for i in range(n, b_hi)], check=False)
    ucomps = {i: Bk.identity(t[i]) for i in range(lo, min(n, hi + 1))}
    ucomps[n] = alpha_n
    u = ChainMap(A, t, ucomps)
    vcomps = {i: Bk.identity(t[i]) for i in range(max(n, lo), hi + 1)}
    vcomps[n - 1] = beta_n1
    v = ChainMap(t, B, vcomps)

    cu = cone(u)
    C = cu.complex
    phi, psi = {}, {}
    for i in C.degrees:
        if i >= n:
            phi[i], psi[i] = cu.pr_y[i], cu.inj_y[i]
        elif i == n - 1:
            phi[i] = beta_n1 @ cu.pr_y[i] + cu.pr_x[i]
            psi[i] = cu.inj_x[i]
    phi = ChainMap(C, B, phi)
    psi = ChainMap(B, C, psi)
    hom = find_homotopy(psi @ phi, C.identity())
    tri = Triangle(A, t, B, u, v, cu.proj @ psi, phi, psi, hom)
    if not tri.certified():  # pragma: no cover - the construction guarantees it
        raise AssertionError("truncation triangle failed its certificate")
    return tri


def hom_vanishing_witness(f: ChainMap) -> Homotopy:
    """Null-homotopy of ``f : a -> b`` with ``a`` in A^{<=0} and ``b`` in A^{>=1}."""
    a, b = f.source, f.target
    if not in_le(a, 0):
        raise MembershipViolation("source has entries above degree 0")
    if not in_ge(b, 1):
        raise MembershipViolation("target has entries below degree -1")
    for name, c in (("source", a), ("target", b)):
        w = is_acyclic(c)
        if not w:
            raise MembershipViolation(f"{name} is not acyclic: {w.reason}")
    Bk = a.backend
    maps = {}
    if not f[0].is_zero():
        theta = Bk.factor_through_mono(f[0], b.d(-1))
        if theta is None:
            raise MembershipViolation("degree-0 component does not factor through the target's first differential")
        maps[0] = theta
    h = Homotopy(f, a.zero_map(b), maps)
    if not h.is_valid():  # pragma: no cover - follows from exactness of the target
        raise AssertionError(f"hom-vanishing homotopy fails at {h.defect()}")
    return h


@dataclass
class HeartObject:
    complex: Complex

    def __post_init__(self):
        s = self.complex.support()
        if s is not None and (s[0] < -2 or s[1] > 0):
            raise MembershipViolation(f"heart objects live in degrees -2..0, got {s}")
        self.complex = self.complex.extend(-2, 0).restrict(-2, 0)
        w = is_acyclic(self.complex)
        if not w:
            raise MembershipViolation(f"not an admissible short exact sequence: {w.reason}")

    def is_zero_in_heart(self) -> bool:
        return is_contractible(self.complex) is not None


def h0(t: Complex) -> HeartObject:
    first = truncate(t, 0).A
    return HeartObject(truncate(first, -1).B)


@dataclass
class KerCoker:
    kernel: HeartObject
    cokernel: HeartObject
    kernel_map: ChainMap
    cokernel_map: ChainMap
    kernel_null: Homotopy
    cokernel_null: Homotopy


def heart_ker_coker(f: ChainMap) -> KerCoker:
    X, Y = f.source, f.target
    HeartObject(X)
    HeartObject(Y)
    cu = cone(f)
    C = cu.complex
    Cm = C.shift(-1)
    ktri = truncate(Cm, 0)
    ker = ktri.A
    ker_map = cu.proj.shift(-1)
    ker_map = ChainMap(Cm, X, ker_map.comps) @ ktri.u
    ctri = truncate(C, -1)
    cok = ctri.B
    cok_map = ctri.v @ cu.incl
    n1 = find_homotopy(f @ ker_map, ker.zero_map(Y))
    n2 = find_homotopy(cok_map @ f, X.zero_map(cok))
    if n1 is None or n2 is None:  # pragma: no cover
        raise AssertionError("kernel or cokernel composite is not null-homotopic")
    return KerCoker(HeartObject(ker), HeartObject(cok), ker_map, cok_map, n1, n2)


# -- Ext dimensions ------------------------------------------------------------

def ext_dim(x, y, n: int) -> int:
    """``dim Hom(x, y[n])`` in the bounded derived category."""
    B = x.backend
    if n < 0:
        return 0
    if isinstance(B, SplitExact):
        return B.hom_dim(x, y) if n == 0 else 0
    if n == 0:
        return B.hom_dim(x, y)
    if isinstance(B, FinVect):
        return 0
    if isinstance(B, (VectP1, VectNodal)):
        # curves are hereditary: Ext^n vanishes from n = 2 on
        return B.ext1_dim(x, y) if n == 1 else 0
    if isinstance(B, DualMod):
        return _dualmod_ext(B, x, y, n)
    raise NotHereditaryBackend(f"no Ext computation for backend {B.name}")


def projective_resolution(B: DualMod, x, length: int) -> list:
    """Differentials ``P_1 -> P_0, P_2 -> P_1, ...`` and the augmentation."""
    eps = B.projective_cover(x)
    maps = [eps]
    K = B.kernel(eps)
    for _ in range(length):
        if K.source.is_zero:
            break
        cov = B.projective_cover(K.source)
        maps.append(K @ cov)
        K = B.kernel(cov)
    return maps


def _dualmod_ext(B, x, y, n):
    maps = projective_resolution(B, x, n + 1)
    P = [maps[0].source] + [m.source for m in maps[1:]]
    if n >= len(P):
        return 0

    def delta(j):
        # Hom(P_j, y) -> Hom(P_{j+1}, y), precomposition with d_{j+1}
        if j + 1 >= len(P):
            return None
        d = maps[j + 1]
        basis = B.hom_basis(P[j], y)
        cols = [B.coords(phi @ d) for phi in basis]
        return Matrix.from_columns(B.field, cols, B.hom_dim(P[j + 1], y))

    dim_n = B.hom_dim(P[n], y)
    dn = delta(n)
    ker = dim_n - (dn.rank() if dn is not None and dn.cols else 0)
    dp = delta(n - 1)
    im = dp.rank() if dp is not None and dp.cols and dp.rows else 0
    return ker - im


# -- heart covers -----------------------------------------------------------------

@dataclass
class HeartCover:
    t: Complex
    a: HeartObject
    phi: ChainMap
    cone: Complex
    b: Complex  # the part of cone(phi) in A^{<=-1}
    contraction: Homotopy  # of the part of cone(phi) above degree -1
    top_split: Morphism  # section of the top differential of cone(phi)

    def __bool__(self):
        return True


@dataclass
class NoCover:
    t: Complex
    cover: Morphism  # P -> T^0
    unknown_dims: list
    equation_dims: list
    rank: int
    augmented_rank: int
    lift_exists: bool  # the first equation alone is solvable
    reason: str

    def __bool__(self):
        return False


def _min_twist(B, objs):
    ts = []
    for o in objs:
        if o.is_zero:
            continue
        ts.append(min(o.key.upstairs) if isinstance(B, VectNodal) else min(o.key))
    return min(ts) if ts else 0


def relative_cover(B, T0, avoid) -> Morphism:
    """An admissible epi ``P -> T0`` with ``Ext^1(P, X) = 0`` for ``X`` in ``avoid``."""
    if isinstance(B, FinVect):
        return B.identity(T0)
    if isinstance(B, DualMod):
        return B.projective_cover(T0)
    if isinstance(B, VectP1):
        n = min(_min_twist(B, [T0]), _min_twist(B, avoid) + 1) if avoid else _min_twist(B, [T0])
        return B.twisted_cover(T0, n)
    if isinstance(B, VectNodal):
        N = B.curve.n_nodes
        n = min(_min_twist(B, [T0]), _min_twist(B, avoid)) - 2 * N - 1
        for _ in range(8):
            L = B.obj(trivial_bundle(B.curve, [n]))
            basis = B.hom_basis(L, T0)
            P, inj, proj = B.direct_sum([L] * len(basis))
            pi = B.zero(P, T0)
            for b, p in zip(basis, proj):
                pi = pi + b @ p
            if B.classify(pi).is_admissible_epi:
                return pi
            n -= 1
        raise AssertionError("no twisted cover found")  # pragma: no cover
    raise NotHereditaryBackend(f"no cover construction for backend {B.name}")


def construct_heart_cover(t: Complex):
    """A heart object ``a`` with ``a -> t`` whose cone lies in A^{<=-1}, or NoCover."""
    B = t.backend
    if not in_le(t, 0):
        raise MembershipViolation("complex has entries above degree 0")
    w = is_acyclic(t)
    if not w:
        raise MembershipViolation(f"complex is not acyclic: {w.reason}")
    T0, T1, T2 = t[0], t[-1], t[-2]
    Z = B.zero_object()
    if in_ge(t, 0):
        a = HeartObject(t)
        phi = ChainMap(a.complex, t, {i: B.identity(t[i]) for i in range(-2, 1)})
        return _certify(t, a, phi)
    avoid = [w.K.get(-1, Z), w.K.get(-2, Z)]
    pi = relative_cover(B, T0, avoid) if not T0.is_zero else B.zero(Z, Z)
    j = B.kernel(pi) if not T0.is_zero else B.zero(Z, Z)
    P, Q = pi.source, j.source
    unknowns = [(P, T1), (Q, T2)]
    eq1 = Equation(P, T0, [(0, t.d(-1), None)], pi)
    eq2 = Equation(Q, T1, [(0, None, j), (1, t.d(-2).scale(-1), None)], None)
    sol = B.solve(unknowns, [eq1, eq2])
    if sol is None:
        first = B.solve([unknowns[0]], [eq1]) is not None
        return _no_cover(t, pi, unknowns, [eq1, eq2], first)
    c1, c2 = sol
    a = Complex(B, -2, [Q, P, T0], [j, pi])
    phi = ChainMap(a, t, {-2: c2, -1: c1, 0: B.identity(T0)})
    return _certify(t, HeartObject(a), phi)


def _certify(t, a, phi):
    B = t.backend
    cu = cone(phi)
    C = cu.complex
    tri = truncate(C, -1)
    h = is_contractible(tri.B)
    if h is None:  # pragma: no cover - equivalent to the solved system
        raise AssertionError("cone of the cover is not in A^{<=-1}")
    top = C.d(-1)
    s = B.right_inverse(top) if not C[0].is_zero else B.zero(C[0], C[-1])
    return HeartCover(t, a, phi, C, tri.A, h, s)


def _no_cover(t, pi, unknowns, eqs, first):
    B = t.backend
    udims = [B.hom_dim(x, y) for x, y in unknowns]
    edims = [B.flat_len(e.src, e.tgt) for e in eqs]
    # rebuild the system matrix for the report
    cols = []
    for k, (x, y) in enumerate(unknowns):
        for b in B.hom_basis(x, y):
            col = []
            for e in eqs:
                acc = B.zero(e.src, e.tgt)
                for idx, left, right in e.terms:
                    if idx == k:
                        m = b
                        if right is not None:
                            m = m @ right
                        if left is not None:
                            m = left @ m
                        acc = acc + m
                col += acc.flat()
            cols.append(col)
    rhs = [v for e in eqs for v in (e.rhs.flat() if e.rhs is not None else [B.field.zero] * B.flat_len(e.src, e.tgt))]
    rows = sum(edims)
    A = Matrix.from_columns(B.field, cols, rows)
    Ab = Matrix.from_columns(B.field, cols + [rhs], rows)
    reason = ("the cover lifts to degree -1 but its kernel cannot be lifted to degree -2"
              if first else "the cover does not lift through the last differential")
    return NoCover(t, pi, udims, edims, A.rank() if cols else 0, Ab.rank(), first, reason)
