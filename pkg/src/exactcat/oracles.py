"""Brute-force oracles and the registered property suites.

The oracles here deliberately avoid the kernel/cokernel machinery of the
backends.  Acyclicity is decided by counting ranks (vector spaces), by
graded exactness in one large degree (P^1), or by pulling back to P^1
(nodal curves).  Isomorphism of line bundles is decided by exhaustive
search over compatible maps upstairs.

A suite is ``fn(seed, cases=None) -> SuiteReport``; every case draws from
its own ``random.Random`` derived from ``(suite, seed, index)`` so results
do not depend on evaluation order.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import io
from .bundles import NodalBundle, NodalCurve, descend, line_bundle, pullback
from .categories import DualMod, FinVect, SplitExact, VectNodal, VectP1
from .categories.base import Equation, Morphism, Obj
from .complexes import Complex, is_acyclic, split_contractible
from .curves import global_sections, pic_classes
from .fitting import fitting_decompose, power, split_homotopy_idempotent
from .linalg import Field, Matrix
from .linalg import poly
from . import sampling as S
from .tstructure import (construct_heart_cover, ext_dim, hom_vanishing_witness, in_ge, in_le,
                         truncate)


# -- standalone rank over GF(p) -------------------------------------------------------

def rank_mod_p(rows, p: int) -> int:
    """Rank by plain Gaussian elimination on a copy of ``rows``."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] % p:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _rank(F: Field, rows, ncols) -> int:
    if not rows or not ncols:
        return 0
    if F.p:
        return rank_mod_p(rows, F.p)
    return Matrix(F, rows, len(rows), ncols).rank()


# -- acyclicity oracles ------------------------------------------------------------------

def enumerate_f2_complexes(max_total: int = 6):
    """Every complex of F_2 vector spaces with contiguous nonzero support,
    placed at degree 0, of total dimension at most ``max_total``."""
    B = FinVect(Field(2))

    def compositions(n):
        if n == 0:
            yield ()
            return
        for k in range(1, n + 1):
            for rest in compositions(n - k):
                yield (k,) + rest

    def matrices(r, c):
        for bits in range(2 ** (r * c)):
            yield Matrix.raw(B.field, [[(bits >> (i * c + j)) & 1 for j in range(c)] for i in range(r)], r, c)

    def extend(dims, diffs):
        k = len(diffs)
        if k == len(dims) - 1:
            yield diffs
            return
        for m in matrices(dims[k + 1], dims[k]):
            if diffs and not (m @ diffs[-1]).is_zero():
                continue
            yield from extend(dims, diffs + [m])

    for n in range(1, max_total + 1):
        for dims in compositions(n):
            objs = [B.space(d) for d in dims]
            for ms in extend(dims, []):
                yield Complex(B, 0, objs, [Morphism(objs[i], objs[i + 1], m) for i, m in enumerate(ms)],
                              check=False)


def _linear_exact(c: Complex, dims, mats) -> bool:
    F = c.backend.field
    ranks = {}
    for i in c.degrees[:-1]:
        m = mats(c.d(i))
        ranks[i] = _rank(F, m, len(m[0]) if m else 0)
    for i in c.degrees:
        if ranks.get(i - 1, 0) + ranks.get(i, 0) != dims(c[i]):
            return False
    return True


def _p1_kernel_floor(a, b) -> int:
    """A lower bound for the twists of the kernel of any map ``O(a) -> O(b)``."""
    if not a:
        return 0
    top = max(a)
    return sum(a) - sum(max(x, 0) for x in b) - (len(a) - 1) * max(top, 0)


def graded_window(twists_seq) -> int:
    """A degree past which graded exactness of the section complex is equivalent to
    exactness of the sheaf complex, for complexes with the given entries."""
    floor = 0
    for i, a in enumerate(twists_seq):
        b = twists_seq[i + 1] if i + 1 < len(twists_seq) else ()
        floor = min(floor, _p1_kernel_floor(a, b), min(a) if a else 0)
    return -floor + 1


def graded_section_matrix(F: Field, data, src, tgt, N: int):
    """Rows x cols list for ``H^0(f(N))`` in monomial bases ``x^(d-k) y^k``."""
    col_off, cols = [], 0
    for a in src:
        col_off.append(cols)
        cols += max(a + N + 1, 0)
    row_off, rows = [], 0
    for b in tgt:
        row_off.append(rows)
        rows += max(b + N + 1, 0)
    m = [[F.zero] * cols for _ in range(rows)]
    for i, b in enumerate(tgt):
        for j, a in enumerate(src):
            form = data[i][j]
            if not form or a + N < 0:
                continue
            for k in range(a + N + 1):  # source monomial x^(a+N-k) y^k
                for t, c in enumerate(form):  # form term x^(b-a-t) y^t
                    if c:
                        r = row_off[i] + k + t
                        m[r][col_off[j] + k] = F.add(m[r][col_off[j] + k], c)
    return m, rows, cols


def _p1_twists(c: Complex):
    B = c.backend
    if isinstance(B, VectNodal):
        return [x.key.upstairs for x in c.objs]
    return [x.key for x in c.objs]


def p1_graded_exact(c: Complex) -> bool:
    """Exactness of global sections at two consecutive large twists."""
    F = c.backend.field
    tw = _p1_twists(c)
    N0 = graded_window(tw)
    for N in (N0, N0 + 1):
        ranks = {}
        for k in range(len(c.diffs)):
            m, r, cc = graded_section_matrix(F, c.diffs[k].data, tw[k], tw[k + 1], N)
            ranks[k] = _rank(F, m, cc)
        for k, a in enumerate(tw):
            dim = sum(max(x + N + 1, 0) for x in a)
            if ranks.get(k - 1, 0) + ranks.get(k, 0) != dim:
                return False
    return True


def acyclic_oracle(c: Complex) -> bool:
    """Brute-force acyclicity, independent of the backend's factorizations."""
    B = c.backend
    if not c.objs:
        return True
    if isinstance(B, (FinVect, DualMod)):
        return _linear_exact(c, lambda x: B.dim(x.key), lambda d: d.data.tolist())
    if isinstance(B, (VectP1, VectNodal)):
        # a complex on the nodal curve is acyclic iff its pullback is:
        # fibers at a node are the fibers at either preimage
        return p1_graded_exact(c)
    raise TypeError(f"no acyclicity oracle for {B.name}")


# -- Ext and sections oracles ------------------------------------------------------------

def hom_bundle(x: Obj, y: Obj) -> NodalBundle:
    """The sheaf Hom(x, y) as descent data, entries ordered row-major."""
    B = x.backend
    F = B.field
    a, b = x.key.upstairs, y.key.upstairs
    twists = [bi - aj for bi in b for aj in a]
    glue = []
    for rx, ry in zip(x.key.gluings, y.key.gluings):
        rinv_t = rx.inverse().T
        rows = [[F.mul(ry[i, k], rinv_t[j, l]) for k in range(len(b)) for l in range(len(a))]
                for i in range(len(b)) for j in range(len(a))]
        glue.append(rows)
    return descend(B.curve, twists, glue)


def chi_ext1(x: Obj, y: Obj) -> int:
    """``h^0 - chi`` of the Hom sheaf, with ``h^0`` from global sections."""
    B = x.backend
    if isinstance(B, VectP1):
        curve = NodalCurve(B.field, ())
        x = VectNodal(B.field, curve).bundle(NodalBundle(curve, x.key, ()))
        y = VectNodal(B.field, curve).bundle(NodalBundle(curve, y.key, ()))
        B = x.backend
    if not x.key.upstairs or not y.key.upstairs:
        return 0
    H = hom_bundle(x, y)
    chi = H.degree + H.rank * (1 - B.curve.n_nodes)
    return global_sections(H).dim - chi


def pic_bruteforce(curve: NodalCurve, degree: int) -> int:
    """Number of classes of degree ``degree`` line bundles, by exhaustive search
    for mutually inverse gluing-compatible maps among constants upstairs."""
    F = curve.field
    scalars = list(itertools.product(list(F.units()), repeat=curve.n_nodes))
    parent = list(range(len(scalars)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def compatible(c, lam, mu):
        # a constant map c: L_lam -> L_mu; fibers agree at both preimages
        return all(F.mul(c, l) == F.mul(m, c) for l, m in zip(lam, mu))

    for i, j in itertools.combinations(range(len(scalars)), 2):
        lam, mu = scalars[i], scalars[j]
        found = any(compatible(f, lam, mu) and compatible(g, mu, lam) and F.mul(f, g) == F.one
                    for f in F.elements() for g in F.elements())
        if found:
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(scalars))})


def form_determinant(F: Field, data, n: int):
    """Determinant of an ``n x n`` matrix of binary forms, dehomogenized at y = 1."""
    polys = [[list(reversed(e)) if e else [] for e in row] for row in data]
    total = []
    for perm in itertools.permutations(range(n)):
        odd = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n)) % 2
        term = [F.one]
        for i in range(n):
            term = poly.mul(F, term, polys[i][perm[i]])
        if not odd:
            term = [F.neg(v) for v in term]
        total = poly.sub(F, total, term)
    return poly.trim(total)


# -- reports -------------------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int = 0
    failures: List[dict] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.cases > 0

    def fail(self, case, reason, instance=None, size=0):
        self.failures.append({"case": case, "reason": reason, "instance": instance, "size": size})

    def to_json(self) -> dict:
        out = {"suite": self.suite, "seed": self.seed, "cases": self.cases,
               "status": "pass" if self.passed else "fail", "failures": len(self.failures),
               "details": self.details}
        if self.failures:
            worst = min(self.failures, key=lambda f: (f["size"], f["case"]))
            out["counterexample"] = {"case": worst["case"], "reason": worst["reason"],
                                     "instance": worst["instance"]}
        return out


SUITES: Dict[str, Callable] = {}


def suite(name):
    def deco(fn):
        def run(seed: int, cases: Optional[int] = None) -> SuiteReport:
            rep = SuiteReport(name, seed)
            t = time.perf_counter()
            fn(rep, seed, cases)
            rep.seconds = time.perf_counter() - t
            return rep
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        SUITES[name] = run
        return run
    return deco


def case_rng(name, seed, k) -> random.Random:
    return random.Random(f"{name}:{seed}:{k}")


def _guard(rep, k, doc_fn, body):
    """Run one case; exceptions become failures with a replayable instance."""
    try:
        msg = body()
    except Exception as e:  # noqa: BLE001 - every failure is reported, never raised
        msg = f"{type(e).__name__}: {e}"
    rep.cases += 1
    if msg:
        try:
            doc, size = doc_fn()
        except Exception:  # noqa: BLE001
            doc, size = None, 0
        rep.fail(k, msg, doc, size)


def _cx_doc(c, op, **args):
    return io.make_document(c.backend, op, {"complex": "T", **args}, complexes={"T": c}), c.total_size()


def hereditary_backends():
    return [FinVect(Field(7)), VectP1(Field(7)), VectNodal(Field(5))]


# -- suites --------------------------------------------------------------------------------

@suite("acyclicity")
def _acyclicity(rep, seed, cases):
    """is_acyclic against the brute-force oracle: exhaustive over F_2, sampled elsewhere."""
    per = 300 if cases is None else cases
    exhaustive = 0
    for k, c in enumerate(enumerate_f2_complexes(6)):
        def body(c=c):
            got, want = bool(is_acyclic(c)), acyclic_oracle(c)
            return None if got == want else f"is_acyclic={got}, oracle={want}"
        _guard(rep, k, lambda c=c: _cx_doc(c, "check-acyclic"), body)
        exhaustive += 1
    rep.details["exhaustive_f2"] = exhaustive
    backends = [FinVect(Field(7)), DualMod(Field(3)), VectP1(Field(7)), VectNodal(Field(5))]
    agree = {}
    for B in backends:
        acyc = 0
        for k in range(per):
            rng = case_rng(f"acyclicity/{B.name}", seed, k)
            mode = k % 3
            if mode == 0:
                c = S.random_acyclic_complex(B, rng, max_rank=3)
            elif mode == 1:
                c = S.random_complex(B, rng, max_rank=3)
            else:
                c = _perturbed(S.random_acyclic_complex(B, rng, max_rank=3), rng)

            def body(c=c):
                nonlocal acyc
                w = is_acyclic(c)
                got, want = bool(w), acyclic_oracle(c)
                acyc += got
                if got and not w.verify():
                    return "witness failed verification"
                return None if got == want else f"is_acyclic={got}, oracle={want}"
            _guard(rep, f"{B.name}/{k}", lambda c=c: _cx_doc(c, "check-acyclic"), body)
        agree[B.name] = {"samples": per, "acyclic": acyc}
    rep.details["sampled"] = agree


def _perturbed(c: Complex, rng) -> Complex:
    """Precompose one differential with a random endomorphism (kept a complex)."""
    if len(c.diffs) < 1:
        return c
    B = c.backend
    k = rng.randrange(len(c.diffs))
    g = S.random_morphism(c.objs[k], c.objs[k], rng)
    diffs = list(c.diffs)
    diffs[k] = diffs[k] @ g
    if k > 0 and not (diffs[k] @ diffs[k - 1]).is_zero():
        diffs[k - 1] = B.zero(c.objs[k - 1], c.objs[k])
    return Complex(B, c.lo, c.objs, diffs)


@suite("tstructure-axioms")
def _tstructure(rep, seed, cases):
    """Certified truncation triangles and Hom-vanishing witnesses."""
    per = 300 if cases is None else cases
    maps = 100 if cases is None else max(1, cases // 3)
    for B in hereditary_backends():
        for k in range(per):
            rng = case_rng(f"tstructure/{B.name}", seed, k)
            c = S.random_acyclic_complex(B, rng, length=rng.randint(1, 6), max_rank=4)
            n = rng.randint(c.lo - 1, c.hi + 1)

            def body(c=c, n=n):
                tri = truncate(c, n)
                if not tri.certified():
                    return "triangle not certified"
                if not in_le(tri.A, n) or not in_ge(tri.B, n + 1):
                    return "truncation pieces in the wrong subcategories"
                if not is_acyclic(tri.A) or not is_acyclic(tri.B):
                    return "truncation pieces are not acyclic"
                return None
            _guard(rep, f"truncate/{B.name}/{k}", lambda c=c, n=n: _cx_doc(c, "truncate", n=n), body)
        nonzero = 0
        for k in range(maps):
            rng = case_rng(f"homvanish/{B.name}", seed, k)
            la, lb = rng.randint(2, 4), rng.randint(2, 4)
            a = S.random_acyclic_complex(B, rng, length=la, max_rank=3, lo=1 - la)
            b = S.random_acyclic_complex(B, rng, length=lb, max_rank=3, lo=-1)
            f = S.random_chain_map(a, b, rng)
            nonzero += not f.is_zero()

            def body(f=f):
                h = hom_vanishing_witness(f)
                return None if h.is_valid() and h.g.is_zero() else "witness does not nullify the map"
            doc = lambda f=f: (io.make_document(B, "hom-vanishing", {"map": "f"}, chain_maps={"f": f}),
                               f.source.total_size() + f.target.total_size())
            _guard(rep, f"homvanish/{B.name}/{k}", doc, body)
        rep.details[f"{B.name}/nonzero_maps"] = nonzero


def random_fitting_endo(B, rng):
    """A random endomorphism with a good chance of nontrivial invertible and nilpotent parts."""
    mode = rng.randrange(3)
    if mode == 0:
        V = S.random_object(B, rng, 3, min_rank=1, twists=(-1, 1))
        return S.random_morphism(V, V, rng)
    A = S.random_object(B, rng, 2, min_rank=1, twists=(-1, 1))
    C1 = S.random_object(B, rng, 1, twists=(-1, 1))
    C2 = S.random_object(B, rng, 1, twists=(-1, 1))
    V, (ia, i1, i2), (pa, p1, p2) = B.direct_sum([A, C1, C2])
    f = ia @ S.random_automorphism(A, rng) @ pa
    if mode == 2:
        # nilpotent part C1 + C2 -> C2
        f = f + i2 @ S.random_morphism(C1, C2, rng) @ p1
    phi = S.random_automorphism(V, rng)
    return phi @ f @ B.inverse(phi)


def _commuting_square(B, rng):
    """``(f, g, rho)`` with ``rho f = g rho``; ``g`` conjugates ``f + h`` on ``V + U``."""
    f = random_fitting_endo(B, rng)
    h = random_fitting_endo(B, rng)
    V, U = f.source, h.source
    W, (iv, iu), (pv, pu) = B.direct_sum([V, U])
    phi = S.random_automorphism(W, rng)
    g = phi @ (iv @ f @ pv + iu @ h @ pu) @ B.inverse(phi)
    cf = B.zero(V, V)
    term = B.identity(V)
    for _ in range(3):
        cf = cf + term.scale(B.field.random(rng))
        term = f @ term
    rho = phi @ iv @ cf
    return f, g, rho


def fitting_uniqueness(d) -> Optional[str]:
    """``V''`` is the stable kernel and ``V'`` the stable image, computed at power rank(V)."""
    B = d.V.backend
    R = max(d.V.size, 1)
    fR = power(d.f, R)
    if not (fR @ d.ipp).is_zero():
        return "V'' is not killed by f^rank"
    if d.Vp.size + d.Vpp.size != d.V.size:
        return "summand ranks do not add up"
    if not d.Vp.is_zero:
        sol = B.solve([(d.Vp, d.V)], [Equation(d.Vp, d.V, [(0, fR, None)], d.ip)])
        if sol is None:
            return "V' is not inside the image of f^rank"
    if isinstance(B, FinVect):
        # exact comparison of subspaces by ranks of stacked column spans
        F = B.field
        img = fR.data.tolist()
        r = _rank(F, img, d.V.size)
        if r != d.Vp.size:
            return "V' has the wrong dimension"
        both = [list(a) + list(b) for a, b in zip(img, d.ip.data.tolist())]
        if d.Vp.size and _rank(F, both, d.V.size + d.Vp.size) != r:
            return "V' differs from the stable image"
        if d.V.size - r != d.Vpp.size:
            return "V'' differs from the stable kernel"
    return None


@suite("fitting-uniqueness")
def _fitting_unique(rep, seed, cases):
    """Fitting summands against independently stabilized kernels and images."""
    per = 200 if cases is None else cases
    for k in range(per):
        B = hereditary_backends()[k % 3]
        rng = case_rng("fitting-uniqueness", seed, k)
        f = random_fitting_endo(B, rng)

        def body(f=f):
            d = fitting_decompose(f)
            if not d.check():
                return "decomposition identities fail"
            return fitting_uniqueness(d)
        _guard(rep, k, lambda f=f: (io.make_document(B, "fitting", {"map": "f"}, morphisms={"f": f}),
                                    f.source.size), body)


@suite("fitting-functoriality")
def _fitting_functorial(rep, seed, cases):
    """``rho`` carries V'(f) into V'(g) and V''(f) into V''(g) on commuting squares."""
    per = 200 if cases is None else cases
    for k in range(per):
        B = hereditary_backends()[k % 3]
        rng = case_rng("fitting-functoriality", seed, k)
        f, g, rho = _commuting_square(B, rng)

        def body(f=f, g=g, rho=rho):
            if rho @ f != g @ rho:
                return "square does not commute"
            df, dg = fitting_decompose(f), fitting_decompose(g)
            for d in (df, dg):
                why = fitting_uniqueness(d)
                if why:
                    return why
            if not (dg.ppp @ rho @ df.ip).is_zero():
                return "rho does not map V'(f) into V'(g)"
            if not (dg.pp @ rho @ df.ipp).is_zero():
                return "rho does not map V''(f) into V''(g)"
            return None
        doc = lambda f=f, g=g, rho=rho: (io.make_document(B, "fitting-square", {"f": "f", "g": "g", "rho": "rho"},
                                                          morphisms={"f": f, "g": g, "rho": rho}),
                                         rho.target.size)
        _guard(rep, k, doc, body)


@suite("idempotent-splitting")
def _idempotents(rep, seed, cases):
    """Homotopy idempotents over the nodal cubic split with validated witnesses."""
    per = 200 if cases is None else cases
    B = VectNodal(Field(5))
    for k in range(per):
        rng = case_rng("idempotent-splitting", seed, k)
        X, e = S.random_homotopy_idempotent(B, rng)

        def body(e=e):
            sp = split_homotopy_idempotent(e)
            if not sp.validate():
                return "witnesses fail"
            ip = sp.ip_homotopy
            if ip.f != e or ip.g != sp.i @ sp.p:
                return "i p homotopy has the wrong endpoints"
            pi = sp.pi_homotopy
            if pi.f != sp.p @ sp.i or pi.g != sp.object.identity():
                return "p i homotopy has the wrong endpoints"
            for i in sp.series_lengths:
                if sp.series_lengths[i] > sp.fitting.indices.get(i, 0):
                    return "geometric series longer than the nilpotence index"
            return None
        _guard(rep, k, lambda e=e: (io.make_document(B, "split-idempotent", {"map": "e"}, chain_maps={"e": e}),
                                    e.source.total_size()), body)


def dualmod_periodic(F: Field = Field(2)) -> Complex:
    """``0 -> k -> k[e] -> k[e] -> k -> 0`` in degrees -3..0."""
    B = DualMod(F)
    k, R = B.module(0, 1), B.module(1, 0)
    one, zero = F.one, F.zero
    inc = B.matrix(k, R, [[zero], [one]])
    eps = B.matrix(R, R, [[zero, zero], [one, zero]])
    aug = B.matrix(R, k, [[one, zero]])
    return Complex(B, -3, [k, R, R, k], [inc, eps, aug])


@suite("hereditary")
def _hereditary(rep, seed, cases):
    """Ext vanishing in degrees >= 2, Ext^1 against Euler characteristics, heart covers."""
    pairs = 100 if cases is None else cases
    covers = 30 if cases is None else max(1, cases // 3)
    for B in hereditary_backends():
        for k in range(pairs):
            rng = case_rng(f"ext/{B.name}", seed, k)
            x = S.random_object(B, rng, 3)
            y = S.random_object(B, rng, 3)

            def body(x=x, y=y):
                for n in (2, 3):
                    if ext_dim(x, y, n) != 0:
                        return f"Ext^{n} does not vanish"
                if isinstance(B, (VectP1, VectNodal)):
                    e1, o1 = ext_dim(x, y, 1), chi_ext1(x, y)
                    if e1 != o1:
                        return f"Ext^1 = {e1} but the Euler characteristic oracle gives {o1}"
                return None
            _guard(rep, f"ext/{B.name}/{k}",
                   lambda x=x, y=y: (io.make_document(B, "ext", {"x": "x", "y": "y", "n": 2},
                                                      objects={"x": x, "y": y}), x.size + y.size), body)
        for k in range(covers):
            rng = case_rng(f"cover/{B.name}", seed, k)
            ln = rng.randint(1, 5)
            t = S.random_acyclic_complex(B, rng, length=ln, max_rank=3, lo=1 - ln)

            def body(t=t):
                cov = construct_heart_cover(t)
                return None if cov else f"no heart cover found: {cov.reason}"
            _guard(rep, f"cover/{B.name}/{k}", lambda t=t: _cx_doc(t, "heart-cover"), body)
    D = DualMod(Field(2))
    kk = D.module(0, 1)
    rep.cases += 1
    if ext_dim(kk, kk, 2) != 1:
        rep.fail("dualmod/ext2", "ext_dim(k, k, 2) != 1 over GF(2)")
    rep.cases += 1
    t = dualmod_periodic()
    if construct_heart_cover(t):
        rep.fail("dualmod/periodic", "periodic complex unexpectedly has a heart cover", _cx_doc(t, "heart-cover")[0])


@suite("split-contractible")
def _split(rep, seed, cases):
    """Split-acyclic complexes contract with a validated null-homotopy of the identity."""
    per = 100 if cases is None else cases
    bases = [SplitExact(Field(7), VectP1(Field(7))), SplitExact(Field(5), VectNodal(Field(5))),
             SplitExact(Field(7), FinVect(Field(7)))]
    for k in range(per):
        B = bases[k % len(bases)]
        rng = case_rng("split-contractible", seed, k)
        c = S.random_split_acyclic(B, rng)

        def body(c=c):
            dec = split_contractible(c)
            h = dec.contraction
            ok = h.is_valid() and h.f == c.identity() and h.g.is_zero()
            return None if ok else "contraction is not a null-homotopy of the identity"
        _guard(rep, k, lambda: (None, 0), body)


@suite("degree-monotonicity")
def _degree(rep, seed, cases):
    """Injective equal-rank maps on P^1 raise degree, strictly unless invertible."""
    per = 300 if cases is None else cases
    B = VectP1(Field(7))
    F = B.field
    k = 0
    draws = 0
    while k < per:
        rng = case_rng("degree-monotonicity", seed, draws)
        draws += 1
        r = rng.randint(1, 3)
        src = [rng.randint(-2, 2) for _ in range(r)]
        tgt = [a + rng.choice((0, 0, 0, 1, 2)) for a in src]
        x, y = B.bundle(src), B.bundle(tgt)
        f = S.random_morphism(x, y, rng)
        det = form_determinant(F, f.data, r)
        if not det:
            continue  # not injective: outside the property

        def body(f=f):
            dx, dy = sum(f.source.key), sum(f.target.key)
            iso = B.classify(f).is_iso
            if dx > dy:
                return "degree decreased along an injective map"
            if (dx == dy) != iso:
                return f"degrees {dx}, {dy} but classify says iso={iso}"
            return None
        _guard(rep, k, lambda f=f: (io.make_document(B, "classify", {"map": "f"}, morphisms={"f": f}),
                                    f.source.size), body)
        k += 1
    rep.details["draws"] = draws


@suite("injective-endo")
def _injective_endo(rep, seed, cases):
    """Injective endomorphisms of bundles on the nodal cubic are isomorphisms."""
    per = 300 if cases is None else cases
    B = VectNodal(Field(5))
    F = B.field
    k = draws = 0
    while k < per:
        rng = case_rng("injective-endo", seed, draws)
        draws += 1
        V = S.random_object(B, rng, 3, min_rank=1)
        f = S.random_morphism(V, V, rng)
        if not form_determinant(F, f.data, V.size):
            continue

        def body(f=f):
            return None if B.classify(f).is_iso else "injective endomorphism is not an isomorphism"
        _guard(rep, k, lambda f=f: (io.make_document(B, "classify", {"map": "f"}, morphisms={"f": f}),
                                    f.source.size), body)
        k += 1
    rep.details["draws"] = draws


@suite("descent-roundtrip")
def _descent(rep, seed, cases):
    """pullback(descend(data)) == data, and the JSON encoding round-trips."""
    per = 100 if cases is None else cases
    F = Field(5)
    curves = [NodalCurve.nodal_cubic(F), NodalCurve.two_nodes(F)]
    for k in range(per):
        rng = case_rng("descent-roundtrip", seed, k)
        curve = curves[k % 2]
        r = rng.randint(1, 4)
        up = tuple(sorted((rng.randint(-3, 3) for _ in range(r)), reverse=True))
        glue = tuple(S.random_invertible(F, r, rng) for _ in curve.nodes)

        def body(curve=curve, up=up, glue=glue):
            v = descend(curve, up, glue)
            if pullback(v) != (up, glue):
                return "pullback(descend(.)) is not the identity"
            N = VectNodal(F, curve)
            x = N.bundle(v)
            doc = io.make_document(N, "sections", {"bundle": "V"}, objects={"V": x})
            back = io.parse_document(doc).object("V")
            return None if back == x else "JSON round trip changed the bundle"
        _guard(rep, k, lambda: (None, 0), body)


@suite("global-sections")
def _sections(rep, seed, cases):
    """h^0 of the structure sheaf and of degree 0 and 1 line bundles on the nodal cubic."""
    for q in (2, 3, 5, 7):
        F = Field(q)
        Y = NodalCurve.nodal_cubic(F)
        for lam in F.units():
            want0 = 1 if lam == 1 else 0
            for d, want in ((0, want0), (1, 1)):
                rep.cases += 1
                got = global_sections(line_bundle(Y, d, [lam])).dim
                if got != want:
                    rep.fail(f"q={q}/d={d}/lam={lam}", f"h0 = {got}, expected {want}")


@suite("pic-enumeration")
def _pic(rep, seed, cases):
    """Degree-0 Picard counts against exhaustive search."""
    counts = {}
    for q in (2, 3, 5, 7):
        F = Field(q)
        curves = [("nodal-cubic", NodalCurve.nodal_cubic(F), q - 1)]
        if q >= 3:
            curves.append(("two-nodes", NodalCurve.two_nodes(F), (q - 1) ** 2))
        for name, Y, expected in curves:
            for d in (0, 1):
                rep.cases += 1
                got = len(pic_classes(Y, d))
                brute = pic_bruteforce(Y, d)
                counts[f"{name}/q={q}/d={d}"] = got
                if got != expected or got != brute:
                    rep.fail(f"{name}/q={q}/d={d}", f"pic_classes gives {got}, brute force {brute}, "
                                                   f"expected {expected}")
    rep.details["counts"] = counts


def run_suite(name: str, seed: int, cases: Optional[int] = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed, cases)
