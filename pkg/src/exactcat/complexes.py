"""Bounded cochain complexes over an exact category.

Conventions: ``cone(f)^i = Y^i + X^{i+1}`` with ``d(y, x) = (d y + f x, -d x)``;
``X[k]^i = X^{i+k}`` with differential ``(-1)^k d``; a homotopy ``h`` from
``f`` to ``g`` has ``h^i : X^i -> Y^{i-1}`` and
``f - g = d h + h d`` degreewise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .categories.base import Backend, Equation, Morphism, Obj
from .categories.split import SplitExact
from .errors import ExactCatError, NotAdmissible


class NotAcyclic(ExactCatError):
    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class NotSplitAcyclic(NotAcyclic):
    pass


class NotExactOutsideWindow(ExactCatError):
    def __init__(self, message, degree):
        super().__init__(message)
        self.degree = degree


class Complex:
    """A bounded complex ``X^lo -> ... -> X^hi``; zero outside."""

    __slots__ = ("backend", "lo", "objs", "diffs")

    def __init__(self, backend: Backend, lo: int, objs: Sequence[Obj], diffs: Sequence[Morphism],
                 check: bool = True):
        self.backend = backend
        self.lo = int(lo)
        self.objs = tuple(objs)
        self.diffs = tuple(diffs)
        if len(self.diffs) != max(0, len(self.objs) - 1):
            raise ValueError("need one differential between consecutive entries")
        if check:
            self.validate()

    def validate(self):
        for k, d in enumerate(self.diffs):
            if d.source != self.objs[k] or d.target != self.objs[k + 1]:
                raise ValueError(f"differential {self.lo + k} has the wrong source or target")
        for k in range(len(self.diffs) - 1):
            if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                raise ValueError(f"d^{self.lo + k + 1} d^{self.lo + k} is not zero")

    @classmethod
    def zero(cls, backend: Backend) -> "Complex":
        return cls(backend, 0, (), ())

    @classmethod
    def single(cls, x: Obj, degree: int = 0) -> "Complex":
        return cls(x.backend, degree, (x,), ())

    @classmethod
    def from_maps(cls, lo: int, maps: Sequence[Morphism], backend: Optional[Backend] = None) -> "Complex":
        if not maps:
            raise ValueError("from_maps needs at least one map; use single()")
        objs = [maps[0].source] + [m.target for m in maps]
        return cls(backend or maps[0].backend, lo, objs, maps)

    @property
    def hi(self) -> int:
        return self.lo + len(self.objs) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __getitem__(self, i: int) -> Obj:
        if self.lo <= i <= self.hi:
            return self.objs[i - self.lo]
        return self.backend.zero_object()

    def d(self, i: int) -> Morphism:
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return self.backend.zero(self[i], self[i + 1])

    def is_zero(self) -> bool:
        return all(x.is_zero for x in self.objs)

    def support(self):
        """Smallest interval containing the nonzero entries, or None."""
        nz = [i for i in self.degrees if not self[i].is_zero]
        return (nz[0], nz[-1]) if nz else None

    def trimmed(self) -> "Complex":
        s = self.support()
        if s is None:
            return Complex.zero(self.backend)
        return self.restrict(*s)

    def restrict(self, a: int, b: int) -> "Complex":
        """Brutal truncation to degrees ``[a, b]`` (entries outside dropped)."""
        if b < a:
            return Complex.zero(self.backend)
        return Complex(self.backend, a, [self[i] for i in range(a, b + 1)],
                       [self.d(i) for i in range(a, b)], check=False)

    def extend(self, a: int, b: int) -> "Complex":
        """Same complex, padded with zeros to cover ``[a, b]``."""
        a, b = min(a, self.lo), max(b, self.hi) if self.objs else b
        if not self.objs:
            a = min(a, b)
        return self.restrict(a, b)

    def shift(self, k: int = 1) -> "Complex":
        sign = -1 if k % 2 else 1
        return Complex(self.backend, self.lo - k, self.objs, [d.scale(sign) for d in self.diffs], check=False)

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {i: self.backend.identity(self[i]) for i in self.degrees})

    def zero_map(self, other: "Complex") -> "ChainMap":
        return ChainMap(self, other, {})

    def total_size(self) -> int:
        return sum(x.size for x in self.objs)

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.backend == b.backend and a.lo == b.lo and a.objs == b.objs and a.diffs == b.diffs

    def __hash__(self):
        t = self.trimmed()
        return hash((t.lo, t.objs))

    def __repr__(self):
        if not self.objs:
            return "Complex(0)"
        parts = [f"{self.lo}:{self.objs[0]!r}"]
        for k, d in enumerate(self.diffs):
            parts.append(f"--{self.backend.describe_data(d)}--> {self.lo + k + 1}:{self.objs[k + 1]!r}")
        return "Complex(" + " ".join(parts) + ")"


def direct_sum(a: Complex, b: Complex) -> tuple:
    """``(S, in_a, in_b, pr_a, pr_b)`` for the degreewise biproduct."""
    B = a.backend
    if not a.objs:
        a = a.extend(b.lo, b.lo)
    if not b.objs:
        b = b.extend(a.lo, a.lo)
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    objs, ia, ib, pa, pb = [], {}, {}, {}, {}
    for i in range(lo, hi + 1):
        S, (i1, i2), (p1, p2) = B.direct_sum([a[i], b[i]])
        objs.append(S)
        ia[i], ib[i], pa[i], pb[i] = i1, i2, p1, p2
    diffs = [ia[i + 1] @ a.d(i) @ pa[i] + ib[i + 1] @ b.d(i) @ pb[i] for i in range(lo, hi)]
    S = Complex(B, lo, objs, diffs, check=False)
    return S, ChainMap(a, S, ia), ChainMap(b, S, ib), ChainMap(S, a, pa), ChainMap(S, b, pb)


class ChainMap:
    """Degreewise morphisms ``source^i -> target^i``; missing degrees are zero."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Complex, target: Complex, comps: Dict[int, Morphism], check: bool = True):
        self.source = source
        self.target = target
        self.comps = {}
        for i, m in comps.items():
            if m.source != source[i] or m.target != target[i]:
                raise ValueError(f"component {i} has the wrong source or target")
            if not m.is_zero():
                self.comps[i] = m
        if check:
            self.validate()

    @property
    def backend(self):
        return self.source.backend

    def __getitem__(self, i) -> Morphism:
        m = self.comps.get(i)
        if m is None:
            return self.backend.zero(self.source[i], self.target[i])
        return m

    @property
    def degrees(self) -> range:
        lo = min(self.source.lo if self.source.objs else self.target.lo,
                 self.target.lo if self.target.objs else self.source.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def commutation_defect(self) -> list:
        out = []
        r = self.degrees
        for i in range(min(r.start, r.stop) - 1, r.stop):
            diff = self.target.d(i) @ self[i] - self[i + 1] @ self.source.d(i)
            if not diff.is_zero():
                out.append(i)
        return out

    def validate(self):
        bad = self.commutation_defect()
        if bad:
            raise ValueError(f"chain map squares fail to commute at degrees {bad}")

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target.trimmed() != self.source.trimmed():
            raise ValueError("cannot compose chain maps with mismatched complexes")
        comps = {i: self[i] @ other[i] for i in set(self.comps) & set(other.comps)}
        return ChainMap(other.source, self.target, comps, check=False)

    def _combine(self, other, sign):
        if (self.source.trimmed(), self.target.trimmed()) != (other.source.trimmed(), other.target.trimmed()):
            raise ValueError("chain maps between different complexes")
        comps = dict(self.comps)
        for i, m in other.comps.items():
            m = m if sign == 1 else -m
            comps[i] = comps[i] + m if i in comps else m
        return ChainMap(self.source, self.target, comps, check=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: m.scale(c) for i, m in self.comps.items()}, check=False)

    def is_zero(self) -> bool:
        return not self.comps

    def shift(self, k: int = 1) -> "ChainMap":
        return ChainMap(self.source.shift(k), self.target.shift(k),
                        {i - k: m for i, m in self.comps.items()}, check=False)

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        keys = set(self.comps) | set(other.comps)
        return all(self[i] == other[i] for i in keys)

    def __repr__(self):
        return f"ChainMap({ {i: self.backend.describe_data(m) for i, m in sorted(self.comps.items())} })"


@dataclass
class Homotopy:
    """Witness ``f - g = d h + h d``; ``maps[i] : source^i -> target^{i-1}``."""

    f: ChainMap
    g: ChainMap
    maps: Dict[int, Morphism] = field(default_factory=dict)

    def __getitem__(self, i) -> Morphism:
        m = self.maps.get(i)
        if m is None:
            B = self.f.backend
            return B.zero(self.f.source[i], self.f.target[i - 1])
        return m

    def defect(self) -> list:
        """Degrees where the homotopy identity fails."""
        f, g = self.f, self.g
        X, Y = f.source, f.target
        bad = []
        lo = min(X.lo, Y.lo) - 1
        hi = max(X.hi, Y.hi) + 1
        for i in range(lo, hi + 1):
            lhs = f[i] - g[i]
            rhs = Y.d(i - 1) @ self[i] + self[i + 1] @ X.d(i)
            if lhs != rhs:
                bad.append(i)
        return bad

    def is_valid(self) -> bool:
        return not self.defect()

    def __add__(self, other: "Homotopy") -> "Homotopy":
        """Homotopies ``f~g`` and ``g~h`` give ``f~h``."""
        maps = dict(self.maps)
        for i, m in other.maps.items():
            maps[i] = maps[i] + m if i in maps else m
        return Homotopy(self.f, other.g, maps)

    def compose_left(self, k: ChainMap) -> "Homotopy":
        """Homotopy ``k f ~ k g``."""
        return Homotopy(k @ self.f, k @ self.g, {i: k[i - 1] @ m for i, m in self.maps.items()})

    def compose_right(self, k: ChainMap) -> "Homotopy":
        """Homotopy ``f k ~ g k``."""
        return Homotopy(self.f @ k, self.g @ k, {i: self[i] @ k[i] for i in k.comps if i in self.maps})


# -- cones and homotopies ---------------------------------------------------------

@dataclass
class Cone:
    complex: Complex
    incl: ChainMap  # Y -> cone
    proj: ChainMap  # cone -> X[1]
    inj_y: dict = field(default_factory=dict)  # degree -> Y^i -> cone^i
    inj_x: dict = field(default_factory=dict)  # degree -> X^{i+1} -> cone^i
    pr_y: dict = field(default_factory=dict)
    pr_x: dict = field(default_factory=dict)


def cone(f: ChainMap) -> Cone:
    X, Y = f.source, f.target
    B = X.backend
    degs = [i for i in range(min(X.lo - 1, Y.lo), max(X.hi - 1, Y.hi) + 1)]
    if not X.objs and not Y.objs:
        Z = Complex.zero(B)
        return Cone(Z, ChainMap(Y, Z, {}), ChainMap(Z, X.shift(1), {}))
    objs, iy, ix, py, px = [], {}, {}, {}, {}
    for i in degs:
        S, (a, b), (c, d) = B.direct_sum([Y[i], X[i + 1]])
        objs.append(S)
        iy[i], ix[i], py[i], px[i] = a, b, c, d
    diffs = []
    for i in degs[:-1]:
        d = (iy[i + 1] @ Y.d(i) @ py[i] + iy[i + 1] @ f[i + 1] @ px[i]
             - ix[i + 1] @ X.d(i + 1) @ px[i])
        diffs.append(d)
    C = Complex(B, degs[0], objs, diffs, check=False)
    incl = ChainMap(Y, C, {i: iy[i] for i in degs}, check=False)
    proj = ChainMap(C, X.shift(1), {i: px[i] for i in degs}, check=False)
    return Cone(C, incl, proj, iy, ix, py, px)


def find_homotopy(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    """A homotopy ``f ~ g`` from one global linear solve, or None."""
    X, Y = f.source, f.target
    if (X.trimmed(), Y.trimmed()) != (g.source.trimmed(), g.target.trimmed()):
        raise ValueError("find_homotopy needs maps between the same complexes")
    B = X.backend
    diff = f - g
    if diff.is_zero():
        return Homotopy(f, g, {})
    lo = min(X.lo if X.objs else Y.lo, Y.lo if Y.objs else X.lo)
    hi = max(X.hi, Y.hi)
    hdeg = [i for i in range(lo, hi + 2) if not X[i].is_zero and not Y[i - 1].is_zero]
    idx = {i: k for k, i in enumerate(hdeg)}
    unknowns = [(X[i], Y[i - 1]) for i in hdeg]
    eqs = []
    for i in range(lo, hi + 1):
        if X[i].is_zero or Y[i].is_zero:
            continue
        terms = []
        if i in idx and not Y.d(i - 1).is_zero():
            terms.append((idx[i], Y.d(i - 1), None))
        if i + 1 in idx and not X.d(i).is_zero():
            terms.append((idx[i + 1], None, X.d(i)))
        eqs.append(Equation(X[i], Y[i], terms, diff[i]))
    sol = B.solve(unknowns, eqs)
    if sol is None:
        return None
    h = Homotopy(f, g, {i: m for i, m in zip(hdeg, sol) if not m.is_zero()})
    if not h.is_valid():  # pragma: no cover - the solve is exact
        raise AssertionError("homotopy solve returned an invalid witness")
    return h


def is_contractible(c: Complex) -> Optional[Homotopy]:
    """Null-homotopy of the identity, or None."""
    return find_homotopy(c.identity(), c.zero_map(c))


# -- acyclicity ---------------------------------------------------------------------

@dataclass
class AcyclicityWitness:
    """``d^i = alpha[i+1] beta[i]`` with ``alpha[i] : K[i] -> X^i`` admissible
    mono and ``beta[i] : X^i -> K[i+1]`` admissible epi."""

    complex: Complex
    K: Dict[int, Obj]
    alpha: Dict[int, Morphism]
    beta: Dict[int, Morphism]

    def __bool__(self):
        return True

    def factorization(self, i: int):
        return self.alpha[i + 1], self.beta[i]

    def verify(self) -> bool:
        c = self.complex
        B = c.backend
        for i in c.degrees:
            if self.alpha[i + 1] @ self.beta[i] != c.d(i):
                return False
            if i in self.alpha and not self.K[i].is_zero and not B.classify(self.alpha[i]).is_admissible_mono:
                return False
            if not self.K[i + 1].is_zero and not B.classify(self.beta[i]).is_admissible_epi:
                return False
        return self.K.get(c.lo, B.zero_object()).is_zero and self.K[c.hi + 1].is_zero


@dataclass
class Obstruction:
    degree: int
    reason: str
    kind: str = "not-exact"  # or "not-admissible"

    def __bool__(self):
        return False


def is_acyclic(c: Complex):
    """Build the factorizations left to right; return a witness or an :class:`Obstruction`."""
    B = c.backend
    if not c.objs:
        return AcyclicityWitness(c, {0: B.zero_object(), 1: B.zero_object()}, {}, {})
    K: Dict[int, Obj] = {c.lo: B.zero_object()}
    alpha = {c.lo: B.zero(B.zero_object(), c[c.lo])}
    beta: Dict[int, Morphism] = {}
    coker = None  # cokernel projection of alpha[i], when already known
    for i in c.degrees:
        if K[i].is_zero:
            beta_i = B.identity(c[i])
        elif coker is not None:
            beta_i = coker
        else:
            beta_i = B.cokernel(alpha[i])
        beta[i] = beta_i
        d = c.d(i)
        m = B.factor_through_epi(d, beta_i)
        if m is None:
            return Obstruction(i, f"d^{i} does not vanish on the image of d^{i - 1}")
        if i == c.hi:
            if not beta_i.target.is_zero:
                return Obstruction(i, f"not exact at degree {i}: the last differential is not an admissible epimorphism")
            K[i + 1] = beta_i.target
            alpha[i + 1] = m
            break
        if beta_i.target.is_zero:
            K[i + 1] = beta_i.target
            alpha[i + 1] = m
            coker = None
            continue
        try:
            cls = B.classify(m)
        except NotAdmissible as exc:
            return Obstruction(i + 1, f"image of d^{i}: {exc}", "not-admissible")
        if not cls.is_admissible_mono:
            kind, why = _mono_failure(B, m, cls, i)
            return Obstruction(i if kind == "not-exact" else i + 1, why, kind)
        K[i + 1] = beta_i.target
        alpha[i + 1] = m
        # the cokernel of an isomorphism is zero
        coker = B.zero(c[i + 1], B.zero_object()) if cls.is_iso else cls.cokernel
    return AcyclicityWitness(c, K, alpha, beta)


def _mono_failure(B, m, cls, i):
    try:
        injective = B.kernel(m).source.is_zero
    except NotAdmissible:
        injective = False
    if not injective:
        return "not-exact", f"not exact at degree {i}: ker d^{i} is larger than im d^{i - 1}"
    return "not-admissible", (f"exact at degree {i}, but d^{i} is not an admissible morphism: "
                              f"{cls.obstruction}")


# -- split structure -----------------------------------------------------------------

@dataclass
class SplitDecomposition:
    """``E^i = K^i + K^{i+1}`` via ``alpha[i]``, ``section[i]`` with
    retraction ``retract[i]``; ``contraction`` is a null-homotopy of the identity."""

    complex: Complex
    K: Dict[int, Obj]
    alpha: Dict[int, Morphism]
    beta: Dict[int, Morphism]
    retract: Dict[int, Morphism]
    section: Dict[int, Morphism]
    contraction: Homotopy

    @property
    def pieces(self) -> List[Obj]:
        return [self.K[i] for i in sorted(self.K) if not self.K[i].is_zero]


def split_contractible(c: Complex) -> SplitDecomposition:
    B = c.backend
    if not isinstance(B, SplitExact):
        raise TypeError("split_contractible needs a complex over a split exact structure")
    w = is_acyclic(c)
    if not w:
        raise NotSplitAcyclic(f"not acyclic in the split structure: degree {w.degree}: {w.reason}", w)
    retract, section, hmaps = {}, {}, {}
    for i in c.degrees:
        a, b = w.alpha[i], w.beta[i]
        r = B.left_inverse(a) if not w.K[i].is_zero else B.zero(c[i], w.K[i])
        s = B.right_inverse(b) if not w.K[i + 1].is_zero else B.zero(w.K[i + 1], c[i])
        if r is None or s is None:  # pragma: no cover - classify already found them
            raise NotSplitAcyclic(f"degree {i} does not split")
        s = s - a @ r @ s
        retract[i], section[i] = r, s
    for i in c.degrees:
        if i - 1 in section:
            h = section[i - 1] @ retract[i]
            if not h.is_zero():
                hmaps[i] = h
    ident = c.identity()
    contraction = Homotopy(ident, c.zero_map(c), hmaps)
    if not contraction.is_valid():  # pragma: no cover
        raise AssertionError("split contraction failed to validate")
    return SplitDecomposition(c, w.K, w.alpha, w.beta, retract, section, contraction)


# -- support truncation -----------------------------------------------------------------

@dataclass
class SupportTruncation:
    """``result`` lives in ``[a, b]``; the roof ``c <- middle -> result``
    consists of chain maps with acyclic cones."""

    result: Complex
    middle: Complex
    to_original: ChainMap
    to_result: ChainMap
    cone_witnesses: list


def support_truncate(c: Complex, a: int, b: int) -> SupportTruncation:
    B = c.backend
    if b < a:
        raise ValueError("empty window")
    s = c.support()
    if s is None or (a <= s[0] and s[1] <= b):
        t = c if s is None else c
        return SupportTruncation(t, t, t.identity(), t.identity(), [])
    lo, hi = s
    c = c.restrict(lo, hi)
    # top: replace c^b by the cycles Z^b and check exactness above b
    top = c
    to_c = c.identity()
    if hi > b:
        if lo > b:
            raise NotExactOutsideWindow("nothing of the complex lies in the window and it is not zero", lo)
        z = B.kernel(c.d(b)) if b >= lo else None
        if z is None:
            tail = c.restrict(lo, hi)
            w = is_acyclic(tail)
        else:
            tail = Complex(B, b - 1, [z.source] + [c[i] for i in range(b, hi + 1)],
                           [z] + [c.d(i) for i in range(b, hi)], check=False)
            w = is_acyclic(tail)
        if not w:
            raise NotExactOutsideWindow(f"not exact above the window at degree {w.degree}: {w.reason}", w.degree)
        objs = [c[i] for i in range(lo, b)] + [z.source]
        diffs = [c.d(i) for i in range(lo, b - 1)]
        if b - 1 >= lo:
            m = B.factor_through_mono(c.d(b - 1), z)
            diffs.append(m)
        top = Complex(B, lo, objs, diffs)
        comps = {i: B.identity(c[i]) for i in range(lo, b)}
        comps[b] = z
        to_c = ChainMap(top, c, comps)
        hi = b
    mid = top
    to_res = top.identity()
    result = top
    if lo < a:
        head = Complex(B, lo, [top[i] for i in range(lo, a + 1)], [top.d(i) for i in range(lo, a)], check=False)
        w = _left_factorizations(head, a)
        if isinstance(w, Obstruction):
            raise NotExactOutsideWindow(f"not exact below the window at degree {w.degree}: {w.reason}", w.degree)
        q = B.cokernel(w) if not w.source.is_zero else B.identity(top[a])
        objs = [q.target] + [top[i] for i in range(a + 1, hi + 1)]
        diffs = []
        if hi > a:
            diffs.append(B.factor_through_epi(top.d(a), q))
            diffs += [top.d(i) for i in range(a + 1, hi)]
        result = Complex(B, a, objs, diffs)
        comps = {i: B.identity(top[i]) for i in range(a + 1, hi + 1)}
        comps[a] = q
        to_res = ChainMap(top, result, comps)
    witnesses = []
    for m in (to_c, to_res):
        cw = is_acyclic(cone(m).complex)
        if not cw:  # pragma: no cover - the construction guarantees it
            raise AssertionError(f"support truncation cone is not acyclic: {cw.reason}")
        witnesses.append(cw)
    return SupportTruncation(result, mid, to_c, to_res, witnesses)


def _left_factorizations(head: Complex, a: int):
    """Run the acyclicity sweep on ``head`` up to degree ``a``; return the
    admissible mono ``K^a -> head^a`` or an Obstruction."""
    B = head.backend
    K = B.zero_object()
    alpha = B.zero(K, head[head.lo])
    for i in range(head.lo, a):
        beta = B.identity(head[i]) if K.is_zero else B.cokernel(alpha)
        m = B.factor_through_epi(head.d(i), beta)
        if m is None:
            return Obstruction(i, "not a complex")
        if beta.target.is_zero:
            K, alpha = beta.target, m
            continue
        try:
            cls = B.classify(m)
        except NotAdmissible as exc:
            return Obstruction(i + 1, str(exc), "not-admissible")
        if not cls.is_admissible_mono:
            kind, why = _mono_failure(B, m, cls, i)
            return Obstruction(i if kind == "not-exact" else i + 1, why, kind)
        K, alpha = beta.target, m
    return alpha
