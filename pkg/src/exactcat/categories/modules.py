"""Abelian backends whose morphisms are plain matrices over k.

:class:`FinVect` is finite-dimensional vector spaces.  :class:`DualMod`
is finitely generated modules over the dual numbers k[e]/(e^2), each
normalized to ``k[e]^a + k^b``.  Both are abelian, so every monomorphism
and epimorphism is admissible.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..linalg import IncrementalSpan, Matrix, solve_many
from ..linalg.matrix import kernel_image
from .base import AdmissibleFactorization, Backend, Classification, Morphism, NotAdmissible


@dataclass(frozen=True)
class _MatrixBackend(Backend):
    """Shared plumbing; morphism data is a ``dim(y) x dim(x)`` Matrix."""

    def dim(self, key) -> int:
        raise NotImplementedError

    def size(self, key) -> int:
        return self.dim(key)

    def _normalize(self, op: Matrix):
        """Given the action of the ring on a subquotient, return ``(key, T)``
        with ``T`` a basis change putting it in normal form."""
        raise NotImplementedError

    # -- primitives ----------------------------------------------------------
    def _compose(self, gd, fd, xk, yk, zk):
        return gd @ fd

    def _add(self, d1, d2, xk, yk):
        return d1 + d2

    def _scale(self, c, d, xk, yk):
        return d.scale(c)

    def _zero(self, xk, yk):
        return Matrix.zeros(self.field, self.dim(yk), self.dim(xk))

    def _identity(self, xk):
        return Matrix.identity(self.field, self.dim(xk))

    def _flatten(self, d, xk, yk):
        return d.entries

    def matrix(self, x, y, rows) -> Morphism:
        m = Matrix(self.field, rows, self.dim(y.key), self.dim(x.key)) if not isinstance(rows, Matrix) else rows
        if m.shape != (self.dim(y.key), self.dim(x.key)):
            raise ValueError(f"matrix shape {m.shape} does not fit {x} -> {y}")
        f = Morphism(x, y, m)
        self.check_morphism(f)
        return f

    def check_morphism(self, f: Morphism):
        pass

    def describe_data(self, f):
        return repr(f.data)

    # -- exact structure (abelian) -----------------------------------------
    def kernel(self, f: Morphism) -> Morphism:
        K = f.data.kernel()
        return self._sub_inclusion(f.source, K)

    def _sub_inclusion(self, x, K: Matrix) -> Morphism:
        op = self._action_on_sub(x.key, K)
        key, T = self._normalize(op)
        return Morphism(self.obj(key), x, K @ T)

    def _action_on_sub(self, xk, K: Matrix):
        return None

    def _action_on_quotient(self, xk, C: Matrix):
        return None

    def cokernel(self, f: Morphism) -> Morphism:
        """Projection onto the cokernel (every map has one here)."""
        C = f.data.T.kernel().T  # rows span the annihilator of the image
        op = self._action_on_quotient(f.target.key, C)
        key, T = self._normalize(op)
        return Morphism(f.target, self.obj(key), T.inverse() @ C)

    def classify(self, f: Morphism) -> Classification:
        _, _, r = kernel_image(f.data)
        m, n = f.data.shape
        inj, surj = r == n, r == m
        if inj and surj:
            return Classification("iso", f, inverse=Morphism(f.target, f.source, f.data.inverse()))
        if inj:
            return Classification("admissible-mono", f, cokernel=self.cokernel(f))
        if surj:
            return Classification("admissible-epi", f, kernel=self.kernel(f))
        return Classification("neither", f, obstruction=f"rank {r} map is neither injective nor surjective")


@dataclass(frozen=True)
class FinVect(_MatrixBackend):
    """Finite-dimensional vector spaces; an object key is its dimension."""

    name = "finvect"

    def describe(self, key):
        return f"k^{key}"

    def zero_key(self):
        return 0

    def dim(self, key):
        return key

    def space(self, n: int):
        if n < 0:
            raise ValueError("dimension must be non-negative")
        return self.obj(int(n))

    def _hom_basis_data(self, xk, yk):
        F = self.field
        out = []
        for i in range(yk):
            for j in range(xk):
                rows = [[F.zero] * xk for _ in range(yk)]
                rows[i][j] = F.one
                out.append(Matrix.raw(F, rows, yk, xk))
        return out

    def coords(self, f):
        return f.data.entries

    def _direct_sum(self, keys):
        F = self.field
        n = sum(keys)
        inj, proj = [], []
        off = 0
        for k in keys:
            i = [[F.one if r == off + c else F.zero for c in range(k)] for r in range(n)]
            I = Matrix.raw(F, i, n, k)
            inj.append(I)
            proj.append(I.T)
            off += k
        return n, inj, proj

    def _normalize(self, op):
        raise AssertionError("unreachable")

    def _sub_inclusion(self, x, K):
        return Morphism(self.obj(K.cols), x, K)

    def cokernel(self, f):
        C = f.data.T.kernel().T
        return Morphism(f.target, self.obj(C.rows), C)

    def projective_cover(self, x):
        return self.identity(x)

    def admissible_factorization(self, f):
        """Factor through the image, with its reduced column echelon basis."""
        _, I, r = kernel_image(f.data)
        mid = self.obj(r)
        mono = Morphism(mid, f.target, I)
        epi = self.factor_through_mono(f, mono)
        return AdmissibleFactorization(epi, mono)


def eps_matrix(field, key) -> Matrix:
    """Action of e on ``k[e]^a + k^b`` in the standard basis."""
    a, b = key
    n = 2 * a + b
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(a):
        rows[2 * i + 1][2 * i] = field.one
    return Matrix.raw(field, rows, n, n)


def normalize_dual(field, E: Matrix):
    """Normal form of a k[e]-module given by a square ``E`` with ``E^2 = 0``.

    Returns ``(a, b, T)`` where the columns of ``T`` are
    ``v_1, E v_1, ..., v_a, E v_a, w_1..w_b``, so ``T^-1 E T`` is the
    standard action on ``k[e]^a + k^b``.
    """
    n = E.rows
    if not (E @ E).is_zero():
        raise ValueError("operator does not square to zero")
    K, _, rank = kernel_image(E)
    span = IncrementalSpan(field, n)
    for col in K.columns():
        span.add(col)
    unit = [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]
    vs = [u for u in unit if span.add(u)]
    cols = []
    soc = IncrementalSpan(field, n)
    for v in vs:
        ev = E.apply(v)
        cols += [v, ev]
        soc.add(ev)
    for c in K.columns():
        if soc.add(c):
            cols.append(list(c))
    a = len(vs)
    return a, n - 2 * a, Matrix.from_columns(field, cols, n)


@dataclass(frozen=True)
class DualMod(_MatrixBackend):
    """Finitely generated modules over k[e]/(e^2); key ``(a, b)`` is ``k[e]^a + k^b``."""

    name = "dualmod"

    def describe(self, key):
        a, b = key
        return f"k[e]^{a}+k^{b}"

    def zero_key(self):
        return (0, 0)

    def dim(self, key):
        return 2 * key[0] + key[1]

    def module(self, free: int, socle: int):
        if free < 0 or socle < 0:
            raise ValueError("module shape must be non-negative")
        return self.obj((int(free), int(socle)))

    def eps(self, key) -> Matrix:
        return eps_matrix(self.field, key)

    def check_morphism(self, f):
        d = f.data
        if self.eps(f.target.key) @ d != d @ self.eps(f.source.key):
            raise ValueError(f"matrix does not commute with e: {d}")

    def _hom_basis_data(self, xk, yk):
        F = self.field
        n, m = self.dim(xk), self.dim(yk)
        Ex, Ey = self.eps(xk), self.eps(yk)
        # X -> Ey X - X Ex on row-major coordinates of X (m x n)
        cols = []
        for i in range(m):
            for j in range(n):
                rows = [[F.zero] * n for _ in range(m)]
                rows[i][j] = F.one
                X = Matrix.raw(F, rows, m, n)
                cols.append((Ey @ X - X @ Ex).entries)
        L = Matrix.from_columns(F, cols, m * n)
        K = L.kernel()
        return [Matrix.raw(F, [c[i * n:(i + 1) * n] for i in range(m)], m, n) for c in K.columns()]

    def _direct_sum(self, keys):
        F = self.field
        A = sum(k[0] for k in keys)
        B = sum(k[1] for k in keys)
        n = 2 * A + B
        inj, proj = [], []
        fa = 0
        sb = 2 * A
        for a, b in keys:
            d = 2 * a + b
            rows = [[F.zero] * d for _ in range(n)]
            for c in range(2 * a):
                rows[2 * fa + c][c] = F.one
            for c in range(b):
                rows[sb + c][2 * a + c] = F.one
            I = Matrix.raw(F, rows, n, d)
            inj.append(I)
            proj.append(I.T)
            fa += a
            sb += b
        return (A, B), inj, proj

    def _normalize(self, op):
        a, b, T = normalize_dual(self.field, op)
        return (a, b), T

    def _action_on_sub(self, xk, K):
        E = self.eps(xk)
        F = self.field
        EK = E @ K
        cols = []
        for col in EK.columns():
            x = solve_many(K, list(col))
            if x is None:  # pragma: no cover - kernels of module maps are submodules
                raise NotAdmissible("subspace is not a submodule")
            cols.append(x)
        return Matrix.from_columns(F, cols, K.cols)

    def _action_on_quotient(self, yk, C):
        # Y with C E = Y C; solve row by row: C^T Y^T = (C E)^T
        E = self.eps(yk)
        F = self.field
        CE = E.T @ C.T  # columns are rows of C E
        cols = []
        for col in CE.columns():
            x = solve_many(C.T, list(col))
            cols.append(x)
        return Matrix.from_columns(F, cols, C.rows).T

    def projective_cover(self, x) -> Morphism:
        """Free module mapping onto ``x`` with minimal rank."""
        F = self.field
        a, b = x.key
        P = self.obj((a + b, 0))
        n = self.dim(x.key)
        rows = [[F.zero] * (2 * (a + b)) for _ in range(n)]
        for i in range(a):
            rows[2 * i][2 * i] = F.one
            rows[2 * i + 1][2 * i + 1] = F.one
        for j in range(b):
            rows[2 * a + j][2 * (a + j)] = F.one
        return Morphism(P, x, Matrix.raw(F, rows, n, 2 * (a + b)))
