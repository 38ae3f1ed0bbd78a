"""Dense exact matrices over a :class:`Field`.

Matrices are immutable; every operation returns a new matrix.  Row
reduction over GF(p) goes through the compiled kernel when it was built
(see :data:`KERNEL`), otherwise through the pure-Python twin.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import _kernels_py
from .field import Field

try:
    if os.environ.get("EXACTCAT_PURE_PYTHON"):
        raise ImportError("pure-python kernels requested")
    from . import _kernels as _fast  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _fast = None

#: Which kernel implementation backs GF(p) elimination: "cython" or "python".
KERNEL = "cython" if _fast is not None else "python"

# Below this many entries the list<->C copy costs more than it saves.
_FAST_THRESHOLD = 48


def _rref_modp(rows, p):
    if _fast is not None and rows and len(rows) * len(rows[0]) >= _FAST_THRESHOLD:
        return _fast.rref_modp(rows, p)
    return _kernels_py.rref_modp(rows, p)


def _matmul_modp(left, right, inner, ncols, p):
    if _fast is not None and len(left) * inner * ncols >= 4 * _FAST_THRESHOLD:
        return _fast.matmul_modp(left, right, inner, ncols, p)
    return _kernels_py.matmul_modp(left, right, inner, ncols, p)


def _rref_rational(rows):
    a = [list(r) for r in rows]
    m = len(a)
    if m == 0:
        return [], []
    n = len(a[0])
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if a[i][c]), -1)
        if piv < 0:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a, pivots


class Matrix:
    """A ``rows x cols`` matrix with entries in ``field``."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Iterable[Iterable], rows: Optional[int] = None,
                 cols: Optional[int] = None, *, _raw: bool = False):
        self.field = field
        if _raw:
            self.data = data
        else:
            self.data = tuple(tuple(field(x) for x in row) for row in data)
        self.rows = len(self.data) if rows is None else rows
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("ragged matrix data")

    # -- constructors ------------------------------------------------------
    @classmethod
    def raw(cls, field: Field, data, rows: int, cols: int) -> "Matrix":
        return cls(field, tuple(tuple(r) for r in data), rows, cols, _raw=True)

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, tuple((z,) * cols for _ in range(rows)), rows, cols, _raw=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)),
                   n, n, _raw=True)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = len(columns)
        data = tuple(tuple(columns[j][i] for j in range(cols)) for i in range(rows))
        return cls(field, data, rows, cols, _raw=True)

    @classmethod
    def column(cls, field: Field, values: Sequence) -> "Matrix":
        return cls(field, tuple((v,) for v in values), len(values), 1, _raw=True)

    # -- basic protocol ------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def entries(self) -> list:
        """Row-major flat list of entries."""
        return [x for row in self.data for x in row]

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.shape == other.shape and self.data == other.data)

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Matrix[{self.field!r}]({self.rows}x{self.cols}: {body})"

    def tolist(self) -> list:
        return [list(r) for r in self.data]

    def columns(self) -> list:
        return [tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    # -- arithmetic ----------------------------------------------------------
    def _check_same(self, other):
        if self.field != other.field or self.shape != other.shape:
            raise ValueError(f"shape/field mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        p = self.field.p
        if p:
            data = tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        else:
            data = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        return Matrix(self.field, data, self.rows, self.cols, _raw=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        p = self.field.p
        if p:
            data = tuple(tuple((a - b) % p for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        else:
            data = tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data))
        return Matrix(self.field, data, self.rows, self.cols, _raw=True)

    def __neg__(self) -> "Matrix":
        return self.scale(self.field(-1))

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        p = self.field.p
        if p:
            data = tuple(tuple((c * a) % p for a in r) for r in self.data)
        else:
            data = tuple(tuple(c * a for a in r) for r in self.data)
        return Matrix(self.field, data, self.rows, self.cols, _raw=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field or self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        if self.rows == 0 or other.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        if p:
            data = _matmul_modp(self.data, other.data, self.cols, other.cols, p)
        else:
            cols = other.columns()
            data = [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.data]
        return Matrix.raw(self.field, data, self.rows, other.cols)

    def apply(self, vec: Sequence) -> list:
        p = self.field.p
        out = []
        for r in self.data:
            s = sum(a * b for a, b in zip(r, vec))
            out.append(s % p if p else Fraction(s))
        return out

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)),
                      self.cols, self.rows, _raw=True)

    # -- assembly ------------------------------------------------------------
    @staticmethod
    def hstack(field: Field, blocks: Sequence["Matrix"], rows: Optional[int] = None) -> "Matrix":
        if not blocks:
            return Matrix.zeros(field, rows or 0, 0)
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack row mismatch")
        data = tuple(tuple(x for b in blocks for x in b.data[i]) for i in range(rows))
        return Matrix(field, data, rows, sum(b.cols for b in blocks), _raw=True)

    @staticmethod
    def vstack(field: Field, blocks: Sequence["Matrix"], cols: Optional[int] = None) -> "Matrix":
        if not blocks:
            return Matrix.zeros(field, 0, cols or 0)
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("vstack column mismatch")
        return Matrix(field, tuple(r for b in blocks for r in b.data),
                      sum(b.rows for b in blocks), cols, _raw=True)

    @staticmethod
    def block_diag(field: Field, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[field.zero] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.data):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return Matrix.raw(field, out, rows, cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, tuple(tuple(self.data[i][j] for j in cols) for i in rows),
                      len(rows), len(cols), _raw=True)

    # -- elimination ---------------------------------------------------------
    def rref(self):
        """Reduced row echelon form: ``(R, pivot_columns)``."""
        if self.rows == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, self.cols), []
        if self.field.p:
            data, piv = _rref_modp([list(r) for r in self.data], self.field.p)
        else:
            data, piv = _rref_rational(self.data)
        return Matrix.raw(self.field, data, self.rows, self.cols), piv

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "Matrix":
        """Kernel basis as columns, in reduced column echelon form."""
        return kernel_image(self)[0]

    def image(self) -> "Matrix":
        """Column-space basis as columns, in reduced column echelon form."""
        return kernel_image(self)[1]

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        aug = Matrix.hstack(self.field, [self, Matrix.identity(self.field, n)])
        r, piv = aug.rref()
        if [c for c in piv if c < n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return r.submatrix(range(n), range(n, 2 * n))

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def column_echelon(field: Field, vectors: Sequence[Sequence], dim: int) -> Matrix:
    """Canonical basis (reduced column echelon form) of the span of ``vectors``."""
    if not vectors:
        return Matrix.zeros(field, dim, 0)
    r, piv = Matrix.raw(field, [list(v) for v in vectors], len(vectors), dim).rref()
    return Matrix.from_columns(field, [r.data[i] for i in range(len(piv))], dim)


def kernel_image(m: Matrix):
    """``(kernel_basis, image_basis, rank)``; both bases canonical column echelon."""
    f = m.field
    r, piv = m.rref()
    rank = len(piv)
    pivset = set(piv)
    kvecs = []
    for fc in range(m.cols):
        if fc in pivset:
            continue
        v = [f.zero] * m.cols
        v[fc] = f.one
        for i, pc in enumerate(piv):
            v[pc] = f.neg(r.data[i][fc])
        kvecs.append(v)
    K = column_echelon(f, kvecs, m.cols)
    image = column_echelon(f, m.columns(), m.rows) if rank else Matrix.zeros(f, m.rows, 0)
    return K, image, rank


def solve_affine(A: Matrix, b: Matrix):
    """Solve ``A x = b`` for a single column ``b``.

    Returns ``(x, nullspace_basis)`` with ``x`` a column matrix, or ``None``
    when the system is inconsistent.
    """
    if b.cols != 1 or b.rows != A.rows:
        raise ValueError(f"dimension mismatch: A is {A.shape}, b is {b.shape}")
    f = A.field
    n = A.cols
    aug = Matrix.hstack(f, [A, b]) if A.rows else Matrix.zeros(f, 0, n + 1)
    r, piv = aug.rref()
    if piv and piv[-1] == n:
        return None
    x = [f.zero] * n
    for i, pc in enumerate(piv):
        x[pc] = r.data[i][n]
    return Matrix.column(f, x), kernel_image(A)[0]


def solve_many(A: Matrix, b: Sequence) -> Optional[list]:
    """Particular solution of ``A x = b`` (``b`` a flat sequence) or ``None``."""
    f = A.field
    n = A.cols
    if A.rows == 0:
        return [f.zero] * n
    data = [list(row) + [bi] for row, bi in zip(A.data, b)]
    r, piv = Matrix.raw(f, data, A.rows, n + 1).rref()
    if piv and piv[-1] == n:
        return None
    x = [f.zero] * n
    for i, pc in enumerate(piv):
        x[pc] = r.data[i][n]
    return x


class IncrementalSpan:
    """Growing subspace of ``field^dim`` with cheap membership tests."""

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self._rows: dict = {}  # pivot column -> normalized row

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence) -> list:
        f = self.field
        p = f.p
        w = list(v)
        for c, row in self._rows.items():
            x = w[c]
            if x:
                if p:
                    w = [(a - x * b) % p for a, b in zip(w, row)]
                else:
                    w = [a - x * b for a, b in zip(w, row)]
        return w

    def add(self, v: Sequence) -> bool:
        """Add ``v``; return True if it enlarged the span."""
        w = self.reduce(v)
        c = next((i for i, x in enumerate(w) if x), None)
        if c is None:
            return False
        f = self.field
        inv = f.inv(w[c])
        w = [f.mul(x, inv) for x in w]
        p = f.p
        for k, row in list(self._rows.items()):
            x = row[c]
            if x:
                self._rows[k] = [(a - x * b) % p for a, b in zip(row, w)] if p else [a - x * b for a, b in zip(row, w)]
        self._rows[c] = w
        return True

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))
