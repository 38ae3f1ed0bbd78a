# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p kernels: in-place reduced row echelon form and matmul."""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef i64 _inv(i64 a, i64 p):
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(list rows, long long p):
    """Row-reduce ``rows`` (list of int lists, entries in [0, p)) over GF(p).

    Returns ``(reduced_rows, pivot_columns)``.
    """
    cdef Py_ssize_t m = len(rows)
    if m == 0:
        return [], []
    cdef Py_ssize_t n = len(rows[0])
    cdef i64* a = <i64*> malloc(m * n * sizeof(i64))
    if a == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, c, r = 0, piv
    cdef i64 inv, f, tmp
    pivots = []
    try:
        for i in range(m):
            row = rows[i]
            for j in range(n):
                a[i * n + j] = row[j]
        for c in range(n):
            if r == m:
                break
            piv = -1
            for i in range(r, m):
                if a[i * n + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(n):
                    tmp = a[piv * n + j]
                    a[piv * n + j] = a[r * n + j]
                    a[r * n + j] = tmp
            inv = _inv(a[r * n + c], p)
            for j in range(c, n):
                a[r * n + j] = (a[r * n + j] * inv) % p
            for i in range(m):
                if i != r:
                    f = a[i * n + c]
                    if f != 0:
                        f = p - f
                        for j in range(c, n):
                            if a[r * n + j] != 0:
                                a[i * n + j] = (a[i * n + j] + f * a[r * n + j]) % p
            pivots.append(c)
            r += 1
        out = [[a[i * n + j] for j in range(n)] for i in range(m)]
    finally:
        free(a)
    return out, pivots


def matmul_modp(left, right, Py_ssize_t inner, Py_ssize_t ncols, long long p):
    """Product of two int matrices (lists of rows) over GF(p)."""
    cdef Py_ssize_t m = len(left)
    cdef i64* b = <i64*> malloc((inner * ncols + 1) * sizeof(i64))
    cdef i64* acc = <i64*> malloc((ncols + 1) * sizeof(i64))
    if b == NULL or acc == NULL:
        free(b)
        free(acc)
        raise MemoryError()
    cdef Py_ssize_t i, j, k
    cdef i64 x
    try:
        for k in range(inner):
            row = right[k]
            for j in range(ncols):
                b[k * ncols + j] = row[j]
        out = []
        for i in range(m):
            lrow = left[i]
            for j in range(ncols):
                acc[j] = 0
            for k in range(inner):
                x = lrow[k]
                if x != 0:
                    for j in range(ncols):
                        acc[j] = (acc[j] + x * b[k * ncols + j]) % p
            out.append([acc[j] for j in range(ncols)])
    finally:
        free(b)
        free(acc)
    return out
