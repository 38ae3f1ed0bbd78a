"""Dense univariate polynomials over a Field, coefficient lists lowest degree first.

Only what generic-rank computations need: the zero polynomial is ``[]``.
"""

from __future__ import annotations

from .field import Field


def trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def mul(F: Field, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def sub(F: Field, a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [F.sub(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)]
    return trim(out)


def matrix_rank(F: Field, rows: list) -> int:
    """Rank over k(t) of a matrix of polynomials, by fraction-free elimination."""
    a = [[trim(list(e)) for e in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, m) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, m):
            q = a[i][c]
            if q:
                a[i] = [sub(F, mul(F, p, x), mul(F, q, y)) for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == m:
            break
    return rank
