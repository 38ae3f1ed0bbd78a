"""Pure-Python twins of the compiled kernels in ``_kernels.pyx``."""


def rref_modp(rows, p):
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
        inv = pow(a[r][c], -1, p)
        prow = [(x * inv) % p for x in a[r]]
        a[r] = prow
        nz = [j for j in range(c, n) if prow[j]]
        for i in range(m):
            if i != r:
                f = a[i][c]
                if f:
                    row = a[i]
                    for j in nz:
                        row[j] = (row[j] - f * prow[j]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def matmul_modp(left, right, inner, ncols, p):
    out = []
    for lrow in left:
        acc = [0] * ncols
        for k in range(inner):
            x = lrow[k]
            if x:
                brow = right[k]
                for j in range(ncols):
                    acc[j] += x * brow[j]
        out.append([v % p for v in acc])
    return out
