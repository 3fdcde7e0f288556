"""Independent reference implementations used as test oracles.

Everything here works on dense lists of Fractions and shares no code with
the package, so agreement is a genuine cross-check.
"""
from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form by plain Gauss-Jordan; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))] for i in range(len(a))]


def matvec(a, x):
    return [sum((a[i][k] * x[k] for k in range(len(x))), Fraction(0)) for i in range(len(a))]


def inverse(rows):
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def dense_structure(alg):
    """c[i][j] is the dense product vector e_i e_j."""
    n = alg.dimension
    out = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), v in alg.structure_constants.items():
        out[i][j][k] += v
    return out


def dense_mul(c, x, y):
    n = len(x)
    out = [Fraction(0)] * n
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] == 0:
                continue
            for k in range(n):
                out[k] += x[i] * y[j] * c[i][j][k]
    return out


def tensor_mul(c, n, s, t):
    """Product in A⊗A of dense n²-vectors on the lexicographic basis."""
    out = [Fraction(0)] * (n * n)
    for p in range(n * n):
        if s[p] == 0:
            continue
        a, b = divmod(p, n)
        for q in range(n * n):
            if t[q] == 0:
                continue
            x, y = divmod(q, n)
            for u in range(n):
                cu = c[a][x][u]
                if cu == 0:
                    continue
                for v in range(n):
                    cv = c[b][y][v]
                    if cv:
                        out[u * n + v] += s[p] * t[q] * cu * cv
    return out


def unit(n, k):
    v = [Fraction(0)] * n
    v[k] = Fraction(1)
    return v


def canonical_dense(alg, tensors, which):
    """Dense matrix of T1..T4 built straight from the defining formulas.

    ``tensors[k]`` is Δ(e_k) as a dense n²-vector.  Columns are indexed by
    the input pair (i, j) as i*n + j.
    """
    n = alg.dimension
    c = dense_structure(alg)
    cols = []
    for i in range(n):
        for j in range(n):
            if which in ("T1", "T3"):
                delta, other = tensors[i], unit(n, j)
                # (x⊗y)(1⊗b) = x⊗yb for T1 and (1⊗b)(x⊗y) = x⊗by for T3
                col = [Fraction(0)] * (n * n)
                for p in range(n * n):
                    if delta[p] == 0:
                        continue
                    x, y = divmod(p, n)
                    prod = dense_mul(c, unit(n, y), other) if which == "T1" else dense_mul(c, other, unit(n, y))
                    for v in range(n):
                        col[x * n + v] += delta[p] * prod[v]
            else:
                delta, other = tensors[j], unit(n, i)
                col = [Fraction(0)] * (n * n)
                for p in range(n * n):
                    if delta[p] == 0:
                        continue
                    x, y = divmod(p, n)
                    prod = dense_mul(c, other, unit(n, x)) if which == "T2" else dense_mul(c, unit(n, x), other)
                    for u in range(n):
                        col[u * n + y] += delta[p] * prod[u]
            cols.append(col)
    return [[cols[j][i] for j in range(n * n)] for i in range(n * n)]
