"""Exact rational linear algebra on small dense matrices.

Matrices are numpy object arrays holding ``fractions.Fraction`` entries.
Everything here is deterministic and exact; float counterparts live with
the callers.
"""

from fractions import Fraction

import numpy as np

# Singular values below RANK_RTOL * sigma_max count as zero in float rank
# decisions (mirrors the exact routines).
RANK_RTOL = 1e-10


def fmat(rows):
    """Build a Fraction matrix from a nested sequence."""
    a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            a[i, j] = Fraction(v)
    return a


def fzeros(nrows, ncols):
    a = np.empty((nrows, ncols), dtype=object)
    a[:] = Fraction(0)
    return a.copy()


def feye(n):
    a = fzeros(n, n)
    for i in range(n):
        a[i, i] = Fraction(1)
    return a


def to_float(a):
    return np.array([[float(x) for x in row] for row in a], dtype=float)


def rref(a):
    """Reduced row echelon form. Returns (R, pivot_columns)."""
    r = a.copy()
    nrows, ncols = r.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row >= nrows:
            break
        piv = None
        for i in range(row, nrows):
            if r[i, col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = r[row] / r[row, col]
        for i in range(nrows):
            if i != row and r[i, col] != 0:
                r[i] = r[i] - r[i, col] * r[row]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a):
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a):
    """Columns span the exact right null space of ``a``."""
    nrows, ncols = a.shape
    if ncols == 0:
        return fzeros(0, 0)
    r, pivots = rref(a)
    free = [j for j in range(ncols) if j not in pivots]
    basis = fzeros(ncols, len(free))
    for bi, j in enumerate(free):
        basis[j, bi] = Fraction(1)
        for ri, pc in enumerate(pivots):
            basis[pc, bi] = -r[ri, j]
    return basis


def solve(a, b):
    """Solve a x = b exactly; returns None if inconsistent.

    ``b`` may be a vector or matrix. Free variables are set to zero.
    """
    b2 = b if b.ndim == 2 else b.reshape(-1, 1)
    aug = np.concatenate([a, b2], axis=1)
    r, pivots = rref(aug)
    ncols = a.shape[1]
    if any(p >= ncols for p in pivots):
        return None
    x = fzeros(ncols, b2.shape[1])
    for ri, pc in enumerate(pivots):
        for j in range(b2.shape[1]):
            x[pc, j] = r[ri, ncols + j]
    return x if b.ndim == 2 else x[:, 0]


def inverse(a):
    n = a.shape[0]
    inv = solve(a, feye(n))
    if inv is None or rank(a) != n:
        raise ValueError("matrix is singular")
    return inv


def column_echelon(a):
    """Canonical reduced column echelon form, zero columns dropped.

    Two subspaces are equal iff their spanning matrices have identical
    canonical forms.
    """
    r, pivots = rref(a.T)
    cols = r[: len(pivots)].T
    return cols


def matmul(a, b):
    out = fzeros(a.shape[0], b.shape[1])
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            s = Fraction(0)
            for k in range(a.shape[1]):
                if a[i, k] and b[k, j]:
                    s += a[i, k] * b[k, j]
            out[i, j] = s
    return out


def matvec(a, v):
    out = np.empty(a.shape[0], dtype=object)
    for i in range(a.shape[0]):
        s = Fraction(0)
        for k in range(a.shape[1]):
            if a[i, k] and v[k]:
                s += a[i, k] * v[k]
        out[i] = s
    return out


def float_rank(a):
    """Rank with the scale-aware singular value cutoff."""
    if a.size == 0:
        return 0
    s = np.linalg.svd(np.asarray(a, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > RANK_RTOL * s[0]))
