"""Batched linear algebra over GF(q) on integer-coded elements.

Elements of GF(p^k) are coded as integers ``sum(c_i * p**i)``; all
arithmetic goes through the lookup tables of a :class:`FieldTables`.
Every function here accepts stacks of matrices with shape ``(..., r, c)``.
"""

from collections import namedtuple
from itertools import combinations

import numpy as np

FieldTables = namedtuple("FieldTables", "p k q add mul neg inv")
FieldTables.__doc__ = """Lookup tables for GF(q); ``inv[0]`` is 0 by convention."""


def sub(t, a, b):
    return t.add[a, t.neg[b]]


def matmul(t, A, B):
    """Matrix product over GF(q), broadcasting over leading axes."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if t.k == 1:
        return np.matmul(A, B) % t.p
    m = A.shape[-1]
    shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-2] + (1,))[:-1]
    out = np.zeros(shape + (A.shape[-2], B.shape[-1]), dtype=np.int64)
    for j in range(m):
        term = t.mul[A[..., :, j, None], B[..., None, j, :]]
        out = t.add[out, term]
    return out


def decode(n, q, idx):
    """Matrices for candidate indices, row-major with entry (0, 0) most significant."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty(idx.shape + (n * n,), dtype=np.int64)
    rest = idx.copy()
    for f in range(n * n - 1, -1, -1):
        out[..., f] = rest % q
        rest //= q
    return out.reshape(idx.shape + (n, n))


def encode(q, M):
    """Inverse of :func:`decode` for stacks of square matrices."""
    M = np.asarray(M, dtype=np.int64)
    flat = M.reshape(M.shape[:-2] + (-1,))
    code = np.zeros(flat.shape[:-1], dtype=np.int64)
    for f in range(flat.shape[-1]):
        code = code * q + flat[..., f]
    return code


def det(t, M):
    """Determinants of a stack ``(B, k, k)`` by Gaussian elimination."""
    M = np.array(M, dtype=np.int64)
    B, k = M.shape[0], M.shape[-1]
    if k == 0:
        return np.ones(B, dtype=np.int64)
    rows = np.arange(B)
    d = np.ones(B, dtype=np.int64)
    dead = np.zeros(B, dtype=bool)
    for col in range(k):
        nz = M[:, col:, col] != 0
        has = nz.any(axis=1)
        dead |= ~has
        piv = col + np.argmax(nz, axis=1)
        swap = (piv != col) & has
        if swap.any():
            top = M[rows, col].copy()
            M[rows, col] = M[rows, piv]
            M[rows, piv] = top
            d = np.where(swap, t.neg[d], d)
        pv = np.where(has, M[:, col, col], 1)
        d = t.mul[d, pv]
        ipv = t.inv[pv]
        for r in range(col + 1, k):
            f = t.mul[M[:, r, col], ipv]
            M[:, r, col:] = sub(t, M[:, r, col:], t.mul[f[:, None], M[:, col, col:]])
    d[dead] = 0
    return d


def rref(t, M):
    """Reduced row echelon form of a stack ``(B, r, c)``.

    Returns ``(R, rank, pivots)`` where ``pivots[b, i]`` is the pivot
    column of row ``i`` (``-1`` past the rank).
    """
    R = np.array(M, dtype=np.int64)
    B, nr, nc = R.shape
    rank = np.zeros(B, dtype=np.int64)
    pivots = np.full((B, min(nr, nc)), -1, dtype=np.int64)
    row_ids = np.arange(nr)
    for c in range(nc):
        cand = (R[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        rr = rank[b]
        pp = np.argmax(cand[b], axis=1)
        top = R[b, rr].copy()
        R[b, rr] = R[b, pp]
        R[b, pp] = top
        pv = R[b, rr, c]
        prow = t.mul[t.inv[pv][:, None], R[b, rr]]
        R[b, rr] = prow
        f = R[b, :, c].copy()
        f[np.arange(len(b)), rr] = 0
        R[b] = sub(t, R[b], t.mul[f[:, :, None], prow[:, None, :]])
        pivots[b, rr] = c
        rank[b] += 1
    return R, rank, pivots


def rank(t, M):
    return rref(t, M)[1]


def inverse(t, M):
    """Inverses of a stack of invertible matrices ``(B, n, n)``."""
    M = np.asarray(M, dtype=np.int64)
    B, n = M.shape[0], M.shape[-1]
    eye = np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n))
    R, rk, _ = rref(t, np.concatenate([M, eye], axis=2))
    if np.any(rk < n) or np.any(R[:, :, :n] != np.eye(n, dtype=np.int64)):
        raise ZeroDivisionError("singular matrix")
    return R[:, :, n:].copy()


def principal_subsets(n):
    """Index tuples of every nonempty principal minor, grouped by size."""
    return {k: list(combinations(range(n), k)) for k in range(1, n + 1)}


def charpoly(t, M):
    """Characteristic polynomial coefficients ``c_0..c_{n-1}`` (monic, implicit).

    The coefficient of ``x^(n-k)`` is ``(-1)^k`` times the sum of the
    principal k-minors.
    """
    M = np.asarray(M, dtype=np.int64)
    B, n = M.shape[0], M.shape[-1]
    out = np.zeros((B, n), dtype=np.int64)
    for k, subsets in principal_subsets(n).items():
        e = np.zeros(B, dtype=np.int64)
        for idx in subsets:
            ix = np.array(idx)
            e = t.add[e, det(t, M[:, ix][:, :, ix])]
        out[:, n - k] = e if k % 2 == 0 else t.neg[e]
    return out


def minpoly(t, M):
    """Minimal polynomials via the Krylov sequence I, M, M^2, ...

    Returns ``(degree, coeffs)``; ``coeffs[b, j]`` is the coefficient of
    ``x^j`` for ``j < degree`` and zero beyond.
    """
    M = np.asarray(M, dtype=np.int64)
    B, n = M.shape[0], M.shape[-1]
    K = np.empty((B, n * n, n + 1), dtype=np.int64)
    P = np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n)).copy()
    K[:, :, 0] = P.reshape(B, -1)
    for j in range(1, n + 1):
        P = matmul(t, P, M)
        K[:, :, j] = P.reshape(B, -1)
    R, rk, piv = rref(t, K)
    cols = np.arange(piv.shape[1])
    leading = piv == cols[None, :]
    deg = np.where(leading.all(axis=1), piv.shape[1], np.argmin(leading, axis=1))
    coeffs = np.zeros((B, n), dtype=np.int64)
    for j in range(n):
        has = j < deg
        val = R[np.arange(B), j, np.minimum(deg, n)]
        coeffs[:, j] = np.where(has, t.neg[val], 0)
    return deg, coeffs


def commutant_dim(t, M):
    """Dimension of the centralizer algebra {X : MX = XM}."""
    M = np.asarray(M, dtype=np.int64)
    B, n = M.shape[0], M.shape[-1]
    L = np.zeros((B, n * n, n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                # (MX)_{ij} gets M_ik X_kj; (XM)_{ij} gets X_ik M_kj
                L[:, i * n + j, k * n + j] = t.add[L[:, i * n + j, k * n + j], M[:, i, k]]
                L[:, i * n + j, i * n + k] = sub(t, L[:, i * n + j, i * n + k], M[:, k, j])
    return n * n - rank(t, L)
