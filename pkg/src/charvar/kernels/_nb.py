"""Numba implementations of the enumeration kernels.

Every routine works on integer-coded field elements through the lookup
tables ``add, mul, neg, inv`` and mirrors the numpy backend exactly.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _decode(code, n, q, M):
    for f in range(n * n - 1, -1, -1):
        M[f // n, f % n] = code % q
        code //= q


@njit(cache=True)
def _det(W, k, add, mul, neg, inv):
    d = 1
    for c in range(k):
        piv = -1
        for r in range(c, k):
            if W[r, c] != 0:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != c:
            for j in range(c, k):
                tmp = W[c, j]
                W[c, j] = W[piv, j]
                W[piv, j] = tmp
            d = neg[d]
        d = mul[d, W[c, c]]
        ip = inv[W[c, c]]
        for r in range(c + 1, k):
            f = W[r, c]
            if f != 0:
                nf = neg[mul[f, ip]]
                for j in range(c, k):
                    W[r, j] = add[W[r, j], mul[nf, W[c, j]]]
    return d


@njit(cache=True)
def _rref(R, nr, nc, add, mul, neg, inv, piv):
    rank = 0
    for c in range(nc):
        if rank == nr:
            break
        sel = -1
        for r in range(rank, nr):
            if R[r, c] != 0:
                sel = r
                break
        if sel < 0:
            continue
        if sel != rank:
            for j in range(nc):
                tmp = R[rank, j]
                R[rank, j] = R[sel, j]
                R[sel, j] = tmp
        s = inv[R[rank, c]]
        for j in range(c, nc):
            R[rank, j] = mul[s, R[rank, j]]
        for r in range(nr):
            if r != rank:
                f = R[r, c]
                if f != 0:
                    nf = neg[f]
                    for j in range(c, nc):
                        R[r, j] = add[R[r, j], mul[nf, R[rank, j]]]
        piv[rank] = c
        rank += 1
    return rank


@njit(cache=True)
def _matmul(A, B, C, n, add, mul):
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = add[s, mul[A[i, k], B[k, j]]]
            C[i, j] = s


@njit(cache=True)
def _key(M, n, q, add, mul, neg, inv, W, P, P2, K, L, piv, e, sub):
    # charpoly from sums of principal minors
    for k in range(n + 1):
        e[k] = 0
    for mask in range(1, 1 << n):
        k = 0
        for i in range(n):
            if mask >> i & 1:
                sub[k] = i
                k += 1
        for a in range(k):
            for b in range(k):
                W[a, b] = M[sub[a], sub[b]]
        e[k] = add[e[k], _det(W, k, add, mul, neg, inv)]
    key = 0
    for j in range(n - 1, -1, -1):
        k = n - j
        key = key * q + (e[k] if k % 2 == 0 else neg[e[k]])
    # minimal polynomial from the Krylov sequence I, M, ..., M^n
    for i in range(n):
        for j in range(n):
            P[i, j] = 1 if i == j else 0
    for s in range(n + 1):
        for i in range(n):
            for j in range(n):
                K[i * n + j, s] = P[i, j]
        if s < n:
            _matmul(P, M, P2, n, add, mul)
            for i in range(n):
                for j in range(n):
                    P[i, j] = P2[i, j]
    rank = _rref(K, n * n, n + 1, add, mul, neg, inv, piv)
    d = rank
    for j in range(rank):
        if piv[j] != j:
            d = j
            break
    for j in range(n - 1, -1, -1):
        key = key * q + (neg[K[j, d]] if j < d else 0)
    key = key * (n + 1) + d
    cdim = 0
    if n == 4 and d == 2:
        nn = n * n
        for r in range(nn):
            for c in range(nn):
                L[r, c] = 0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    r = i * n + j
                    L[r, k * n + j] = add[L[r, k * n + j], M[i, k]]
                    L[r, i * n + k] = add[L[r, i * n + k], neg[M[k, j]]]
        cdim = nn - _rref(L, nn, nn, add, mul, neg, inv, piv)
    return key * (n * n + 1) + cdim


@njit(cache=True)
def _buffers(n):
    nn = n * n
    return (
        np.empty((n, n), np.int64),
        np.empty((n, n), np.int64),
        np.empty((n, n), np.int64),
        np.empty((nn, n + 1), np.int64),
        np.empty((nn, nn), np.int64),
        np.empty(nn, np.int64),
        np.empty(n + 1, np.int64),
        np.empty(n, np.int64),
    )


@njit(cache=True)
def class_keys_range(n, q, add, mul, neg, inv, start, stop):
    idx = np.empty(stop - start, np.int64)
    keys = np.empty(stop - start, np.int64)
    M = np.empty((n, n), np.int64)
    W, P, P2, K, L, piv, e, sub = _buffers(n)
    m = 0
    for code in range(start, stop):
        _decode(code, n, q, M)
        for i in range(n):
            for j in range(n):
                W[i, j] = M[i, j]
        if _det(W, n, add, mul, neg, inv) == 0:
            continue
        idx[m] = code
        keys[m] = _key(M, n, q, add, mul, neg, inv, W, P, P2, K, L, piv, e, sub)
        m += 1
    return idx[:m].copy(), keys[:m].copy()


@njit(cache=True)
def keys_of(n, q, add, mul, neg, inv, mats):
    out = np.empty(mats.shape[0], np.int64)
    M = np.empty((n, n), np.int64)
    W, P, P2, K, L, piv, e, sub = _buffers(n)
    for b in range(mats.shape[0]):
        for i in range(n):
            for j in range(n):
                M[i, j] = mats[b, i, j]
        out[b] = _key(M, n, q, add, mul, neg, inv, W, P, P2, K, L, piv, e, sub)
    return out


@njit(cache=True)
def pair_histogram(n, q, add, mul, neg, inv, idx, cls, z, sorted_keys, key_cls, ncls):
    hist = np.zeros((ncls, ncls), np.int64)
    U = np.empty((n, n), np.int64)
    M = np.empty((n, n), np.int64)
    W, P, P2, K, L, piv, e, sub = _buffers(n)
    for b in range(idx.shape[0]):
        _decode(idx[b], n, q, U)
        _matmul(U, z, M, n, add, mul)
        k = _key(M, n, q, add, mul, neg, inv, W, P, P2, K, L, piv, e, sub)
        pos = np.searchsorted(sorted_keys, k)
        if pos >= sorted_keys.shape[0] or sorted_keys[pos] != k:
            return hist, False
        hist[cls[b], key_cls[pos]] += 1
    return hist, True


@njit(cache=True)
def count_tuples(mats, offs, radix, rel_start, rel_mode, term_start, term_coef, term_arrows, add, mul, lo, hi):
    A = radix.shape[0]
    D = mats.shape[1]
    R = rel_mode.shape[0]
    choice = np.empty(A, np.int64)
    acc = np.empty((D, D), np.int64)
    prod = np.empty((D, D), np.int64)
    tmp = np.empty((D, D), np.int64)
    count = 0
    for code in range(lo, hi):
        rest = code
        for a in range(A - 1, -1, -1):
            choice[a] = rest % radix[a]
            rest //= radix[a]
        ok = True
        for r in range(R):
            for i in range(D):
                for j in range(D):
                    acc[i, j] = 0
            for t in range(rel_start[r], rel_start[r + 1]):
                first = term_arrows[term_start[t]]
                M = mats[offs[first] + choice[first]]
                for i in range(D):
                    for j in range(D):
                        prod[i, j] = M[i, j]
                for s in range(term_start[t] + 1, term_start[t + 1]):
                    b = term_arrows[s]
                    B = mats[offs[b] + choice[b]]
                    for i in range(D):
                        for j in range(D):
                            v = 0
                            for k in range(D):
                                v = add[v, mul[B[i, k], prod[k, j]]]
                            tmp[i, j] = v
                    for i in range(D):
                        for j in range(D):
                            prod[i, j] = tmp[i, j]
                c = term_coef[t]
                for i in range(D):
                    for j in range(D):
                        acc[i, j] = add[acc[i, j], mul[c, prod[i, j]]]
            if rel_mode[r] == 1:
                tr = 0
                for i in range(D):
                    tr = add[tr, acc[i, i]]
                if tr != 0:
                    ok = False
            else:
                for i in range(D):
                    for j in range(D):
                        if acc[i, j] != 0:
                            ok = False
            if not ok:
                break
        if ok:
            count += 1
    return count
