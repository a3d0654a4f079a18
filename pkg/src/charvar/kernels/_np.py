"""Pure-numpy implementations of the enumeration kernels."""

import numpy as np

from .. import _fieldops as fo

CHUNK = 1 << 15


def pack_keys(n, q, cp, mdeg, mp, cdim):
    key = np.zeros(cp.shape[0], dtype=np.int64)
    for j in range(n - 1, -1, -1):
        key = key * q + cp[:, j]
    for j in range(n - 1, -1, -1):
        key = key * q + mp[:, j]
    key = key * (n + 1) + mdeg
    return key * (n * n + 1) + cdim


def keys_of(n, t, mats):
    """Complete conjugacy keys for a stack of matrices (any n <= 4)."""
    mats = np.asarray(mats, dtype=np.int64).reshape(-1, n, n)
    out = np.empty(mats.shape[0], dtype=np.int64)
    for lo in range(0, mats.shape[0], CHUNK):
        M = mats[lo:lo + CHUNK]
        cp = fo.charpoly(t, M)
        mdeg, mp = fo.minpoly(t, M)
        cdim = np.zeros(M.shape[0], dtype=np.int64)
        if n == 4:
            sel = mdeg == 2
            if sel.any():
                cdim[sel] = fo.commutant_dim(t, M[sel])
        out[lo:lo + CHUNK] = pack_keys(n, t.q, cp, mdeg, mp, cdim)
    return out


def class_keys_range(n, t, start, stop):
    idx_parts, key_parts = [], []
    for lo in range(start, stop, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, stop), dtype=np.int64)
        M = fo.decode(n, t.q, idx)
        keep = fo.det(t, M) != 0
        idx_parts.append(idx[keep])
        key_parts.append(keys_of(n, t, M[keep]))
    if not idx_parts:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    return np.concatenate(idx_parts), np.concatenate(key_parts)


def pair_histogram(n, t, idx, cls, z, sorted_keys, key_cls, ncls):
    hist = np.zeros((ncls, ncls), dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    for lo in range(0, len(idx), CHUNK):
        U = fo.decode(n, t.q, idx[lo:lo + CHUNK])
        k = keys_of(n, t, fo.matmul(t, U, z))
        pos = np.searchsorted(sorted_keys, k)
        if np.any(pos >= len(sorted_keys)) or np.any(sorted_keys[np.minimum(pos, len(sorted_keys) - 1)] != k):
            raise RuntimeError("product landed outside the class table")
        np.add.at(hist, (cls[lo:lo + CHUNK], key_cls[pos]), 1)
    return hist
