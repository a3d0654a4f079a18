"""Backend dispatch for the hot enumeration kernels.

``CHARVAR_BACKEND=numba`` (default) uses the compiled kernels and
``CHARVAR_BACKEND=numpy`` the vectorised fallback.  Both return identical
arrays.  Ranges of candidate indices can be spread over worker processes;
results are concatenated in range order so the output never depends on
the worker count.
"""

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .. import config
from ..errors import FieldTooLarge
from . import _np, _reps

CHUNK = 1 << 22


def _numba():
    from . import _nb as mod

    return mod


def check_key_width(n, q):
    if n > 4:
        raise FieldTooLarge("conjugacy keys support n <= 4")
    if q ** (2 * n) * (n + 1) * (n * n + 1) >= 2**63:
        raise FieldTooLarge(f"conjugacy keys for n={n}, q={q} overflow 64 bits")


def _range_worker(args):
    n, t, start, stop, name = args
    if name == "numba":
        return _numba().class_keys_range(n, t.q, t.add, t.mul, t.neg, t.inv, start, stop)
    return _np.class_keys_range(n, t, start, stop)


def _pieces(start, stop, size):
    return [(lo, min(lo + size, stop)) for lo in range(start, stop, size)]


def class_keys_range(n, t, start, stop, workers=1, backend=None):
    """Indices of the invertible candidates in ``[start, stop)`` and their keys."""
    check_key_width(n, t.q)
    name = backend or config.backend()
    jobs = [(n, t, lo, hi, name) for lo, hi in _pieces(start, stop, CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_range_worker, jobs))
    else:
        parts = [_range_worker(j) for j in jobs]
    if not parts:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def keys_of(n, t, mats, backend=None):
    """Conjugacy keys of a stack of matrices of shape ``(m, n, n)``."""
    check_key_width(n, t.q)
    mats = np.ascontiguousarray(np.asarray(mats, dtype=np.int64).reshape(-1, n, n))
    if (backend or config.backend()) == "numba":
        return _numba().keys_of(n, t.q, t.add, t.mul, t.neg, t.inv, mats)
    return _np.keys_of(n, t, mats)


def _hist_worker(args):
    n, t, idx, cls, z, sorted_keys, key_cls, ncls, name = args
    if name == "numba":
        hist, ok = _numba().pair_histogram(n, t.q, t.add, t.mul, t.neg, t.inv, idx, cls, z, sorted_keys, key_cls, ncls)
        if not ok:
            raise RuntimeError("product landed outside the class table")
        return hist
    return _np.pair_histogram(n, t, idx, cls, z, sorted_keys, key_cls, ncls)


def pair_histogram(n, t, idx, cls, z, sorted_keys, key_cls, ncls, workers=1, backend=None):
    """``hist[C, D] = #{u in G : class(u) = C, class(u z) = D}``."""
    name = backend or config.backend()
    z = np.ascontiguousarray(np.asarray(z, dtype=np.int64))
    cls = np.asarray(cls, dtype=np.int64)
    jobs = [
        (n, t, idx[lo:hi], cls[lo:hi], z, sorted_keys, key_cls, ncls, name)
        for lo, hi in _pieces(0, len(idx), max(1, min(CHUNK, -(-len(idx) // max(workers, 1)))))
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_hist_worker, jobs))
    else:
        parts = [_hist_worker(j) for j in jobs]
    return sum(parts, np.zeros((ncls, ncls), np.int64))


def _tuple_worker(args):
    prog, t, lo, hi, name = args
    if name == "numba":
        p = prog
        return int(
            _numba().count_tuples(
                p["mats"], p["offs"], p["radix"], p["rel_start"], p["rel_mode"],
                p["term_start"], p["term_coef"], p["term_arrows"], t.add, t.mul, lo, hi,
            )
        )
    return _reps.count_tuples_numpy(prog, t, lo, hi)


def count_tuples(prog, t, total, workers=1, backend=None):
    """Number of tuples in ``range(total)`` satisfying every relation of ``prog``."""
    name = backend or config.backend()
    size = max(1, min(CHUNK, -(-total // max(workers, 1))))
    jobs = [(prog, t, lo, hi, name) for lo, hi in _pieces(0, total, size)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return sum(ex.map(_tuple_worker, jobs))
    return sum(_tuple_worker(j) for j in jobs)
