"""Conjugacy classes of GL_n(F_q) and class-function convolution.

Class functions store one value per class (the value at any element of
that class).  Totals over the whole group therefore need an explicit
multiplication by class sizes.

Two table builders are provided.  ``method="enumerate"`` makes a single
pass over the group and buckets elements by a complete conjugacy key;
representatives are the first element of each class in enumeration
order.  ``method="types"`` never touches the group: classes come from
the elementary-divisor data (a partition attached to each monic
irreducible polynomial other than x) with the standard centralizer
formula, which reaches groups far past the enumeration limit.
"""

from math import prod

import numpy as np

from . import _fieldops as fo
from . import config, fqpoly, kernels
from .ffield import (
    MatrixOverField,
    candidate_count,
    check_group_size,
    gl_order,
    rcf_key,
)
from .errors import EnumerationTooLarge, SingularTarget, TableMismatch

_TABLES = {}


class ConjClassTable:
    """Conjugacy classes of GL_n(F); see :func:`build_class_table`."""

    def __init__(self, n, field, method, reps, sizes, keys, elements=None, element_class=None):
        self.n = n
        self.field = field
        self.method = method
        self.order = gl_order(n, field)
        self.reps = reps
        self.sizes = [int(s) for s in sizes]
        self.keys = np.asarray(keys, dtype=np.int64)
        order = np.argsort(self.keys)
        self._sorted_keys = self.keys[order]
        self._key_cls = order.astype(np.int64)
        self._elements = elements
        self._element_class = element_class
        self._rcf = None
        self._inv_class = None
        self._hist_cache = {}

    def __len__(self):
        return len(self.reps)

    def __repr__(self):
        return f"ConjClassTable(GL_{self.n}({self.field}), {len(self)} classes, {self.method})"

    @property
    def group(self):
        return (self.n, self.field)

    @property
    def rcf_keys(self):
        if self._rcf is None:
            self._rcf = [rcf_key(r) for r in self.reps]
        return self._rcf

    @property
    def classes(self):
        return list(zip(self.reps, self.rcf_keys, self.sizes))

    @property
    def index(self):
        return {k: i for i, k in enumerate(self.rcf_keys)}

    def centralizer_order(self, i):
        return self.order // self.sizes[i]

    def classes_of(self, mats):
        """Class positions of a stack of matrices (integer codes)."""
        k = kernels.keys_of(self.n, self.field.tables(), mats)
        pos = np.searchsorted(self._sorted_keys, k)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        if np.any(self._sorted_keys[pos] != k):
            raise ValueError("matrix is not in this group")
        return self._key_cls[pos]

    def class_of(self, M):
        if isinstance(M, MatrixOverField):
            if M.field != self.field or M.n != self.n:
                raise TableMismatch("matrix belongs to a different group")
            M = M.entries
        return int(self.classes_of(np.asarray(M)[None])[0])

    @property
    def inv_class(self):
        """Position of the class of the inverse of each class."""
        if self._inv_class is None:
            t = self.field.tables()
            reps = np.stack([r.entries for r in self.reps])
            self._inv_class = self.classes_of(fo.inverse(t, reps))
        return self._inv_class

    def element_data(self, workers=1):
        """All group elements (candidate indices) with their class positions.

        The iteration limit is checked on every call, cached or not, since
        callers go on to scan every element.
        """
        total = candidate_count(self.n, self.field)
        cap = config.iteration_limit()
        if total > cap:
            raise EnumerationTooLarge(f"{total} candidate matrices exceed the iteration limit {cap}")
        if self._elements is None:
            check_group_size(self.n, self.field)
            idx, keys = kernels.class_keys_range(self.n, self.field.tables(), 0, total, workers=workers)
            pos = np.searchsorted(self._sorted_keys, keys)
            self._elements = idx
            self._element_class = self._key_cls[pos]
        return self._elements, self._element_class

    def pair_histogram(self, zcls, workers=1):
        """``hist[C, D] = #{u : u in C, u * rep(zcls) in D}``."""
        idx, cls = self.element_data(workers)
        if zcls in self._hist_cache:
            return self._hist_cache[zcls]
        hist = kernels.pair_histogram(
            self.n,
            self.field.tables(),
            idx,
            cls,
            self.reps[zcls].entries,
            self._sorted_keys,
            self._key_cls,
            len(self),
            workers=workers,
        )
        if len(self) <= 64:
            self._hist_cache[zcls] = hist
        return hist

    def fixed_by_central(self, z):
        """Number of classes C with zC = C, for a scalar matrix z."""
        t = self.field.tables()
        reps = np.stack([r.entries for r in self.reps])
        prods = fo.matmul(t, reps, z.entries)
        return int(np.sum(self.classes_of(prods) == np.arange(len(self))))


class ClassFunction:
    """Integer class function on a :class:`ConjClassTable` (one value per class)."""

    def __init__(self, table, values):
        if len(values) != len(table):
            raise ValueError("one value per class expected")
        self.table = table
        self.values = [int(v) for v in values]

    @classmethod
    def constant(cls, table, c=1):
        return cls(table, [c] * len(table))

    @classmethod
    def delta_identity(cls, table):
        vals = [0] * len(table)
        vals[table.class_of(MatrixOverField.identity(table.field, table.n))] = 1
        return cls(table, vals)

    def __call__(self, M):
        return self.values[self.table.class_of(M)]

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def _same(self, other):
        if not isinstance(other, ClassFunction) or other.table is not self.table:
            raise TableMismatch("class functions live on different tables")

    def __add__(self, other):
        self._same(other)
        return ClassFunction(self.table, [a + b for a, b in zip(self.values, other.values)])

    def scale(self, c):
        return ClassFunction(self.table, [c * a for a in self.values])

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and other.table is self.table and other.values == self.values

    def total(self):
        """Sum over all group elements."""
        return sum(v * s for v, s in zip(self.values, self.table.sizes))

    def __repr__(self):
        return f"ClassFunction({self.values})"


# -- table construction -----------------------------------------------------------


def build_class_table(n, F, method="enumerate", workers=1):
    """Conjugacy-class table of GL_n(F); cached per (n, field, method)."""
    cache_key = (n, F.p, F.k, method)
    if cache_key in _TABLES:
        return _TABLES[cache_key]
    if method == "enumerate":
        table = _enumerate_table(n, F, workers)
    elif method == "types":
        table = _types_table(n, F)
    else:
        raise ValueError(f"unknown method {method!r}")
    _TABLES[cache_key] = table
    return table


def clear_cache():
    _TABLES.clear()


def _enumerate_table(n, F, workers):
    check_group_size(n, F)
    cap = config.iteration_limit()
    if candidate_count(n, F) > cap:
        raise EnumerationTooLarge(f"{candidate_count(n, F)} candidate matrices exceed the iteration limit {cap}")
    t = F.tables()
    idx, keys = kernels.class_keys_range(n, t, 0, candidate_count(n, F), workers=workers)
    uniq, first, inverse, counts = np.unique(keys, return_index=True, return_inverse=True, return_counts=True)
    order = np.argsort(first, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    reps = [MatrixOverField(F, fo.decode(n, F.q, idx[first[i]])) for i in order]
    return ConjClassTable(
        n,
        F,
        "enumerate",
        reps,
        counts[order],
        uniq[order],
        elements=idx,
        element_class=remap[inverse.ravel()],
    )


def partitions(m, largest=None):
    """Partitions of m as non-increasing tuples, largest first."""
    if m == 0:
        yield ()
        return
    largest = m if largest is None else min(largest, m)
    for first in range(largest, 0, -1):
        for rest in partitions(m - first, first):
            yield (first,) + rest


def conjugate_partition(lam):
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0])) if lam else ()


def centralizer_factor(lam, Q):
    """Centralizer order of a primary block with partition ``lam`` over F_Q."""
    conj = conjugate_partition(lam)
    mult = [lam.count(v) for v in set(lam)]
    exponent = sum(c * c for c in conj) - sum(m * (m + 1) // 2 for m in mult)
    return Q**exponent * prod(Q**j - 1 for m in mult for j in range(1, m + 1))


def class_types(n, F):
    """Conjugacy classes as lists of (irreducible polynomial, partition) pairs."""
    irr = []
    for d in range(1, n + 1):
        irr.extend((f, d) for f in fqpoly.irreducibles(F, d, exclude_x=True))

    def rec(i, remaining, acc):
        if remaining == 0:
            yield acc
            return
        if i == len(irr):
            return
        f, d = irr[i]
        yield from rec(i + 1, remaining, acc)
        for m in range(1, remaining // d + 1):
            for lam in partitions(m):
                yield from rec(i + 1, remaining - m * d, acc + [(f, lam)])

    yield from rec(0, n, [])


def _types_table(n, F):
    order = gl_order(n, F)
    reps, sizes = [], []
    for ctype in class_types(n, F):
        blocks, cent = [], 1
        for f, lam in ctype:
            cent *= centralizer_factor(lam, F.q ** fqpoly.deg(f))
            for part in lam:
                power = (1,)
                for _ in range(part):
                    power = fqpoly.mul(F, power, f)
                blocks.append(MatrixOverField.companion(F, power).entries)
        M = np.zeros((n, n), dtype=np.int64)
        at = 0
        for b in blocks:
            M[at:at + len(b), at:at + len(b)] = b
            at += len(b)
        reps.append(MatrixOverField(F, M))
        sizes.append(order // cent)
    keys = kernels.keys_of(n, F.tables(), np.stack([r.entries for r in reps]))
    perm = np.argsort(keys, kind="stable")
    if sum(sizes) != order or len(np.unique(keys)) != len(keys):
        raise AssertionError("class type data inconsistent")  # pragma: no cover
    return ConjClassTable(n, F, "types", [reps[i] for i in perm], [sizes[i] for i in perm], keys[perm])


# -- convolution --------------------------------------------------------------------


def _central_value(T, z):
    return T.order * T.fixed_by_central(z)


def commutator_distribution(T, workers=1):
    """f1(z) = #{(A, B) : [A, B] = z} for every class, as a ClassFunction.

    Uses f1(z) = sum over A of [Az conjugate to A] * |C_G(A)|: for each
    target class a single pass over G gives the pair histogram, whose
    diagonal weighted by centralizer orders is f1(z).
    """
    vals = []
    for zc in range(len(T)):
        z = T.reps[zc]
        if z.is_scalar():
            vals.append(_central_value(T, z))
            continue
        hist = T.pair_histogram(zc, workers)
        vals.append(sum(int(hist[c, c]) * T.centralizer_order(c) for c in range(len(T))))
    return ClassFunction(T, vals)


def _convolve_at(f, h, zc, workers=1):
    T = f.table
    hist = T.pair_histogram(zc, workers)
    inv = T.inv_class
    total = 0
    rows, cols = np.nonzero(hist)
    for c, d in zip(rows.tolist(), cols.tolist()):
        total += int(hist[c, d]) * f.values[int(inv[c])] * h.values[d]
    return total


def class_convolve(f, h, workers=1):
    """(f * h)(z) = sum over x in G of f(x) h(x^-1 z), for every class z."""
    if not isinstance(f, ClassFunction) or not isinstance(h, ClassFunction) or f.table is not h.table:
        raise TableMismatch("class functions live on different tables")
    return ClassFunction(f.table, [_convolve_at(f, h, zc, workers) for zc in range(len(f.table))])


def genus_count(T, g, z, workers=1):
    """#{(A_1, B_1, ..., A_g, B_g) in G^2g : prod [A_i, B_i] = z}."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if not isinstance(z, MatrixOverField) or z.field != T.field or z.n != T.n:
        raise TableMismatch("target is not a matrix of this group")
    if not z.is_invertible():
        raise SingularTarget("target matrix is singular")
    if g == 1 and z.is_scalar():
        return _central_value(T, z)
    zc = T.class_of(z)
    if g == 1:
        hist = T.pair_histogram(zc, workers)
        return sum(int(hist[c, c]) * T.centralizer_order(c) for c in range(len(T)))
    f1 = commutator_distribution(T, workers)
    acc = f1
    for _ in range(g - 2):
        acc = class_convolve(acc, f1, workers)
    return _convolve_at(acc, f1, zc, workers)


__all__ = [
    "ConjClassTable",
    "ClassFunction",
    "EnumerationTooLarge",
    "build_class_table",
    "commutator_distribution",
    "class_convolve",
    "genus_count",
    "class_types",
    "centralizer_factor",
    "partitions",
]
