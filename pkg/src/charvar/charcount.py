"""Point counts of twisted/untwisted character varieties and stacks.

Solution counts are exact integers; variety and stack counts are exact
``Fraction`` values.  The class-function counters are cross-checked by
:func:`brute_force_count`, which walks the tuple space directly and
never looks at conjugacy classes.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import _fieldops as fo
from . import config
from .classdata import build_class_table, genus_count
from .errors import EnumerationTooLarge, NonIntegralQuotient
from .ffield import (
    MatrixOverField,
    all_matrices,
    gl_elements,
    gl_order,
    primitive_root_of_unity,
)

KINDS = (
    "twisted-solutions",
    "untwisted-solutions",
    "twisted-variety",
    "twisted-stack",
    "untwisted-stack",
    "additive-mu-stack",
    "surface-circle-stack",
)

# groups up to this order get the enumerated class table; larger ones
# use the elementary-divisor table, which gives identical class data
ENUMERATE_TABLE_MAX = 2_000_000


@dataclass(frozen=True)
class CountRecord:
    n: int
    g: int
    field: tuple
    kind: str
    value: Fraction
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown count kind {self.kind!r}")
        object.__setattr__(self, "value", Fraction(self.value))
        if self.kind.endswith("solutions") and self.value.denominator != 1:
            raise ValueError("solution counts are integers")

    @property
    def q(self):
        p, k = self.field
        return p**k

    def to_json(self):
        v = self.value
        value = str(v.numerator) if v.denominator == 1 else {"num": str(v.numerator), "den": str(v.denominator)}
        return {"n": self.n, "g": self.g, "p": self.field[0], "k": self.field[1], "kind": self.kind, "value": value}


def table_for(n, F, method="auto"):
    if method == "auto":
        method = "enumerate" if gl_order(n, F) <= ENUMERATE_TABLE_MAX else "types"
    return build_class_table(n, F, method)


def _solutions(n, g, F, z, kind, method, workers, extra=None):
    if g < 1:
        raise ValueError("genus must be >= 1")
    T = table_for(n, F, method)
    value = genus_count(T, g, z, workers=workers)
    return CountRecord(n, g, (F.p, F.k), kind, value, extra or {})


def twisted_count(n, g, F, root=None, method="auto", workers=1):
    """#{(A_i, B_i) in GL_n(F)^2g : prod [A_i, B_i] = zeta * Id}, zeta of exact order n."""
    zeta = primitive_root_of_unity(F, n).element if root is None else F(root)
    z = MatrixOverField.scalar(F, n, zeta)
    return _solutions(n, g, F, z, "twisted-solutions", method, workers, {"root": int(zeta)})


def untwisted_count(n, g, F, method="auto", workers=1):
    """#{(A_i, B_i) in GL_n(F)^2g : prod [A_i, B_i] = Id}."""
    return _solutions(n, g, F, MatrixOverField.identity(F, n), "untwisted-solutions", method, workers)


def twisted_variety_count(n, g, F, root=None, method="auto", workers=1):
    """Points of the twisted character variety: solutions / |PGL_n(F)|."""
    rec = twisted_count(n, g, F, root, method, workers)
    pgl = gl_order(n, F) // (F.q - 1)
    value = int(rec.value)
    if value % pgl:
        raise NonIntegralQuotient(f"{value} solutions not divisible by |PGL_{n}| = {pgl}")
    return CountRecord(n, g, rec.field, "twisted-variety", value // pgl, rec.extra)


def stack_count(record):
    """Stack count from a solutions record: divide by |GL_n(F)|."""
    kinds = {"twisted-solutions": "twisted-stack", "untwisted-solutions": "untwisted-stack"}
    if record.kind not in kinds:
        raise ValueError(f"stack_count needs a solutions record, got {record.kind}")
    order = gl_order(record.n, record.q)
    return CountRecord(record.n, record.g, record.field, kinds[record.kind], record.value / order, record.extra)


def additive_mu_stack_count(n, g, F, workers=1):
    """#{(A_j, B_j) in Mat_n(F)^2g : sum [A_j, B_j] = 0} / |GL_n(F)|."""
    raw = brute_force_count(n, g, F, "additive", workers=workers)
    return CountRecord(n, g, (F.p, F.k), "additive-mu-stack", Fraction(raw, gl_order(n, F)), {"raw": raw})


def surface_circle_stack_count(n, g, F, workers=1):
    """Tuples (A_i, B_i, C) in GL_n with prod [A_i, B_i] = Id and C central to all, over |GL_n|.

    Summed over the class of C: for each class representative c the
    tuples live in the centralizer of c.  Central c contributes the
    untwisted count; other classes are counted directly inside the
    centralizer subgroup.
    """
    T = table_for(n, F)
    t = F.tables()
    elems = gl_elements(n, F)
    raw = 0
    untw = None
    for c, size in zip(T.reps, T.sizes):
        if c.is_scalar():
            if untw is None:
                untw = genus_count(T, g, MatrixOverField.identity(F, n), workers=workers)
            raw += size * untw
            continue
        comm = np.all(fo.matmul(t, elems, c.entries) == fo.matmul(t, c.entries, elems), axis=(1, 2))
        Z = elems[comm]
        tally = _commutator_tally(Z, g, t, workers)
        raw += size * int(tally[_identity_position(Z)])
    return CountRecord(n, g, (F.p, F.k), "surface-circle-stack", Fraction(raw, gl_order(n, F)), {"raw": raw})


# -- brute force --------------------------------------------------------------------


def _identity_position(mats):
    n = mats.shape[-1]
    hit = np.nonzero(np.all(mats == np.eye(n, dtype=np.int64), axis=(1, 2)))[0]
    return int(hit[0])


class _Subgroup:
    """A finite matrix group given by its elements, sorted by code."""

    def __init__(self, mats, t):
        self.t = t
        codes = fo.encode(t.q, mats)
        order = np.argsort(codes)
        self.mats = np.ascontiguousarray(mats[order])
        self.codes = codes[order]
        self.inv = self.positions(fo.inverse(t, self.mats))

    def __len__(self):
        return len(self.codes)

    def positions(self, mats):
        c = fo.encode(self.t.q, mats)
        pos = np.searchsorted(self.codes, c)
        return pos

    def commutator_row(self, a):
        t = self.t
        A, Ai = self.mats[a], self.mats[self.inv[a]]
        P = fo.matmul(t, fo.matmul(t, A, self.mats), fo.matmul(t, Ai, self.mats[self.inv]))
        return self.positions(P)

    def mult_table(self):
        t = self.t
        return np.stack([self.positions(fo.matmul(t, self.mats[a], self.mats)) for a in range(len(self))])


def _tally_g1(args):
    mats, t, lo, hi = args
    S = _Subgroup(mats, t)
    tally = np.zeros(len(S), dtype=np.int64)
    for a in range(lo, hi):
        tally += np.bincount(S.commutator_row(a), minlength=len(S))
    return tally


def _tally_prefix(args):
    mul, flat, start_pos, lo, hi, pairs = args
    m = mul.shape[0]
    tally = np.zeros(m, dtype=np.int64)
    mm = len(flat)
    for code in range(lo, hi):
        p = start_pos
        rest = code
        digits = []
        for _ in range(pairs):
            digits.append(rest % mm)
            rest //= mm
        for d in reversed(digits):
            p = mul[p, flat[d]]
        tally += np.bincount(mul[p, flat], minlength=m)
    return tally


def _run(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(fn, jobs))
    else:
        parts = [fn(j) for j in jobs]
    return sum(parts[1:], parts[0])


def _split(total, workers):
    from .ffield import partition_ranges

    return [r for r in partition_ranges(total, max(1, workers)) if r[1] > r[0]] or [(0, 0)]


def _commutator_tally(mats, g, t, workers=1, limit=None):
    """For each element z of the group ``mats``, #{tuples with prod [A_i, B_i] = z}.

    Returned in the order of ``mats`` sorted by integer code.
    """
    m = len(mats)
    cap = config.iteration_limit(limit)
    if m ** (2 * g) > cap:
        raise EnumerationTooLarge(f"{m}^{2 * g} tuples exceed the iteration limit {cap}")
    S = _Subgroup(mats, t)
    if g == 1:
        jobs = [(S.mats, t, lo, hi) for lo, hi in _split(m, workers)]
        return _run(_tally_g1, jobs, workers)
    flat = np.concatenate([S.commutator_row(a) for a in range(m)])
    mul = S.mult_table()
    pairs = g - 1
    ident = _identity_position(S.mats)
    jobs = [(mul, flat, ident, lo, hi, pairs) for lo, hi in _split(len(flat) ** pairs, workers)]
    return _run(_tally_prefix, jobs, workers)


def brute_force_tally(n, g, F, workers=1, limit=None):
    """Counts for every target: returns (elements, tally) with elements sorted by code."""
    mats = gl_elements(n, F)
    S = _Subgroup(mats, F.tables())
    return S.mats, _commutator_tally(mats, g, F.tables(), workers, limit)


def _additive_rows(args):
    n, t, lo, hi, total = args
    M = fo.decode(n, t.q, np.arange(total, dtype=np.int64))
    out = []
    for a in range(lo, hi):
        out.append(fo.encode(t.q, fo.sub(t, fo.matmul(t, M[a], M), fo.matmul(t, M, M[a]))))
    return np.stack(out) if out else np.zeros((0, total), dtype=np.int64)


def _additive_count(n, g, F, workers, limit):
    t = F.tables()
    total = F.q ** (n * n)
    cap = config.iteration_limit(limit)
    if total ** (2 * g) > cap:
        raise EnumerationTooLarge(f"{total}^{2 * g} tuples exceed the iteration limit {cap}")
    jobs = [(n, t, lo, hi, total) for lo, hi in _split(total, workers)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_additive_rows, jobs))
    else:
        rows = [_additive_rows(j) for j in jobs]
    flat = np.concatenate(rows).ravel()
    if g == 1:
        return int(np.sum(flat == 0))
    M = all_matrices(n, F)
    add = np.stack([fo.encode(t.q, t.add[M[a], M]) for a in range(total)])
    result = 0
    for prefix in product(range(len(flat)), repeat=g - 1):
        s = 0
        for d in prefix:
            s = add[s, flat[d]]
        result += int(np.sum(add[s, flat] == 0))
    return result


def brute_force_count(n, g, F, target, workers=1, limit=None):
    """Direct count of 2g-tuples whose commutator product equals ``target``.

    ``target`` is an invertible :class:`MatrixOverField`, or ``"additive"``
    for tuples of arbitrary matrices with sum of additive commutators zero.
    """
    if isinstance(target, str):
        if target != "additive":
            raise ValueError(f"unknown target {target!r}")
        return _additive_count(n, g, F, workers, limit)
    order = gl_order(n, F)
    cap = config.iteration_limit(limit)
    if order ** (2 * g) > cap:
        raise EnumerationTooLarge(f"{order}^{2 * g} tuples exceed the iteration limit {cap}")
    mats, tally = brute_force_tally(n, g, F, workers, limit)
    hit = np.nonzero(np.all(mats == target.entries, axis=(1, 2)))[0]
    if len(hit) == 0:
        return 0
    return int(tally[hit[0]])


def brute_force_surface_circle(n, g, F, limit=None):
    """Direct count of (A_i, B_i, C) with prod [A_i, B_i] = Id and C commuting with all."""
    t = F.tables()
    mats = gl_elements(n, F)
    m = len(mats)
    cap = config.iteration_limit(limit)
    if m ** (2 * g + 1) > cap:
        raise EnumerationTooLarge(f"{m}^{2 * g + 1} tuples exceed the iteration limit {cap}")
    S = _Subgroup(mats, t)
    mul = S.mult_table()
    commute = mul == mul.T
    comm = np.stack([S.commutator_row(a) for a in range(m)])
    ident = _identity_position(S.mats)
    total = 0
    for tup in product(range(m), repeat=2 * g):
        p = ident
        for i in range(g):
            p = mul[p, comm[tup[2 * i], tup[2 * i + 1]]]
        if p != ident:
            continue
        ok = np.ones(m, dtype=bool)
        for a in tup:
            ok &= commute[a]
        total += int(ok.sum())
    return total
