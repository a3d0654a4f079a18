"""Counting representations of quiver presentations over finite fields.

A representation of dimension vector gamma assigns to each generator
arrow a: s -> t a gamma_t x gamma_s matrix (invertible for localized
arrows).  Relations are path sums that must vanish as matrices; the
potential can instead be imposed through the single condition
tr(W) = 0.  Stack counts divide the atlas count by prod_i |GL_gamma_i|.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import prod

import numpy as np

from . import _fieldops as fo
from . import config, kernels
from ._jsonutil import encode
from .charcount import stack_count, surface_circle_stack_count, untwisted_count
from .errors import EnumerationTooLarge, IdentityFailure, NoCut
from .ffield import gl_elements, gl_order
from .tileforge import (
    Cut,
    Presentation,
    cyclic_derivative,
    dual_quiver,
    find_cuts,
    jacobi_presentation,
    potential_of,
    two_dim_jacobi,
)


@dataclass
class RepProblem:
    """What to count: a presentation, a dimension vector and a field.

    ``impose`` is ``"all"`` (every relation of the presentation) or
    ``"none"``; ``potential`` adds the condition tr(W) = 0.
    """

    presentation: Presentation
    dims: tuple
    field: object
    impose: str = "all"
    potential: object = None

    def __post_init__(self):
        Q = self.presentation.quiver
        if isinstance(self.dims, int):
            self.dims = (self.dims,) * Q.num_vertices
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != Q.num_vertices or min(self.dims, default=0) < 0:
            raise ValueError("one non-negative dimension per quiver vertex expected")
        if self.impose not in ("all", "none"):
            raise ValueError("impose is 'all' or 'none'")


@dataclass(frozen=True)
class AtlasCount:
    raw: int
    group_order: int

    @property
    def stack_value(self):
        return Fraction(self.raw, self.group_order)

    def to_json(self):
        return {"raw": str(self.raw), "group_order": str(self.group_order), "stack_value": encode(self.stack_value)}


def rep_space_dims(Q, dims):
    """(atlas dimension, stack dimension) of Rep_gamma of the quiver."""
    if isinstance(dims, int):
        dims = (dims,) * Q.num_vertices
    atlas = sum(dims[Q.source[a]] * dims[Q.target[a]] for a in Q.arrows)
    return atlas, atlas - sum(d * d for d in dims)


def _all_rect(rows, cols, q):
    total = q ** (rows * cols)
    idx = np.arange(total, dtype=np.int64)
    out = np.empty((total, rows * cols), dtype=np.int64)
    for f in range(rows * cols - 1, -1, -1):
        out[:, f] = idx % q
        idx //= q
    return out.reshape(total, rows, cols)


def _choices(problem):
    """Candidate matrices for each generator, or None if some set is empty."""
    P, F = problem.presentation, problem.field
    Q = P.quiver
    D = max(max(problem.dims, default=1), 1)
    out = []
    for a in P.generators:
        s, t = problem.dims[Q.source[a]], problem.dims[Q.target[a]]
        if a in P.invertible:
            if s != t:
                return None, D
            cand = gl_elements(s, F) if s else np.zeros((1, 0, 0), dtype=np.int64)
        else:
            cand = _all_rect(t, s, F.q)
        padded = np.zeros((len(cand), D, D), dtype=np.int64)
        padded[:, :t, :s] = cand
        out.append(padded)
    return out, D


def _program(problem, choices):
    P, F = problem.presentation, problem.field
    pos = {a: i for i, a in enumerate(P.generators)}
    rels, modes = [], []
    if problem.impose == "all":
        rels += [r.simplified() for r in P.relations]
        modes += [0] * len(P.relations)
    if problem.potential is not None:
        rels.append(problem.potential)
        modes.append(1)
    rel_start, term_start, coefs, arrows = [0], [0], [], []
    for rel, mode in zip(rels, modes):
        terms = rel.terms if mode == 0 else tuple((s, w) for s, w in problem.potential.terms)
        for c, word in terms:
            if not word:
                raise ValueError("empty paths are not supported in relations")
            for a in word:
                if a not in pos:
                    raise ValueError(f"relation uses arrow {P.quiver.names[a]} outside the generators")
                arrows.append(pos[a])
            coefs.append(c % F.p)
            term_start.append(len(arrows))
        rel_start.append(len(coefs))
    radix = np.array([len(c) for c in choices], dtype=np.int64)
    offs = np.concatenate([[0], np.cumsum(radix)[:-1]]).astype(np.int64) if len(radix) else np.zeros(0, np.int64)
    mats = np.concatenate(choices) if choices else np.zeros((1, 1, 1), np.int64)
    as_arr = lambda v: np.array(v, dtype=np.int64)  # noqa: E731
    return {
        "mats": np.ascontiguousarray(mats),
        "offs": offs,
        "radix": radix,
        "rel_start": as_arr(rel_start),
        "rel_mode": as_arr(modes),
        "term_start": as_arr(term_start),
        "term_coef": as_arr(coefs),
        "term_arrows": as_arr(arrows),
    }


def count_reps(problem, workers=1, backend=None, limit=None):
    """Atlas count of the representation space with the chosen conditions."""
    F = problem.field
    group = prod(gl_order(d, F) for d in problem.dims if d) if any(problem.dims) else 1
    choices, _ = _choices(problem)
    if choices is None:
        return AtlasCount(0, group)
    total = prod(len(c) for c in choices)
    cap = config.iteration_limit(limit)
    if total > cap:
        raise EnumerationTooLarge(f"{total} representation tuples exceed the iteration limit {cap}")
    prog = _program(problem, choices)
    raw = kernels.count_tuples(prog, F.tables(), total, workers=workers, backend=backend)
    return AtlasCount(raw, group)


# -- identity checks ------------------------------------------------------------------------


def _report(check, inputs, lhs, rhs, raise_on_fail, details=None):
    rep = {"check": check, "inputs": inputs, "lhs": encode(lhs), "rhs": encode(rhs), "pass": lhs == rhs}
    if details:
        rep["details"] = details
    if raise_on_fail and not rep["pass"]:
        raise IdentityFailure(f"{check} failed: lhs {lhs} != rhs {rhs}", report=rep)
    return rep


def _cut_set(Q, cut):
    if isinstance(cut, Cut):
        return cut.arrows
    return frozenset(Q.arrow(a) for a in cut)


def dimred_count_check(Q, W, cut, dims, F, invertible=None, raise_on_fail=True, workers=1):
    """#f^-1(0) = q^(d-1) #Y + q^(d-1) (q-1) #Z for f = tr(W), linear in the cut arrows.

    Y is the atlas of the non-cut arrows (localized at ``invertible``,
    default all of them), Z the locus in Y where d W / d a = 0 for every
    cut arrow a, and d the number of cut-arrow coordinates.
    """
    E = _cut_set(Q, cut)
    if isinstance(dims, int):
        dims = (dims,) * Q.num_vertices
    two_d = two_dim_jacobi(Q, W, E, invertible)
    inv = two_d.invertible
    full = Presentation(Q.localized(inv), tuple(Q.arrows), inv, [], [])
    f_zero = count_reps(RepProblem(full, dims, F, "none", W), workers).raw
    Y = count_reps(RepProblem(two_d, dims, F, "none"), workers).raw
    Z = count_reps(RepProblem(two_d, dims, F, "all"), workers).raw
    d = sum(dims[Q.source[a]] * dims[Q.target[a]] for a in E)
    q = Fraction(F.q)
    rhs = q ** (d - 1) * Y + q ** (d - 1) * (q - 1) * Z
    inputs = {
        "cut": sorted(Q.names[a] for a in E),
        "dims": list(dims),
        "q": F.q,
        "invertible": sorted(Q.names[a] for a in inv),
    }
    details = {"f_zero": str(f_zero), "Y": str(Y), "Z": str(Z), "d": d}
    return _report("dimred", inputs, Fraction(f_zero), rhs, raise_on_fail, details)


def _first_cut(Q, W, cut):
    if cut is not None:
        return _cut_set(Q, cut)
    cuts = find_cuts(Q, W)
    if not cuts:
        raise NoCut("the potential admits no cut")
    return cuts[0].arrows


def morita_count_check(T, n, F, cut=None, raise_on_fail=True, workers=1):
    """Stack count of the 2d Jacobi algebra at (n, ..., n) against U_{g,n} / |GL_n|."""
    Q, W = dual_quiver(T), potential_of(T)
    E = _first_cut(Q, W, cut)
    pres = two_dim_jacobi(Q, W, E)
    atlas = count_reps(RepProblem(pres, n, F, "all"), workers)
    rhs = stack_count(untwisted_count(n, T.genus, F, workers=workers)).value
    inputs = {"tiling": T.label, "genus": T.genus, "n": n, "q": F.q, "cut": sorted(Q.names[a] for a in E)}
    return _report("morita", inputs, atlas.stack_value, rhs, raise_on_fail, atlas.to_json())


def gtrue_count_check(T, n, F, raise_on_fail=True, workers=1):
    """Stack count of the fully localized Jacobi algebra against the surface x circle count."""
    Q, W = dual_quiver(T), potential_of(T)
    atlas = count_reps(RepProblem(jacobi_presentation(Q, W), n, F, "all"), workers)
    rhs = surface_circle_stack_count(n, T.genus, F, workers=workers).value
    inputs = {"tiling": T.label, "genus": T.genus, "n": n, "q": F.q}
    return _report("gtrue", inputs, atlas.stack_value, rhs, raise_on_fail, atlas.to_json())


def relation_arrows(Q, W, cut):
    """Arrows used by the relations d W / d a, a in the cut."""
    used = set()
    for a in _cut_set(Q, cut):
        used |= cyclic_derivative(W, a).arrows()
    return used
