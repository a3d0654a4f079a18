"""Brane tilings as rotation systems, their dual quivers and potentials.

A tiling is a bipartite graph on a closed oriented surface given
combinatorially: edges are 0..E-1 and each white (black) vertex lists its
edges in cyclic order.  With sigma_w, sigma_b the resulting permutations of
the edges, the faces are the orbits of phi = sigma_b o sigma_w.

The dual quiver has one vertex per face (numbered by smallest edge) and an
arrow per edge e from the face of sigma_w^-1(e) to the face of e.  The
white vertex with edges e, sigma_w e, ... then gives the cycle
arrow(e) arrow(sigma_w e) ..., and the black vertex gives the cycle
arrow(e) arrow(sigma_b^-1 e) ... running the other way round.  A word
[a1, ..., ak] is a path (a1 first); it acts on representations as the
matrix product rho(ak) ... rho(a1).
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import AuditFailure, CutMeetsLocalization, GenusZero, MalformedMap, NoGrading


def _perm_from_cycles(cycles, E, colour):
    perm = [None] * E
    for cyc in cycles:
        if not cyc:
            raise MalformedMap(f"empty {colour} cycle")
        for i, e in enumerate(cyc):
            if not isinstance(e, int) or not 0 <= e < E:
                raise MalformedMap(f"{colour} cycle mentions unknown edge {e!r}")
            if perm[e] is not None:
                raise MalformedMap(f"edge {e} appears twice among {colour} cycles")
            perm[e] = cyc[(i + 1) % len(cyc)]
    missing = [e for e in range(E) if perm[e] is None]
    if missing:
        raise MalformedMap(f"edges {missing} missing from {colour} cycles")
    return perm


def _invert(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return inv


def _orbits(perm):
    seen, out = [False] * len(perm), []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orb, e = [], start
        while not seen[e]:
            seen[e] = True
            orb.append(e)
            e = perm[e]
        out.append(orb)
    return out


class BraneTiling:
    """Bipartite map on a closed surface of genus >= 1."""

    def __init__(self, edges, white, black, names=None, label=None):
        if edges < 1:
            raise MalformedMap("a tiling needs at least one edge")
        self.edges = edges
        self.white = [list(c) for c in white]
        self.black = [list(c) for c in black]
        self.label = label
        self.sigma_w = _perm_from_cycles(self.white, edges, "white")
        self.sigma_b = _perm_from_cycles(self.black, edges, "black")
        phi = [self.sigma_b[self.sigma_w[e]] for e in range(edges)]
        self.faces = _orbits(phi)
        self.face_of = [0] * edges
        for i, orb in enumerate(self.faces):
            for e in orb:
                self.face_of[e] = i
        if not self._connected():
            raise MalformedMap("the map is not connected")
        chi = self.V - self.E + self.F
        if chi % 2:
            raise MalformedMap(f"odd Euler characteristic {chi}")
        genus = (2 - chi) // 2
        if genus == 0:
            raise GenusZero("the map lives on a sphere; genus >= 1 is required")
        if genus < 0:
            raise MalformedMap(f"Euler characteristic {chi} is impossible for a connected map")
        self.genus = genus
        if names is not None and len(names) != edges:
            raise MalformedMap("one arrow name per edge expected")
        self.names = list(names) if names is not None else [f"a{e}" for e in range(edges)]
        self.white_of = [0] * edges
        self.black_of = [0] * edges
        for i, c in enumerate(self.white):
            for e in c:
                self.white_of[e] = i
        for i, c in enumerate(self.black):
            for e in c:
                self.black_of[e] = i

    def _connected(self):
        parent = list(range(self.edges))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for c in self.white + self.black:
            for e in c[1:]:
                parent[find(e)] = find(c[0])
        return len({find(e) for e in range(self.edges)}) == 1

    @property
    def V(self):
        return len(self.white) + len(self.black)

    @property
    def E(self):
        return self.edges

    @property
    def F(self):
        return len(self.faces)

    def __repr__(self):
        name = f" {self.label}" if self.label else ""
        return f"BraneTiling{name}(V={self.V}, E={self.E}, F={self.F}, genus={self.genus})"

    def to_json(self):
        return {"edges": self.edges, "white": self.white, "black": self.black, "names": self.names}


def build_tiling(white_cycles, black_cycles, edges=None, names=None, label=None):
    if edges is None:
        edges = 1 + max(e for c in list(white_cycles) + list(black_cycles) for e in c)
    return BraneTiling(edges, white_cycles, black_cycles, names, label)


CORPUS = ("hex-torus", "square-torus", "genus2")


def load_tiling(source):
    """Tiling from a JSON file path or a built-in corpus name (``.json`` optional)."""
    path = Path(str(source))
    if path.exists():
        data = json.loads(path.read_text())
        label = path.stem
    else:
        name = path.name[:-5] if path.name.endswith(".json") else path.name
        if name not in CORPUS:
            raise FileNotFoundError(f"no tiling file or corpus entry named {source!r}")
        data = json.loads(resources.files("charvar.data.tilings").joinpath(f"{name}.json").read_text())
        label = name
    for key in ("edges", "white", "black"):
        if key not in data:
            raise MalformedMap(f"tiling JSON lacks {key!r}")
    return BraneTiling(data["edges"], data["white"], data["black"], data.get("names"), label)


def corpus():
    return [load_tiling(name) for name in CORPUS]


# -- quivers and potentials ------------------------------------------------------------


@dataclass(frozen=True)
class Quiver:
    num_vertices: int
    names: tuple
    source: tuple
    target: tuple
    invertible: frozenset = None

    def __post_init__(self):
        if not len(self.names) == len(self.source) == len(self.target):
            raise ValueError("arrow data of unequal length")
        for s, t in zip(self.source, self.target):
            if not (0 <= s < self.num_vertices and 0 <= t < self.num_vertices):
                raise ValueError("arrow endpoint out of range")
        if self.invertible is None:
            object.__setattr__(self, "invertible", frozenset(range(len(self.names))))

    @property
    def arrows(self):
        return range(len(self.names))

    def arrow(self, name_or_id):
        if isinstance(name_or_id, int):
            return name_or_id
        return self.names.index(name_or_id)

    def localized(self, arrows):
        return Quiver(self.num_vertices, self.names, self.source, self.target, frozenset(self.arrow(a) for a in arrows))

    def is_path(self, word):
        return all(self.target[a] == self.source[b] for a, b in zip(word, word[1:]))

    def is_cycle(self, word):
        return bool(word) and self.is_path(word) and self.target[word[-1]] == self.source[word[0]]


@dataclass(frozen=True)
class Potential:
    terms: tuple  # ((sign, word), ...)

    def arrow_counts(self, a):
        return sum(word.count(a) for _, word in self.terms)


@dataclass(frozen=True)
class PathSum:
    """Formal integer combination of paths, kept as a list of (coefficient, word)."""

    terms: tuple

    def simplified(self):
        acc = {}
        for c, w in self.terms:
            acc[w] = acc.get(w, 0) + c
        return PathSum(tuple((c, w) for w, c in acc.items() if c))

    def arrows(self):
        return {a for _, w in self.terms for a in w}

    def _canonical(self):
        return tuple(sorted(self.simplified().terms, key=lambda t: t[1]))

    def __eq__(self, other):
        if not isinstance(other, PathSum):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def format(self, names):
        if not self.terms:
            return "0"
        out = []
        for c, w in self.terms:
            word = "".join(names[a] for a in w) or "e"
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            out.append(f"{sign} {mag}{word}")
        text = " ".join(out)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def path_sum(names, *terms):
    """Build a PathSum from (coefficient, 'xyz') pairs with single-letter arrow names."""
    return PathSum(tuple((c, tuple(names.index(ch) for ch in w)) for c, w in terms))


def dual_quiver(T):
    source = tuple(T.face_of[_invert(T.sigma_w)[e]] for e in range(T.E))
    target = tuple(T.face_of[e] for e in range(T.E))
    return Quiver(T.F, tuple(T.names), source, target)


def _cycle_from(start, step):
    word, e = [start], step[start]
    while e != start:
        word.append(e)
        e = step[e]
    return tuple(word)


def potential_of(T):
    """W = sum of white cycles minus sum of black cycles, each started at its smallest edge."""
    inv_b = _invert(T.sigma_b)
    terms = [(1, _cycle_from(min(c), T.sigma_w)) for c in T.white]
    terms += [(-1, _cycle_from(min(c), inv_b)) for c in T.black]
    return Potential(tuple(terms))


def cyclic_derivative(W, a):
    """sum over occurrences of a in each term v a w of sign * (w v), unsimplified."""
    out = []
    for sign, word in W.terms:
        for i, b in enumerate(word):
            if b == a:
                out.append((sign, word[i + 1:] + word[:i]))
    return PathSum(tuple(out))


@dataclass(frozen=True)
class Cut:
    arrows: frozenset

    def __iter__(self):
        return iter(sorted(self.arrows))

    def __len__(self):
        return len(self.arrows)

    def names(self, Q):
        return [Q.names[a] for a in sorted(self.arrows)]


def find_cuts(Q, W):
    """Every arrow set meeting each potential term exactly once (with multiplicity)."""
    nterms = len(W.terms)
    occ = [[] for _ in Q.arrows]  # occ[a] = [(term, multiplicity)]
    for t, (_, word) in enumerate(W.terms):
        for a in set(word):
            occ[a].append((t, word.count(a)))
    remaining = [len(word) for _, word in W.terms]
    last = [-1] * nterms
    for t, (_, word) in enumerate(W.terms):
        last[t] = max(word) if word else -1
    hits = [0] * nterms
    out = []
    chosen = []

    def rec(a):
        # every term whose arrows are all decided must be hit exactly once
        if a == len(Q.names):
            if all(h == 1 for h in hits):
                out.append(Cut(frozenset(chosen)))
            return
        ok = True
        for t, m in occ[a]:
            hits[t] += m
            if hits[t] > 1:
                ok = False
        if ok and all(hits[t] == 1 for t, _ in occ[a] if last[t] == a):
            chosen.append(a)
            rec(a + 1)
            chosen.pop()
        for t, m in occ[a]:
            hits[t] -= m
        if all(hits[t] == 1 for t, _ in occ[a] if last[t] == a):
            rec(a + 1)

    if any(not word for _, word in W.terms):
        return []
    rec(0)
    return out


def perfect_matchings(T):
    """Edge sets covering every vertex of the tiling graph exactly once."""
    out = []
    used_black = [False] * len(T.black)

    def rec(i, chosen):
        if i == len(T.white):
            if all(used_black):
                out.append(frozenset(chosen))
            return
        for e in T.white[i]:
            b = T.black_of[e]
            if not used_black[b]:
                used_black[b] = True
                rec(i + 1, chosen + [e])
                used_black[b] = False

    if len(T.white) == len(T.black):
        rec(0, [])
    return out


# -- gradings ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    weights: tuple

    def term_weight(self, word):
        return sum((self.weights[a] for a in word), Fraction(0))

    def is_valid(self, W):
        return all(self.term_weight(word) == 1 for _, word in W.terms)


def _rref_fractions(rows):
    rows = [list(r) for r in rows]
    piv_rows, r = [], 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_rows.append(c)
        r += 1
    return rows, r, piv_rows


def _solve(M, b):
    """Solution of the square nonsingular system M x = b over the rationals."""
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, _, _ = _rref_fractions(aug)
    return [row[-1] for row in R]


def grading_from(Q, W, cut=None):
    """Cut grading (cut arrows weight 1) or the minimum-norm rational solution."""
    if cut is not None:
        arrows = cut.arrows if isinstance(cut, Cut) else frozenset(cut)
        g = Grading(tuple(Fraction(1 if a in arrows else 0) for a in Q.arrows))
        if not g.is_valid(W):
            raise NoGrading("the arrow set is not a cut")
        return g
    A = [[Fraction(word.count(a)) for a in Q.arrows] for _, word in W.terms]
    aug = [row + [Fraction(1)] for row in A]
    R, rank, piv = _rref_fractions(aug)
    if any(c == len(Q.names) for c in piv):
        raise NoGrading("no weights make every term homogeneous of weight 1")
    # independent rows of A span the same row space; pick them by elimination on A^T
    _, _, indep = _rref_fractions([list(col) for col in zip(*A)])
    Ar = [A[i] for i in indep]
    G = [[sum(x * y for x, y in zip(r1, r2)) for r2 in Ar] for r1 in Ar]
    y = _solve(G, [Fraction(1)] * len(Ar))
    w = [sum(y[i] * Ar[i][a] for i in range(len(Ar))) for a in Q.arrows]
    g = Grading(tuple(w))
    if not g.is_valid(W):  # pragma: no cover - guaranteed by consistency
        raise NoGrading("weight system inconsistent")
    return g


# -- presentations --------------------------------------------------------------------------


@dataclass
class Presentation:
    """Generators (arrows, some invertible) and relations (path sums that must vanish)."""

    quiver: Quiver
    generators: tuple
    invertible: frozenset
    relations: list = field(default_factory=list)
    relation_labels: list = field(default_factory=list)

    def text(self):
        Q = self.quiver
        lines = ["arrows:"]
        for a in self.generators:
            mark = " (invertible)" if a in self.invertible else ""
            lines.append(f"  {Q.names[a]}: {Q.source[a]} -> {Q.target[a]}{mark}")
        lines.append("relations:")
        for lab, rel in zip(self.relation_labels, self.relations):
            lines.append(f"  d/d{lab}: {rel.simplified().format(Q.names)}")
        return "\n".join(lines)

    def to_json(self):
        Q = self.quiver
        return {
            "arrows": [
                {"name": Q.names[a], "source": Q.source[a], "target": Q.target[a], "invertible": a in self.invertible}
                for a in self.generators
            ],
            "relations": [
                {"derivative": lab, "terms": [[c, [Q.names[a] for a in w]] for c, w in rel.simplified().terms]}
                for lab, rel in zip(self.relation_labels, self.relations)
            ],
        }


def jacobi_presentation(Q, W):
    rels = [cyclic_derivative(W, a) for a in Q.arrows]
    return Presentation(Q, tuple(Q.arrows), Q.invertible, rels, [Q.names[a] for a in Q.arrows])


def two_dim_jacobi(Q, W, cut, invertible=None):
    """Arrows outside the cut (localized at ``invertible``, default all of them) modulo d W / d a for a in the cut."""
    E = cut.arrows if isinstance(cut, Cut) else frozenset(Q.arrow(a) for a in cut)
    survivors = tuple(a for a in Q.arrows if a not in E)
    inv = frozenset(survivors) if invertible is None else frozenset(Q.arrow(a) for a in invertible)
    if inv & E:
        raise CutMeetsLocalization(f"cut arrows {sorted(Q.names[a] for a in inv & E)} cannot be inverted")
    rels = [cyclic_derivative(W, a) for a in sorted(E)]
    return Presentation(Q.localized(inv), survivors, inv, rels, [Q.names[a] for a in sorted(E)])


def shift_audit(T, n, cuts=None):
    """(V n^2, (E - F) n^2, difference), checking the difference is (2 - 2g) n^2."""
    n2 = n * n
    Q = dual_quiver(T)
    a, b = T.V * n2, (len(Q.names) - Q.num_vertices) * n2
    if a - b != (2 - 2 * T.genus) * n2:
        raise AuditFailure(f"shift {a - b} differs from (2-2g)n^2 = {(2 - 2 * T.genus) * n2}")
    if cuts is None:
        cuts = find_cuts(Q, potential_of(T))
    for c in cuts:
        if 2 * len(c) != T.V:
            raise AuditFailure(f"cut of size {len(c)} but V/2 = {T.V / 2}")
    return a, b, a - b
