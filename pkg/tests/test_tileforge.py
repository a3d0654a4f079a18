import json
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from charvar.errors import AuditFailure, CutMeetsLocalization, GenusZero, MalformedMap, NoGrading
from charvar.tileforge import (
    CORPUS,
    BraneTiling,
    Potential,
    Quiver,
    build_tiling,
    corpus,
    cyclic_derivative,
    dual_quiver,
    find_cuts,
    grading_from,
    jacobi_presentation,
    load_tiling,
    path_sum,
    perfect_matchings,
    potential_of,
    shift_audit,
    two_dim_jacobi,
)


@pytest.fixture
def hexagon():
    T = load_tiling("hex-torus")
    return T, dual_quiver(T), potential_of(T)


def test_hex_torus_shape(hexagon):
    T, Q, W = hexagon
    assert (T.V, T.E, T.F, T.genus) == (2, 3, 1, 1)
    assert Q.num_vertices == 1 and len(Q.names) == 3
    assert all(Q.source[a] == Q.target[a] == 0 for a in Q.arrows)


def test_square_torus_shape():
    T = load_tiling("square-torus")
    Q = dual_quiver(T)
    assert (T.V, T.E, T.F, T.genus) == (2, 4, 2, 1)
    assert Q.num_vertices == 2
    forward = sum(1 for a in Q.arrows if (Q.source[a], Q.target[a]) == (0, 1))
    assert forward == 2 and len(Q.names) - forward == 2


def test_genus_two_shape():
    T = load_tiling("genus2")
    assert T.genus == 2
    assert T.V - T.E + T.F == -2


def test_load_by_name_or_path(tmp_path):
    a = load_tiling("hex-torus")
    b = load_tiling("hex-torus.json")
    path = tmp_path / "mine.json"
    path.write_text(json.dumps(a.to_json()))
    c = load_tiling(str(path))
    assert a.to_json() == b.to_json() == c.to_json()
    assert [t.label for t in corpus()] == list(CORPUS)


def test_sphere_map_rejected():
    with pytest.raises(GenusZero):
        build_tiling([[0, 1]], [[1, 0]])


@pytest.mark.parametrize(
    "white,black,edges",
    [
        ([[0, 1]], [[0]], 2),  # edge 1 has no black vertex
        ([[0, 1], [1]], [[0, 1]], 2),  # edge 1 twice
        ([[0]], [[0]], 2),  # edge 1 missing everywhere
        ([[0], [1]], [[0], [1]], 2),  # disconnected
    ],
)
def test_malformed_maps(white, black, edges):
    with pytest.raises(MalformedMap):
        BraneTiling(edges, white, black)


def test_malformed_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"edges": 2, "white": [[0, 1]], "black": [[0]]}))
    with pytest.raises(MalformedMap):
        load_tiling(str(path))


def test_hex_potential(hexagon):
    T, Q, W = hexagon
    words = {s: "".join(Q.names[a] for a in w) for s, w in W.terms}
    rotations = lambda w: {w[i:] + w[:i] for i in range(len(w))}  # noqa: E731
    assert words[1] in rotations("xyz")
    assert words[-1] in rotations("xzy")


def test_square_potential():
    T = load_tiling("square-torus")
    Q, W = dual_quiver(T), potential_of(T)
    assert sorted(s for s, _ in W.terms) == [-1, 1]
    assert all(len(w) == 4 and Q.is_cycle(w) for _, w in W.terms)


@pytest.mark.parametrize("name", CORPUS)
def test_potential_sign_balance(name):
    T = load_tiling(name)
    Q, W = dual_quiver(T), potential_of(T)
    for a in Q.arrows:
        assert sum(s * w.count(a) for s, w in W.terms) == 0
    assert all(Q.is_cycle(w) for _, w in W.terms)


def test_hex_cyclic_derivatives(hexagon):
    T, Q, W = hexagon
    n = Q.names
    assert cyclic_derivative(W, Q.arrow("x")) == path_sum(n, (1, "yz"), (-1, "zy"))
    assert cyclic_derivative(W, Q.arrow("y")) == path_sum(n, (1, "zx"), (-1, "xz"))
    assert cyclic_derivative(W, Q.arrow("z")) == path_sum(n, (1, "xy"), (-1, "yx"))
    assert cyclic_derivative(W, 0).format(n) == "yz - zy"


def test_derivative_of_absent_arrow_vanishes():
    Q = Quiver(1, ("x", "y"), (0, 0), (0, 0))
    W = Potential(((1, (0, 0, 0)),))
    assert cyclic_derivative(W, 1).simplified().terms == ()
    assert cyclic_derivative(W, 0) == path_sum(Q.names, (3, "xx"))


@pytest.mark.parametrize("name", CORPUS)
def test_derivative_term_count_matches_occurrences(name):
    T = load_tiling(name)
    Q, W = dual_quiver(T), potential_of(T)
    for a in Q.arrows:
        assert len(cyclic_derivative(W, a).terms) == W.arrow_counts(a)


def test_hex_cuts(hexagon):
    T, Q, W = hexagon
    assert [c.names(Q) for c in find_cuts(Q, W)] == [["x"], ["y"], ["z"]]


def test_no_cuts_when_impossible():
    Q = Quiver(1, ("x",), (0,), (0,))
    assert find_cuts(Q, Potential(((1, (0, 0)),))) == []


def _brute_force_cuts(Q, W):
    out = []
    for r in range(len(Q.names) + 1):
        for S in combinations(Q.arrows, r):
            if all(sum(w.count(a) for a in S) == 1 for _, w in W.terms):
                out.append(frozenset(S))
    return set(out)


@pytest.mark.parametrize("name", CORPUS)
def test_cuts_match_subset_search_and_matchings(name):
    T = load_tiling(name)
    Q, W = dual_quiver(T), potential_of(T)
    cuts = {c.arrows for c in find_cuts(Q, W)}
    assert cuts == _brute_force_cuts(Q, W)
    assert cuts == set(perfect_matchings(T))


def test_gradings(hexagon):
    T, Q, W = hexagon
    g = grading_from(Q, W, [Q.arrow("z")])
    assert g.weights == (0, 0, 1)
    sym = grading_from(Q, W)
    assert sym.weights == (Fraction(1, 3),) * 3
    for c in find_cuts(Q, W):
        assert grading_from(Q, W, c).is_valid(W)
    with pytest.raises(NoGrading):
        grading_from(Q, W, [0, 1])


def test_jacobi_presentations(hexagon):
    T, Q, W = hexagon
    P = jacobi_presentation(Q, W)
    n = Q.names
    assert P.relations == [
        path_sum(n, (1, "yz"), (-1, "zy")),
        path_sum(n, (1, "zx"), (-1, "xz")),
        path_sum(n, (1, "xy"), (-1, "yx")),
    ]
    S = load_tiling("square-torus")
    QS, WS = dual_quiver(S), potential_of(S)
    PS = jacobi_presentation(QS, WS)
    assert len(PS.relations) == len(QS.names) == 4
    for rel in PS.relations:
        terms = rel.simplified().terms
        assert sorted(c for c, _ in terms) == [-1, 1]
        assert all(len(w) == 3 for _, w in terms)


def test_two_dim_jacobi_hex(hexagon):
    T, Q, W = hexagon
    P = two_dim_jacobi(Q, W, ["z"])
    assert [Q.names[a] for a in P.generators] == ["x", "y"]
    assert P.invertible == frozenset({0, 1})
    assert P.relations == [path_sum(Q.names, (1, "xy"), (-1, "yx"))]
    assert "xy - yx" in P.text()
    with pytest.raises(CutMeetsLocalization):
        two_dim_jacobi(Q, W, ["z"], invertible=["x", "z"])


def test_two_dim_jacobi_square():
    S = load_tiling("square-torus")
    Q, W = dual_quiver(S), potential_of(S)
    cut = find_cuts(Q, W)[0]
    P = two_dim_jacobi(Q, W, cut)
    assert len(P.relations) == len(cut) == S.V // 2
    assert len(P.generators) == 3


@pytest.mark.parametrize("name", CORPUS)
def test_relations_avoid_cut_arrows(name):
    T = load_tiling(name)
    Q, W = dual_quiver(T), potential_of(T)
    for cut in find_cuts(Q, W):
        P = two_dim_jacobi(Q, W, cut)
        for rel in P.relations:
            assert not (rel.arrows() & cut.arrows)


def test_shift_audit_examples():
    assert shift_audit(load_tiling("hex-torus"), 1) == (2, 2, 0)
    assert shift_audit(load_tiling("square-torus"), 2) == (8, 8, 0)
    assert shift_audit(load_tiling("genus2"), 1)[2] == -2


def test_shift_audit_rejects_bad_cut():
    T = load_tiling("square-torus")
    with pytest.raises(AuditFailure):
        shift_audit(T, 1, cuts=[frozenset({0, 1})])


@pytest.mark.parametrize("name", CORPUS)
def test_euler_for_dual(name):
    T = load_tiling(name)
    Q = dual_quiver(T)
    assert Q.num_vertices == T.F and len(Q.names) == T.E
    assert Q.num_vertices - len(Q.names) + T.V == 2 - 2 * T.genus


def _cycles(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        cyc, e = [], s
        while e not in seen:
            seen.add(e)
            cyc.append(e)
            e = perm[e]
        out.append(cyc)
    return out


@given(st.integers(4, 9).flatmap(lambda E: st.tuples(st.permutations(range(E)), st.permutations(range(E)))))
def test_random_maps(perms):
    sw, sb = perms
    try:
        T = BraneTiling(len(sw), _cycles(sw), _cycles(sb))
    except (MalformedMap, GenusZero):
        assume(False)
    Q, W = dual_quiver(T), potential_of(T)
    assert T.V - T.E + T.F == 2 - 2 * T.genus
    assert Q.num_vertices - len(Q.names) + T.V == 2 - 2 * T.genus
    assert all(Q.is_cycle(w) for _, w in W.terms)
    assert {c.arrows for c in find_cuts(Q, W)} == set(perfect_matchings(T))
