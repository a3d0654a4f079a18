from fractions import Fraction
from itertools import product

import pytest

import oracles
from charvar import repscan
from charvar.charcount import CountRecord
from charvar.errors import EnumerationTooLarge, IdentityFailure
from charvar.ffield import field_create, gl_order
from charvar.repscan import (
    RepProblem,
    count_reps,
    dimred_count_check,
    gtrue_count_check,
    morita_count_check,
    relation_arrows,
    rep_space_dims,
)
from charvar.tileforge import (
    Presentation,
    dual_quiver,
    find_cuts,
    jacobi_presentation,
    load_tiling,
    potential_of,
    two_dim_jacobi,
)


@pytest.fixture
def three_loop():
    T = load_tiling("hex-torus")
    return dual_quiver(T), potential_of(T)


@pytest.fixture
def square():
    T = load_tiling("square-torus")
    return dual_quiver(T), potential_of(T)


def _free(Q, invertible=()):
    inv = frozenset(Q.arrow(a) for a in invertible)
    return Presentation(Q.localized(inv), tuple(Q.arrows), inv, [], [])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_three_loop_scalars(three_loop, p):
    Q, W = three_loop
    F = field_create(p)
    loc = Presentation(Q, tuple(Q.arrows), frozenset(Q.arrows), [], [])
    assert count_reps(RepProblem(loc, 1, F, "none")).raw == (p - 1) ** 3
    assert count_reps(RepProblem(jacobi_presentation(Q, W), 1, F)).raw == (p - 1) ** 3


def test_three_loop_pairwise_commuting_triples(three_loop):
    Q, W = three_loop
    F = field_create(2)
    G = oracles.gl(2, 2)
    m = lambda A, B: oracles.mul(A, B, 2)  # noqa: E731
    expected = sum(
        1
        for x, y, z in product(G, repeat=3)
        if m(x, y) == m(y, x) and m(y, z) == m(z, y) and m(z, x) == m(x, z)
    )
    got = count_reps(RepProblem(jacobi_presentation(Q, W), 2, F))
    assert got.raw == expected
    assert got.group_order == 6


def test_rep_space_dims(three_loop, square):
    for n in (1, 2, 3):
        assert rep_space_dims(three_loop[0], n) == (3 * n * n, 2 * n * n)
        assert rep_space_dims(square[0], (n, n)) == (4 * n * n, 2 * n * n)
    assert rep_space_dims(square[0], (0, 0)) == (0, 0)


@pytest.mark.parametrize("dims,p", [((1, 1), 2), ((1, 1), 3), ((2, 1), 2), ((1, 2), 2), ((2, 2), 2)])
def test_free_atlas_is_affine_space(square, dims, p):
    Q, _ = square
    got = count_reps(RepProblem(_free(Q), dims, field_create(p), "none"))
    assert got.raw == p ** rep_space_dims(Q, dims)[0]
    assert got.group_order == gl_order(dims[0], p) * gl_order(dims[1], p)


@pytest.mark.parametrize("dims,p", [((1, 1), 2), ((1, 1), 3), ((2, 2), 2)])
def test_fully_localized_free_atlas(square, dims, p):
    Q, _ = square
    got = count_reps(RepProblem(_free(Q, Q.names), dims, field_create(p), "none"))
    assert got.raw == gl_order(dims[0], p) ** len(Q.names)


def test_localized_mismatched_dims_are_empty(square):
    Q, _ = square
    assert count_reps(RepProblem(_free(Q, Q.names), (1, 2), field_create(2), "none")).raw == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_dimred_rank_one(three_loop, p):
    Q, W = three_loop
    rep = dimred_count_check(Q, W, ["z"], 1, field_create(p))
    assert rep["pass"]
    assert rep["details"]["f_zero"] == str(p * (p - 1) ** 2)
    assert rep["details"]["Y"] == rep["details"]["Z"] == str((p - 1) ** 2)


def test_dimred_rank_two_against_oracle(three_loop):
    Q, W = three_loop
    G = oracles.gl(2, 2)
    M = list(oracles.matrices(2, 2))
    m = lambda A, B: oracles.mul(A, B, 2)  # noqa: E731
    tr = lambda A: (A[0][0] + A[1][1]) % 2  # noqa: E731
    f_zero = sum(1 for x in G for y in G for z in M if tr(m(m(x, y), z)) == tr(m(m(x, z), y)))
    rep = dimred_count_check(Q, W, ["z"], 2, field_create(2))
    assert rep["pass"]
    assert rep["details"]["f_zero"] == str(f_zero)
    assert rep["details"]["Z"] == "18"


@pytest.mark.parametrize("p", [2, 3])
def test_dimred_square(square, p):
    Q, W = square
    for cut in find_cuts(Q, W):
        assert dimred_count_check(Q, W, cut, (1, 1), field_create(p))["pass"]


def test_morita_examples():
    T = load_tiling("hex-torus")
    for p in (2, 3, 5):
        rep = morita_count_check(T, 1, field_create(p))
        assert rep["lhs"] == rep["rhs"] == str(p - 1)
    rep = morita_count_check(T, 2, field_create(3))
    assert rep["details"]["raw"] == "384"
    assert rep["lhs"] == rep["rhs"] == "8"
    S = load_tiling("square-torus")
    for p in (2, 3):
        assert morita_count_check(S, 1, field_create(p))["pass"]


def test_gtrue_examples():
    T = load_tiling("hex-torus")
    for p in (2, 3):
        rep = gtrue_count_check(T, 1, field_create(p))
        assert rep["lhs"] == rep["rhs"] == str((p - 1) ** 2)
    assert gtrue_count_check(T, 2, field_create(2))["pass"]
    assert gtrue_count_check(load_tiling("square-torus"), 1, field_create(3))["pass"]


def test_gtrue_square_rank_two_against_oracle():
    G = oracles.gl(2, 2)
    m = lambda A, B: oracles.mul(A, B, 2)  # noqa: E731

    def m3(A, B, C):
        return m(C, m(B, A))  # path A then B then C acts as C B A

    raw = 0
    for a, b, c, d in product(G, repeat=4):
        if m3(b, c, d) == m3(d, c, b) and m3(c, d, a) == m3(a, d, c) and m3(d, a, b) == m3(b, a, d) and m3(
            a, b, c
        ) == m3(c, b, a):
            raw += 1
    rep = gtrue_count_check(load_tiling("square-torus"), 2, field_create(2))
    assert rep["details"]["raw"] == str(raw)
    assert Fraction(raw, 36) == 8
    assert rep["pass"]


def test_identity_failure_carries_report(monkeypatch):
    T = load_tiling("hex-torus")
    F = field_create(3)

    def wrong(n, g, F, workers=1):
        return CountRecord(n, g, (F.p, F.k), "untwisted-solutions", 1)

    monkeypatch.setattr(repscan, "untwisted_count", wrong)
    with pytest.raises(IdentityFailure) as info:
        morita_count_check(T, 1, F)
    assert info.value.report["pass"] is False
    assert info.value.report["check"] == "morita"
    assert morita_count_check(T, 1, F, raise_on_fail=False)["pass"] is False


def test_relation_arrows_avoid_cut(three_loop):
    Q, W = three_loop
    assert relation_arrows(Q, W, ["z"]) == {Q.arrow("x"), Q.arrow("y")}


def test_dimension_bookkeeping():
    for T in (load_tiling("hex-torus"), load_tiling("square-torus"), load_tiling("genus2")):
        Q, W = dual_quiver(T), potential_of(T)
        cut = find_cuts(Q, W)[0]
        for n in (1, 2, 3):
            n2 = n * n
            atlas, stack = rep_space_dims(Q, n)
            assert atlas == T.E * n2 and stack == atlas - T.F * n2
            assert 2 * len(cut) * n2 == T.V * n2
            assert atlas - T.F * n2 + T.V * n2 - 2 * len(cut) * n2 == T.V * n2 - (2 - 2 * T.genus) * n2


def test_count_reps_limit(three_loop):
    Q, W = three_loop
    with pytest.raises(EnumerationTooLarge):
        count_reps(RepProblem(jacobi_presentation(Q, W), 2, field_create(3)), limit=100)


def test_two_dim_presentation_count(three_loop):
    Q, W = three_loop
    P = two_dim_jacobi(Q, W, ["z"])
    assert count_reps(RepProblem(P, 2, field_create(3))).raw == 384
