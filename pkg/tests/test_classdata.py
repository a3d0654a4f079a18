import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from charvar.charcount import brute_force_tally
from charvar.classdata import (
    ClassFunction,
    build_class_table,
    class_convolve,
    class_types,
    commutator_distribution,
    genus_count,
)
from charvar.errors import SingularTarget, TableMismatch
from charvar.ffield import MatrixOverField, field_create, gl_elements, gl_order, primitive_roots_of_unity


def test_abelian_table():
    T = build_class_table(1, field_create(5))
    assert len(T) == 4
    assert T.sizes == [1, 1, 1, 1]


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_class_sizes_match_orbits(n, p):
    T = build_class_table(n, field_create(p))
    orbits = oracles.conjugacy_orbits(n, p)
    assert sorted(T.sizes) == sorted(len(o) for o in orbits)
    assert sum(T.sizes) == gl_order(n, T.field)


def test_gl2_examples():
    T2 = build_class_table(2, field_create(2))
    assert sorted(T2.sizes) == [1, 2, 3]
    assert len(build_class_table(2, field_create(3))) == 8


@pytest.mark.parametrize("q", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)])
def test_gl2_class_count_is_q2_minus_1(q):
    F = field_create(*q)
    assert len(build_class_table(2, F)) == F.q**2 - 1


@pytest.mark.parametrize("n,pk", [(2, (2, 1)), (2, (3, 1)), (3, (2, 1)), (3, (3, 1)), (2, (2, 2)), (4, (2, 1))])
def test_types_table_equals_enumerated(n, pk):
    F = field_create(*pk)
    A = build_class_table(n, F, "enumerate")
    B = build_class_table(n, F, "types")
    assert dict(zip(A.keys.tolist(), A.sizes)) == dict(zip(B.keys.tolist(), B.sizes))
    assert len(list(class_types(n, F))) == len(A)


def test_class_of_and_inverse_classes():
    F = field_create(3)
    T = build_class_table(2, F)
    G = gl_elements(2, F)
    cls = T.classes_of(G)
    assert np.bincount(cls).tolist() == T.sizes
    for i, rep in enumerate(T.reps):
        assert T.class_of(rep) == i
        assert T.class_of(rep.inverse()) == T.inv_class[i]


def test_delta_identity_is_unit():
    T = build_class_table(2, field_create(3))
    rng = np.random.default_rng(1)
    f = ClassFunction(T, rng.integers(-5, 6, len(T)).tolist())
    assert class_convolve(f, ClassFunction.delta_identity(T)) == f
    assert class_convolve(ClassFunction.delta_identity(T), f) == f


@pytest.mark.parametrize("pk", [(2, 1), (3, 1), (2, 2)])
def test_constant_convolution(pk):
    T = build_class_table(2, field_create(*pk))
    one = ClassFunction.constant(T, 1)
    assert class_convolve(one, one).values == [T.order] * len(T)


@given(st.integers(0, 2**32 - 1))
def test_convolution_commutative_and_associative(seed):
    T = build_class_table(2, field_create(3))
    rng = np.random.default_rng(seed)
    f, h, k = (ClassFunction(T, rng.integers(-3, 4, len(T)).tolist()) for _ in range(3))
    assert class_convolve(f, h) == class_convolve(h, f)
    assert class_convolve(class_convolve(f, h), k) == class_convolve(f, class_convolve(h, k))


def test_convolution_rejects_mixed_tables():
    A = build_class_table(2, field_create(2))
    B = build_class_table(2, field_create(3))
    with pytest.raises(TableMismatch):
        class_convolve(ClassFunction.constant(A, 1), ClassFunction.constant(B, 1))


def test_genus_count_examples():
    F2, F3 = field_create(2), field_create(3)
    assert genus_count(build_class_table(2, F2), 1, MatrixOverField.identity(F2, 2)) == 18
    assert genus_count(build_class_table(2, F3), 1, MatrixOverField.scalar(F3, 2, 2)) == 96
    for p in (2, 3, 5):
        F = field_create(p)
        T = build_class_table(1, F)
        for g in (1, 2, 3):
            assert genus_count(T, g, MatrixOverField.identity(F, 1)) == (p - 1) ** (2 * g)


@pytest.mark.parametrize("n,p", [(2, 2), (2, 3)])
def test_genus_one_matches_python_oracle(n, p):
    F = field_create(p)
    T = build_class_table(n, F)
    tally = oracles.genus_one_tally(n, p)
    for A in oracles.gl(n, p):
        assert genus_count(T, 1, MatrixOverField(F, A)) == tally.get(A, 0)


@pytest.mark.parametrize("n,p,g", [(2, 2, 1), (2, 2, 2), (2, 3, 1), (2, 3, 2)])
def test_oracle_equivalence(n, p, g):
    F = field_create(p)
    T = build_class_table(n, F)
    mats, tally = brute_force_tally(n, g, F)
    pos = {m.tobytes(): i for i, m in enumerate(mats)}
    for rep in T.reps:
        assert genus_count(T, g, rep) == tally[pos[rep.entries.tobytes()]]


@pytest.mark.parametrize("n,pk", [(2, (3, 1)), (2, (2, 2)), (3, (2, 1))])
def test_central_shortcut_matches_histogram(n, pk):
    T = build_class_table(n, field_create(*pk))
    for zc, z in enumerate(T.reps):
        if not z.is_scalar():
            continue
        hist = T.pair_histogram(zc)
        slow = sum(int(hist[c, c]) * T.centralizer_order(c) for c in range(len(T)))
        assert slow == T.order * T.fixed_by_central(z)


def test_commutator_distribution_sums_to_group_square():
    T = build_class_table(2, field_create(3))
    f1 = commutator_distribution(T)
    assert f1.total() == T.order**2


@given(st.integers(0, 10**6))
def test_genus_count_is_class_function(seed):
    F = field_create(3)
    T = build_class_table(2, F)
    G = gl_elements(2, F)
    rng = np.random.default_rng(seed)
    z = MatrixOverField(F, G[rng.integers(len(G))])
    P = MatrixOverField(F, G[rng.integers(len(G))])
    assert genus_count(T, 2, z.conjugate(P)) == genus_count(T, 2, z)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_root_choice_independence(p):
    F = field_create(p)
    T = build_class_table(2, F)
    for g in (1, 2):
        vals = {genus_count(T, g, MatrixOverField.scalar(F, 2, r.element)) for r in primitive_roots_of_unity(F, 2)}
        assert len(vals) == 1


def test_genus_count_errors():
    F = field_create(3)
    T = build_class_table(2, F)
    with pytest.raises(SingularTarget):
        genus_count(T, 1, MatrixOverField(F, [[1, 0], [0, 0]]))
    with pytest.raises(TableMismatch):
        genus_count(T, 1, MatrixOverField.identity(field_create(5), 2))
    with pytest.raises(ValueError):
        genus_count(T, 0, MatrixOverField.identity(F, 2))
