import numpy as np
import pytest

from charvar import config, kernels
from charvar.classdata import build_class_table, clear_cache
from charvar.errors import FieldTooLarge
from charvar.ffield import candidate_count, field_create
from charvar.repscan import RepProblem, count_reps, dimred_count_check
from charvar.tileforge import dual_quiver, jacobi_presentation, load_tiling, potential_of

BACKENDS = ("numba", "numpy")
CASES = [(1, (7, 1)), (2, (2, 1)), (2, (3, 1)), (2, (2, 2)), (3, (2, 1)), (2, (5, 1)), (4, (2, 1))]


@pytest.mark.parametrize("n,pk", CASES)
def test_class_keys_backends_agree(n, pk):
    t = field_create(*pk).tables()
    total = candidate_count(n, field_create(*pk))
    a = kernels.class_keys_range(n, t, 0, total, backend="numba")
    b = kernels.class_keys_range(n, t, 0, total, backend="numpy")
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize("n,pk", CASES)
def test_keys_of_backends_agree(n, pk):
    F = field_create(*pk)
    rng = np.random.default_rng(7)
    mats = rng.integers(0, F.q, size=(300, n, n))
    t = F.tables()
    assert np.array_equal(kernels.keys_of(n, t, mats, "numba"), kernels.keys_of(n, t, mats, "numpy"))


@pytest.mark.parametrize("n,pk", [(2, (3, 1)), (3, (2, 1)), (2, (2, 2))])
def test_pair_histogram_backends_agree(n, pk):
    T = build_class_table(n, field_create(*pk))
    idx, cls = T.element_data()
    t = T.field.tables()
    for zc in range(len(T)):
        z = T.reps[zc].entries
        args = (n, t, idx, cls, z, T._sorted_keys, T._key_cls, len(T))
        assert np.array_equal(kernels.pair_histogram(*args, backend="numba"), kernels.pair_histogram(*args, backend="numpy"))


def _programs():
    hexT, sq = load_tiling("hex-torus"), load_tiling("square-torus")
    out = []
    for T, dims, p in ((hexT, 2, 2), (hexT, 2, 3), (sq, (1, 1), 3), (sq, (2, 2), 2)):
        Q, W = dual_quiver(T), potential_of(T)
        out.append(RepProblem(jacobi_presentation(Q, W), dims, field_create(p)))
    return out


@pytest.mark.parametrize("problem", _programs(), ids=["hex-2-2", "hex-2-3", "sq-1-3", "sq-2-2"])
def test_tuple_counts_backends_agree(problem):
    a = count_reps(problem, backend="numba").raw
    b = count_reps(problem, backend="numpy").raw
    assert a == b


def test_trace_mode_backends_agree(monkeypatch):
    T = load_tiling("hex-torus")
    Q, W = dual_quiver(T), potential_of(T)
    reps = {}
    for name in BACKENDS:
        monkeypatch.setenv("CHARVAR_BACKEND", name)
        reps[name] = dimred_count_check(Q, W, ["z"], 2, field_create(2))
    assert reps["numba"] == reps["numpy"]


def test_env_var_selects_backend(monkeypatch):
    monkeypatch.setenv("CHARVAR_BACKEND", "numpy")
    assert config.backend() == "numpy"
    monkeypatch.setenv("CHARVAR_BACKEND", "numba")
    assert config.backend() == "numba"
    monkeypatch.setenv("CHARVAR_BACKEND", "fortran")
    with pytest.raises(ValueError):
        config.backend()


def test_worker_count_does_not_change_results(monkeypatch):
    monkeypatch.setattr(kernels, "CHUNK", 1000)
    F = field_create(3)
    t = F.tables()
    one = kernels.class_keys_range(2, t, 0, 81, workers=1)
    two = kernels.class_keys_range(2, t, 0, 81, workers=2)
    assert np.array_equal(one[0], two[0]) and np.array_equal(one[1], two[1])
    problem = _programs()[1]
    assert count_reps(problem, workers=1).raw == count_reps(problem, workers=3).raw


def test_table_with_workers_matches(monkeypatch):
    monkeypatch.setattr(kernels, "CHUNK", 500)
    F = field_create(3)
    clear_cache()
    serial = build_class_table(2, F)
    keys, sizes = serial.keys.copy(), list(serial.sizes)
    clear_cache()
    parallel = build_class_table(2, F, workers=2)
    assert np.array_equal(parallel.keys, keys) and parallel.sizes == sizes
    clear_cache()


def test_key_width_guard():
    with pytest.raises(FieldTooLarge):
        kernels.check_key_width(5, 2)
    with pytest.raises(FieldTooLarge):
        kernels.check_key_width(4, 2**10)
    kernels.check_key_width(4, 5)


def test_iteration_limit_from_env(monkeypatch):
    monkeypatch.setenv("CHARVAR_MAX_ITER", "77")
    assert config.iteration_limit() == 77
    with config.max_iterations(5):
        assert config.iteration_limit() == 5
    monkeypatch.delenv("CHARVAR_MAX_ITER")
    assert config.iteration_limit() == config.ITER_LIMIT
