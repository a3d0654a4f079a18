"""Compare the numba kernels against the pure-numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is called once
per backend to warm up (numba compilation happens there), then timed over
``--repeat`` runs; the best time is reported together with the speedup.
Results from both backends are compared before any timing is printed.
"""

import argparse
import time

import numpy as np

from charvar import kernels
from charvar.classdata import build_class_table
from charvar.ffield import candidate_count, field_create
from charvar.repscan import RepProblem, count_reps
from charvar.tileforge import dual_quiver, jacobi_presentation, load_tiling, potential_of

BACKENDS = ("numba", "numpy")


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def class_keys_case(n, p):
    F = field_create(p)
    t = F.tables()
    total = candidate_count(n, F)
    name = f"class_keys_range n={n} q={p} ({total} candidates)"
    return name, lambda b: kernels.class_keys_range(n, t, 0, total, backend=b)


def pair_histogram_case(n, p):
    T = build_class_table(n, field_create(p))
    idx, cls = T.element_data()
    z = T.reps[len(T) // 2].entries
    args = (n, T.field.tables(), idx, cls, z, T._sorted_keys, T._key_cls, len(T))
    name = f"pair_histogram n={n} q={p} (|G|={len(idx)})"
    return name, lambda b: kernels.pair_histogram(*args, backend=b)


def count_tuples_case(tiling, dims, p, k=1):
    T = load_tiling(tiling)
    Q, W = dual_quiver(T), potential_of(T)
    problem = RepProblem(jacobi_presentation(Q, W), dims, field_create(p, k))
    name = f"count_tuples {tiling} dims={dims} q={p**k}"
    return name, lambda b: count_reps(problem, backend=b).raw


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        class_keys_case(2, 7),
        class_keys_case(2, 23),
        class_keys_case(3, 3),
        class_keys_case(4, 2),
        pair_histogram_case(2, 7),
        pair_histogram_case(2, 13),
        pair_histogram_case(3, 3),
        count_tuples_case("hex-torus", 2, 3),
        count_tuples_case("hex-torus", 2, 2, 2),
        count_tuples_case("square-torus", (2, 2), 3),
    ]
    print(f"{'kernel':<52}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    for name, fn in cases:
        outs = {b: fn(b) for b in BACKENDS}
        if not same(outs["numba"], outs["numpy"]):
            raise SystemExit(f"backends disagree on {name}")
        t = {b: best_of(lambda: fn(b), args.repeat) for b in BACKENDS}
        print(f"{name:<52}{t['numba']:>10.4f}{t['numpy']:>10.4f}{t['numpy'] / t['numba']:>8.1f}x")


if __name__ == "__main__":
    main()
