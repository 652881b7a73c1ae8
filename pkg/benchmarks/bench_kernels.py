"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]

Each kernel runs on identical inputs under both backends; the table reports
the best wall time of ``--repeat`` runs and the speedup of the compiled one.
Outputs are compared too, so a speedup is never reported for wrong results.
"""

import argparse
import time

import numpy as np

from rmmsim.kernels import backends


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def cases(scale):
    rng = np.random.default_rng(0)
    n_thr = int(1_000_000 * scale)
    streams = np.arange(n_thr, dtype=np.uint64) << np.uint64(8)
    yield "exp_thresholds", f"{n_thr} edges", lambda k: k.exp_thresholds(7, streams, 1, 2)

    n_vert = int(200_000 * scale)
    src = rng.integers(0, n_vert, n_vert)
    dst = rng.integers(0, n_vert, n_vert)
    yield "component_labels", f"{n_vert} vertices, {n_vert} edges", lambda k: k.component_labels(n_vert, src, dst)

    n, rows = 8, int(50_000 * scale)
    x = np.tile(rng.uniform(0.1, 1.0, n), (rows, 1))
    i, j = np.triu_indices(n, 1)
    i, j = i + 1, j + 1
    trial_streams = np.arange(rows, dtype=np.uint64) << np.uint64(8)
    yield "rmm_batch", f"{rows} trials of n={n}", lambda k: k.rmm_batch(x, i, j, 0.8, 3, trial_streams, 0)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--scale", type=float, default=1.0, help="multiply problem sizes")
    args = parser.parse_args(argv)
    found = backends()
    if "compiled" not in found:
        print("compiled backend not built; only the python backend is available")
    print(f"{'kernel':<18} {'size':<28} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, size, fn in cases(args.scale):
        py_sec, py_out = _best(lambda: fn(found["python"]), args.repeat)
        if "compiled" in found:
            c_sec, c_out = _best(lambda: fn(found["compiled"]), args.repeat)
            if not np.allclose(py_out, c_out, rtol=5e-16, atol=0):
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:<18} {size:<28} {py_sec:>10.4f} {c_sec:>11.4f} {py_sec / c_sec:>7.1f}x")
        else:
            print(f"{name:<18} {size:<28} {py_sec:>10.4f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
