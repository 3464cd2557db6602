"""Benchmark the compiled sampler kernels against the numpy fallback.

Both backends implement identical algorithms and consume the supplied
random variates in the same order, so outputs must agree to numerical
precision; this script checks that while timing them.  Run it after a
build to see what the extension buys on your machine::

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --lengths 250 1000 4000 --reps 20
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from asymscore._kernels import pyref

try:
    from asymscore._kernels import _core
except ImportError:
    _core = None


def _regime_inputs(T: int, rng: np.random.Generator):
    loglik = rng.normal(-1.0, 0.7, size=(T, 2))
    trans = np.array([[0.95, 0.05], [0.10, 0.90]])
    init = np.array([0.5, 0.5])
    uniforms = rng.uniform(size=T)
    return loglik, trans, init, uniforms


def _path_inputs(T: int, rng: np.random.Generator):
    k = 2
    X = np.column_stack([np.ones(T), rng.standard_normal(T)])
    y = X @ np.array([0.3, 0.6]) + rng.standard_normal(T)
    A = 0.98 * np.eye(k)
    omega = np.diag([0.005, 0.002])
    m0 = np.zeros(k)
    P0 = np.eye(k)
    normals = rng.standard_normal((T, k))
    return y, X, A, omega, 1.0, m0, P0, normals


def _time(fn, args, reps: int) -> float:
    best = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--lengths", type=int, nargs="+", default=[250, 1000, 4000],
                        help="series lengths to benchmark")
    parser.add_argument("--reps", type=int, default=10,
                        help="repetitions per timing (best is reported)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _core is None:
        print("compiled extension not built; showing the numpy fallback only")
    rng = np.random.default_rng(args.seed)

    header = f"{'kernel':<14}{'T':>6}{'python':>12}{'compiled':>12}{'speedup':>9}  agreement"
    print(header)
    print("-" * len(header))
    for T in args.lengths:
        regime = _regime_inputs(T, rng)
        path = _path_inputs(T, rng)
        for name, fn_name, inputs in (
            ("regime path", "hamilton_ffbs", regime),
            ("coeff path", "kalman_ffbs", path),
        ):
            py_t = _time(getattr(pyref, fn_name), inputs, args.reps)
            if _core is None:
                print(f"{name:<14}{T:>6}{py_t * 1e3:>10.2f}ms{'':>12}{'':>9}")
                continue
            co_t = _time(getattr(_core, fn_name), inputs, args.reps)
            out_py = getattr(pyref, fn_name)(*inputs)
            out_co = getattr(_core, fn_name)(*inputs)
            if fn_name == "hamilton_ffbs":
                agree = "exact" if np.array_equal(out_py, out_co) else "DIFFERS"
            else:
                diff = float(np.max(np.abs(np.asarray(out_py[0]) - np.asarray(out_co[0]))))
                agree = f"max abs diff {diff:.1e}"
            print(f"{name:<14}{T:>6}{py_t * 1e3:>10.2f}ms{co_t * 1e3:>10.2f}ms{py_t / co_t:>8.1f}x  {agree}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
