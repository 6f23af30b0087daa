"""Time the numba kernels against their numpy fallbacks.

    python3 bench/bench_kernels.py [--repeat 5]

Compilation happens in a warm-up call that is not timed.  Prints one line
per kernel and problem size with both timings, the speedup, and the max
absolute difference between the two results.
"""

import argparse
import time

import numpy as np

from lapinf import _kernels
from lapinf._backend import USE_NUMBA


def _best_of(fn, args, repeat):
    fn(*args)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _cases(gen):
    for n, d in [(10_000, 2), (1_000_000, 2), (1_000_000, 10)]:
        points = gen.standard_normal((n, d))
        logw = -0.5 * np.sum(points**2, axis=1) / 1e-2
        yield "softmax_mean", f"N={n} d={d}", (points, logw)
    for n, m in [(1_000, 400), (100_000, 40), (100_000, 400)]:
        Y = gen.uniform(-10, 10, (n, 2))
        base = -np.sum(np.abs(Y), axis=1) / 1e-2
        X = gen.uniform(-9, 9, (m, 2))
        T = gen.uniform(0.1, 1.0, m)
        for q in (2.0, 1.25):
            yield "conjugate_infconv_means", f"N={n} M={m} q={q}", (Y, base, X, T, q, 1e-2)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not USE_NUMBA:
        print("numba disabled (LAPINF_DISABLE_NUMBA set); nothing to compare")
        return 0
    gen = np.random.default_rng(0)
    print(f"{'kernel':<26}{'case':<24}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>9}{'max |diff|':>12}")
    for name, label, case_args in _cases(gen):
        t_np, out_np = _best_of(_kernels.numpy_kernels[name], case_args, args.repeat)
        t_nb, out_nb = _best_of(_kernels.numba_kernels[name], case_args, args.repeat)
        a = out_np[0] if isinstance(out_np, tuple) else out_np
        b = out_nb[0] if isinstance(out_nb, tuple) else out_nb
        diff = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
        print(f"{name:<26}{label:<24}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}{diff:>12.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
