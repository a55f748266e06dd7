"""Compare the compiled recurrences with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--size P] [--repeat R]``.
Prints one line per kernel with the best time of each backend, the speedup
and the largest relative difference between the two outputs.
"""
import argparse
import timeit

import numpy as np

from conic_laguerre._backend import get_kernels


def cases(P, rng):
    t = 60 * rng.random(P)
    x = 2 * rng.random(P) - 1
    z = 8 * rng.random(P)
    return [
        ("lag n=64", "lag", (64, 2.5, t)),
        ("lag_all n=64", "lag_all", (64, 2.5, t)),
        ("lag_log n=512", "lag_log", (512, 1.0, t)),
        ("jac n=40", "jac", (40, 1.5, 0.5, x)),
        ("geg_scaled n=40", "geg_scaled", (40, 1.5, x)),
        ("jhat_series nu=1.5", "jhat_series", (1.5, z)),
        ("ihat_series nu=1.5", "ihat_series", (1.5, z)),
    ]


def max_rel_diff(a, b):
    a = np.asarray(a[0] if isinstance(a, tuple) else a)
    b = np.asarray(b[0] if isinstance(b, tuple) else b)
    scale = np.maximum(np.abs(b), 1e-300)
    return float(np.max(np.abs(a - b) / np.maximum(scale, np.max(np.abs(b)) * 1e-12)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=20000, help="points per call")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    try:
        fast = get_kernels("cython")
    except ImportError:
        print("compiled kernels are not built; nothing to compare")
        return 1
    slow = get_kernels("python")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'cython [ms]':>12}{'numpy [ms]':>12}{'speedup':>9}{'max rel diff':>14}")
    for label, name, fargs in cases(args.size, rng):
        f, g = getattr(fast, name), getattr(slow, name)
        tf = min(timeit.repeat(lambda: f(*fargs), number=1, repeat=args.repeat))
        tg = min(timeit.repeat(lambda: g(*fargs), number=1, repeat=args.repeat))
        diff = max_rel_diff(f(*fargs), g(*fargs))
        print(f"{label:<22}{1e3 * tf:>12.3f}{1e3 * tg:>12.3f}{tg / tf:>9.1f}{diff:>14.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
