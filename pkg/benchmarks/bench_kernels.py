"""Time the numba and numpy paths of every hot kernel.

Usage: ``python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]``.
Numba compile time is excluded by a warm-up call.
"""

import argparse
import timeit

import numpy as np

from wnoise import _hot
from wnoise._accel import HAVE_NUMBA


def make_args(name, n, rng):
    x = rng.standard_normal(n)
    return {
        "acf_sums": (x - x.mean(), 40),
        "garch11": (x, 0.05, 0.05, 0.90, 1.0),
        "bilinear": (x, 0.4),
        "lfilter": (np.array([1.0, -0.5, 0.2]), np.array([1.0, 0.3]), x),
        "causal_convolve": (0.9 ** np.arange(5000.0), x),
    }[name]


def bench(fn, args, repeat):
    fn(*args)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    if not HAVE_NUMBA:
        print("numba unavailable or disabled: both columns time the fallback/loop path")
    print(f"{'kernel':<16}{'numba ms':>12}{'numpy ms':>12}{'ratio':>9}")
    for name, (fast, slow) in _hot.KERNELS.items():
        a = make_args(name, args.n, rng)
        tf, ts = bench(fast, a, args.repeat), bench(slow, a, args.repeat)
        print(f"{name:<16}{tf * 1e3:>12.3f}{ts * 1e3:>12.3f}{ts / tf:>9.1f}")


if __name__ == "__main__":
    main()
