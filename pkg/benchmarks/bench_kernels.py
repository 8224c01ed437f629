"""Timing comparison of the compiled kernels against the pure-Python
(NumPy) fallback.

Run after an editable install:

    python3 benchmarks/bench_kernels.py

Each kernel is timed on a fixed seeded input; the table reports the median
of several repeats.  If the compiled extension is unavailable the script
still runs, timing only the fallback.
"""

from __future__ import annotations

import importlib
import statistics
import time

import numpy as np

from tsforge._kernels import _fallback

try:
    _core = importlib.import_module("tsforge._kernels._core")
except ImportError:
    _core = None


def _median_time(fn, args, repeats: int, inner: int = 1) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(inner):
            fn(*args)
        times.append((time.perf_counter() - t0) / inner)
    return statistics.median(times)


def _cases():
    rng = np.random.default_rng(20260819)
    x_sampen = rng.standard_normal(1000)
    x_long = rng.standard_normal(100_000)
    x_atrous = rng.standard_normal(8192)
    taps = rng.standard_normal(8)
    taps /= np.sqrt(np.sum(taps**2))
    b = np.array([0.1, 0.2, 0.3, 0.2, 0.1, 0.05])
    a = np.array([1.0, -0.5, 0.25, -0.125, 0.0625, -0.03125])
    return [
        (
            "sampen_pair_counts (N=1000, m=2)",
            "sampen_pair_counts",
            (x_sampen, 2, 0.2 * float(np.std(x_sampen))),
            5,
        ),
        ("iir_apply (N=100k, order 5)", "iir_apply", (x_long, b, a), 11),
        ("atrous_convolve (N=8192, 8 taps, dil 4)", "atrous_convolve", (x_atrous, taps, 4), 11),
        ("ordinal_codes (N=100k, order 4)", "ordinal_codes", (x_long, 4, 1), 11),
    ]


def main() -> None:
    print(f"compiled extension present: {_core is not None}")
    header = f"{'kernel':<42} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for label, name, args, repeats in _cases():
        t_py = _median_time(getattr(_fallback, name), args, repeats)
        if _core is not None:
            t_c = _median_time(getattr(_core, name), args, repeats)
            ratio = t_py / t_c if t_c > 0 else float("inf")
            print(f"{label:<42} {t_py * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms {ratio:>8.1f}x")
        else:
            print(f"{label:<42} {t_py * 1e3:>10.3f}ms {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
