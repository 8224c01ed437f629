"""Scalar descriptors computed directly on the sample sequence.

All moment-based statistics use population (divide-by-N) conventions:
skewness is Fisher-Pearson g1 = m3 / m2**1.5, kurtosis is excess kurtosis
m4 / m2**2 - 3.  A constant input makes both 0/0; they come back NaN while
every other statistic stays valid.
"""

from __future__ import annotations

import numpy as np

from ..core import as_signal

__all__ = ["basic_stats", "zcr", "mean_diff_series", "median_abs_diff"]

BASIC_STAT_KEYS = (
    "mean",
    "max",
    "min",
    "median",
    "std",
    "skewness",
    "kurtosis",
    "p2p",
    "rms",
    "mad",
    "mns",
)


def _check(x) -> np.ndarray:
    x = as_signal(x)
    if x.size < 2:
        raise ValueError("need at least 2 samples")
    if np.isnan(x).any():
        raise ValueError("input contains NaN; interpolate missing samples first")
    return x


def basic_stats(x) -> dict[str, float]:
    """All Table-style amplitude statistics of one signal.

    Keys (in output order): mean, max, min, median, std, skewness, kurtosis,
    p2p, rms, mad, mns.
    """
    x = _check(x)
    m = float(np.mean(x))
    d = x - m
    m2 = float(np.mean(d * d))
    m3 = float(np.mean(d * d * d))
    m4 = float(np.mean(d * d * d * d))
    med = float(np.median(x))
    if m2 > 0.0:
        skew = m3 / m2**1.5
        kurt = m4 / (m2 * m2) - 3.0
    else:
        skew = float("nan")
        kurt = float("nan")
    return {
        "mean": m,
        "max": float(np.max(x)),
        "min": float(np.min(x)),
        "median": med,
        "std": float(np.sqrt(m2)),
        "skewness": skew,
        "kurtosis": kurt,
        "p2p": float(np.max(x) - np.min(x)),
        "rms": float(np.sqrt(np.mean(x * x))),
        "mad": float(np.median(np.abs(x - med))),
        "mns": float(np.mean(np.diff(x))),
    }


def zcr(x, center: bool = True) -> int:
    """Zero-crossing count.

    With ``center`` the mean is removed first.  Zero-valued samples are
    transparent: the sign sequence is compressed to its nonzero entries and
    adjacent sign changes are counted, so a crossing that passes through one
    or more exact zeros counts once.
    """
    x = _check(x)
    if center:
        x = x - np.mean(x)
    s = np.sign(x)
    s = s[s != 0]
    if s.size < 2:
        return 0
    return int(np.count_nonzero(s[1:] != s[:-1]))


def mean_diff_series(x) -> float:
    """Signed mean of the first differences (the `mns` statistic)."""
    x = _check(x)
    return float(np.mean(np.diff(x)))


def median_abs_diff(x) -> float:
    """Median of |first differences| (the wavelet table's `mds` statistic)."""
    x = _check(x)
    return float(np.median(np.abs(np.diff(x))))
