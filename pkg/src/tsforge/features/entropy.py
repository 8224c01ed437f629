"""Complexity measures: Shannon, sample, permutation, and spectral entropy.

Conventions: sample entropy is -ln(A/B) in nats (definitional); the other
entropies default to bits (base 2) with an explicit base override on the
histogram entropy.  Defaults follow the usual field conventions: m=2,
r=0.2*std(x), order=3, delay=1, bins=ceil(sqrt(N)).
"""

from __future__ import annotations

import math

import numpy as np

from .. import _kernels
from ..core import Spectrum, as_signal

__all__ = [
    "entropy",
    "sample_entropy",
    "perm_entropy",
    "spectral_entropy",
    "spectrum_entropy",
]


def _check(x, min_len: int = 1) -> np.ndarray:
    x = as_signal(x)
    if x.size < min_len:
        raise ValueError(f"need at least {min_len} samples, got {x.size}")
    if np.isnan(x).any():
        raise ValueError("input contains NaN; interpolate missing samples first")
    return x


def _resolve_base(log_base) -> float:
    if log_base in ("e", "ln"):
        return math.e
    base = float(log_base)
    if base <= 1.0:
        raise ValueError(f"log base must be > 1, got {log_base}")
    return base


def entropy(x, bins: int | None = None, log_base=2) -> float:
    """Shannon entropy of the amplitude histogram.

    ``bins`` equal-width bins span [min(x), max(x)]; probabilities are bin
    counts over N; 0*log(0) is taken as 0.  ``bins`` defaults to
    ceil(sqrt(N)); ``log_base`` accepts 2 (default) or "e".
    """
    x = _check(x)
    if bins is None:
        bins = math.ceil(math.sqrt(x.size))
    bins = int(bins)
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    base = _resolve_base(log_base)
    counts, _ = np.histogram(x, bins=bins)
    p = counts[counts > 0] / x.size
    return float(-np.sum(p * np.log(p)) / np.log(base))


def sample_entropy(x, m: int = 2, r: float | None = None) -> float:
    """Sample entropy (Richman-Moorman): -ln(A/B).

    B and A count template pairs (i != j) within Chebyshev tolerance r at
    lengths m and m+1; both template sets range over the same N-m start
    indices, so self-matches are excluded and a constant input gives exactly
    0.  ``r`` defaults to 0.2*std(x) (population std).  Returns NaN when no
    length-m pair matches (B == 0) or when no length-(m+1) pair does
    (A == 0, infinite estimate).
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    x = _check(x, min_len=m + 2)
    if r is None:
        r = 0.2 * float(np.std(x))
    elif r < 0:
        raise ValueError(f"r must be >= 0, got {r}")
    b, a = _kernels.sampen_pair_counts(x, m, float(r))
    if b == 0 or a == 0:
        return float("nan")
    return float(-math.log(a / b))


def perm_entropy(
    x, order: int = 3, delay: int = 1, normalize: bool = False
) -> float:
    """Permutation entropy (Bandt-Pompe) in bits.

    Each window of ``order`` samples taken ``delay`` apart maps to its ordinal
    pattern; ties rank by earlier index first (stable).  When ``normalize``,
    the result is divided by log2(order!) so it lies in [0, 1].
    """
    if order < 2:
        raise ValueError(f"order must be >= 2, got {order}")
    if delay < 1:
        raise ValueError(f"delay must be >= 1, got {delay}")
    x = _check(x, min_len=(order - 1) * delay + 2)
    codes = _kernels.ordinal_codes(x, order, delay)
    _, counts = np.unique(codes, return_counts=True)
    p = counts / codes.size
    h = float(-np.sum(p * np.log2(p)))
    if normalize:
        h /= math.log2(math.factorial(order))
    return h


def spectrum_entropy(s: Spectrum, normalize: bool = True) -> float:
    """Shannon entropy of the normalized power distribution of a spectrum.

    Normalization divides by log2 of the bin count so an exactly flat
    spectrum scores 1.0.  All-zero power yields NaN.
    """
    total = float(np.sum(s.power))
    if total <= 0.0:
        return float("nan")
    p = s.power[s.power > 0] / total
    h = float(-np.sum(p * np.log2(p)))
    if normalize:
        h /= math.log2(s.nbins)
    return h


def spectral_entropy(
    x, fs: float, spectrum: str = "ps", normalize: bool = True
) -> float:
    """Spectral entropy of a signal, estimating the PSD internally.

    ``spectrum`` selects the estimator: "ps" (periodogram) or "welch".
    """
    from .. import spectral as _spectral

    if spectrum == "ps":
        s = _spectral.periodogram(x, fs)
    elif spectrum == "welch":
        s = _spectral.welch(x, fs)
    else:
        raise ValueError(f"unknown spectrum selector {spectrum!r}; expected 'ps' or 'welch'")
    return spectrum_entropy(s, normalize=normalize)
