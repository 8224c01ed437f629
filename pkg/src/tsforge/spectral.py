"""One-sided power spectral density estimation.

Both estimators share one segment routine and one scaling convention
(density): the integrated power ``sum(power) * df`` equals the population
variance of the mean-removed input.  Consequences of the convention:

* the segment mean is removed before windowing, so the DC bin carries no
  mean-offset power;
* scaling is ``1 / (fs * sum(w**2))`` with one-sided doubling of every bin
  except DC and, for even segment lengths, the Nyquist bin;
* odd segment lengths yield ``(n + 1) // 2`` bins and no Nyquist bin.

``welch`` with a rectangular window, ``nperseg=len(x)`` and zero overlap runs
the identical code path as ``periodogram`` and returns bit-identical values.
"""

from __future__ import annotations

import numpy as np

from .core import Spectrum

__all__ = ["periodogram", "welch"]

_WINDOWS = ("hann", "hamming", "rectangular")


def _window(name: str, n: int) -> np.ndarray:
    """Periodic (DFT-even) window of length n."""
    if name == "rectangular":
        return np.ones(n)
    k = 2.0 * np.pi * np.arange(n) / n
    if name == "hann":
        return 0.5 - 0.5 * np.cos(k)
    if name == "hamming":
        return 0.54 - 0.46 * np.cos(k)
    raise ValueError(f"unknown window {name!r}; expected one of {_WINDOWS}")


def _segment_psd(seg: np.ndarray, fs: float, w: np.ndarray) -> np.ndarray:
    """One-sided density PSD of a single segment (mean removed, windowed)."""
    seg = seg - seg.mean()
    spec = np.fft.rfft(seg * w)
    psd = (spec.real**2 + spec.imag**2) / (fs * np.sum(w * w))
    n = seg.size
    if n % 2 == 0:
        psd[1:-1] *= 2.0
    else:
        psd[1:] *= 2.0
    return psd


def _validate_signal(x: np.ndarray, fs: float) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"signal must be 1-D, got shape {x.shape}")
    if x.size < 2:
        raise ValueError("signal must have at least 2 samples")
    if np.isnan(x).any():
        raise ValueError("signal contains NaN; interpolate missing samples first")
    if not (fs > 0) or not np.isfinite(fs):
        raise ValueError(f"fs must be a positive finite number, got {fs}")
    return x


def periodogram(x, fs: float) -> Spectrum:
    """Single-segment PSD of the full signal (rectangular window).

    The frequency grid is ``k * fs / n`` for ``k = 0 .. n//2``; it depends only
    on ``fs`` and ``len(x)``.
    """
    x = _validate_signal(x, fs)
    n = x.size
    psd = _segment_psd(x, fs, np.ones(n))
    freqs = np.fft.rfftfreq(n, 1.0 / fs)
    return Spectrum(freqs=freqs, power=psd, fs=fs, method="ps")


def welch(
    x,
    fs: float,
    nperseg: int | None = None,
    overlap_ratio: float = 0.5,
    window: str = "hann",
) -> Spectrum:
    """Averaged-periodogram PSD (mean-removed, windowed, overlapping segments).

    Segments start at offsets ``0, step, 2*step, ...`` with
    ``step = nperseg - floor(overlap_ratio * nperseg)``; a trailing partial
    segment is dropped.  ``nperseg`` defaults to ``min(256, len(x))``.
    """
    x = _validate_signal(x, fs)
    n = x.size
    if nperseg is None:
        nperseg = min(256, n)
    nperseg = int(nperseg)
    if nperseg < 4:
        raise ValueError(f"nperseg must be >= 4, got {nperseg}")
    if nperseg > n:
        raise ValueError(f"nperseg ({nperseg}) exceeds signal length ({n})")
    if not (0.0 <= overlap_ratio < 1.0):
        raise ValueError(f"overlap_ratio must be in [0, 1), got {overlap_ratio}")
    w = _window(window, nperseg)
    step = nperseg - int(overlap_ratio * nperseg)
    acc = None
    count = 0
    for start in range(0, n - nperseg + 1, step):
        psd = _segment_psd(x[start : start + nperseg], fs, w)
        acc = psd if acc is None else acc + psd
        count += 1
    psd = acc if count == 1 else acc / count
    freqs = np.fft.rfftfreq(nperseg, 1.0 / fs)
    return Spectrum(freqs=freqs, power=psd, fs=fs, method="welch")
