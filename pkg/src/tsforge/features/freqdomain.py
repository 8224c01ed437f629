"""Scalar descriptors of a one-sided power spectrum.

Spectral moments (mnf, mdf, vcf/stdf), the power-spectrum ratio around the
dominant bin (psr), ranked local maxima with half-height widths, and band
statistics on an inclusive frequency-band restriction.  Every function
returns NaN when the (restricted) spectrum carries zero total power.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Spectrum

__all__ = [
    "PeakResult",
    "mnf",
    "mdf",
    "vcf",
    "stdf",
    "psr",
    "peaks",
    "band_features",
    "format_band_key",
    "format_number",
]


@dataclass
class PeakResult:
    """One ranked spectral peak: bin frequency, height, half-height width."""

    freq: float
    height: float
    width: float


def mnf(s: Spectrum) -> float:
    """Mean frequency: power-weighted average of the grid frequencies."""
    total = float(np.sum(s.power))
    if total <= 0.0:
        return float("nan")
    return float(np.sum(s.freqs * s.power) / total)


def mdf(s: Spectrum) -> float:
    """Median frequency: smallest grid frequency where cumulative power
    reaches half the total.  No sub-bin interpolation."""
    total = float(np.sum(s.power))
    if total <= 0.0:
        return float("nan")
    cs = np.cumsum(s.power)
    idx = int(np.argmax(cs >= 0.5 * total))
    return float(s.freqs[idx])


def vcf(s: Spectrum) -> float:
    """Variance of the spectrum frequencies about the mean frequency."""
    total = float(np.sum(s.power))
    if total <= 0.0:
        return float("nan")
    mu = float(np.sum(s.freqs * s.power) / total)
    return float(np.sum(s.power * (s.freqs - mu) ** 2) / total)


def stdf(s: Spectrum) -> float:
    """Standard deviation of frequency, sqrt(vcf)."""
    v = vcf(s)
    return float(np.sqrt(v)) if not np.isnan(v) else v


def psr(s: Spectrum, int_limit_ratio: float = 0.01) -> float:
    """Power ratio in a window around the dominant bin.

    The window half-width is ``int_limit_ratio * fs/2`` (a fraction of the
    Nyquist band), clipped at the spectrum edges; bounds are inclusive.
    """
    if not (0.0 < int_limit_ratio <= 1.0):
        raise ValueError(
            f"int_limit_ratio must be in (0, 1], got {int_limit_ratio}"
        )
    total = float(np.sum(s.power))
    if total <= 0.0:
        return float("nan")
    f_star = s.freqs[int(np.argmax(s.power))]
    w = int_limit_ratio * (s.fs / 2.0)
    mask = (s.freqs >= f_star - w) & (s.freqs <= f_star + w)
    return float(np.sum(s.power[mask]) / total)


def _half_height_width(freqs: np.ndarray, power: np.ndarray, i: int) -> float:
    """Full width at half the absolute peak height, by linear interpolation.

    Walks outward from peak bin i to the first bin at or below half height on
    each side; a side that never drops below half height is clipped at the
    spectrum edge.
    """
    hh = power[i] / 2.0
    f_left = freqs[0]
    for j in range(i - 1, -1, -1):
        if power[j] <= hh:
            f_left = freqs[j] + (hh - power[j]) * (freqs[j + 1] - freqs[j]) / (
                power[j + 1] - power[j]
            )
            break
    f_right = freqs[-1]
    for j in range(i + 1, freqs.size):
        if power[j] <= hh:
            f_right = freqs[j] - (hh - power[j]) * (freqs[j] - freqs[j - 1]) / (
                power[j - 1] - power[j]
            )
            break
    return float(f_right - f_left)


def peaks(
    s: Spectrum,
    n_peaks: int = 1,
    want_height: bool = True,
    want_width: bool = True,
) -> list[PeakResult]:
    """Top-n local maxima, ranked by height (ties: lower frequency first).

    A local maximum is an interior bin strictly greater than both neighbors.
    Missing entries (fewer maxima than requested) are padded with NaN so the
    output always has ``n_peaks`` elements.  Unwanted height/width slots are
    NaN.
    """
    if n_peaks < 1:
        raise ValueError(f"n_peaks must be >= 1, got {n_peaks}")
    p = s.power
    out: list[PeakResult] = []
    if p.size >= 3:
        interior = np.arange(1, p.size - 1)
        is_max = (p[interior] > p[interior - 1]) & (p[interior] > p[interior + 1])
        cand = interior[is_max]
        order = np.argsort(-p[cand], kind="stable")
        for i in cand[order[:n_peaks]]:
            height = float(p[i]) if want_height else float("nan")
            width = _half_height_width(s.freqs, p, int(i)) if want_width else float("nan")
            out.append(PeakResult(freq=float(s.freqs[i]), height=height, width=width))
    while len(out) < n_peaks:
        out.append(PeakResult(float("nan"), float("nan"), float("nan")))
    return out


def format_number(v: float) -> str:
    """Render a number for feature keys: integral values lose the decimal
    point (1.0 -> "1"), everything else uses the shortest round-trip form."""
    f = float(v)
    if f == int(f):
        return str(int(f))
    return repr(f)


def format_band_key(stat: str, low: float, high: float) -> str:
    return f"{stat}_[{format_number(low)},{format_number(high)}]Hz"


def band_features(s: Spectrum, low: float, high: float) -> dict[str, float]:
    """Band statistics on the inclusive restriction low <= f <= high.

    Keys: ``power_[low,high]Hz`` (integrated power, sum * df of the parent
    grid), ``std_[...]Hz``, ``mnf_[...]Hz``, ``mdf_[...]Hz``.  An empty
    restriction or a zero-power band yields NaN values.
    """
    if not (0.0 <= low < high):
        raise ValueError(f"band edges must satisfy 0 <= low < high, got [{low}, {high}]")
    if high > s.fs / 2.0:
        raise ValueError(
            f"band [{low}, {high}] Hz exceeds the Nyquist frequency {s.fs / 2.0} Hz"
        )
    keys = [format_band_key(stat, low, high) for stat in ("power", "std", "mnf", "mdf")]
    mask = (s.freqs >= low) & (s.freqs <= high)
    if not np.any(mask):
        return {k: float("nan") for k in keys}
    freqs = s.freqs[mask]
    power = s.power[mask]
    total = float(np.sum(power))
    if total <= 0.0:
        return {k: float("nan") for k in keys}
    band_power = total * s.df
    mu = float(np.sum(freqs * power) / total)
    band_vcf = float(np.sum(power * (freqs - mu) ** 2) / total)
    cs = np.cumsum(power)
    band_mdf = float(freqs[int(np.argmax(cs >= 0.5 * total))])
    return {
        keys[0]: band_power,
        keys[1]: float(np.sqrt(band_vcf)),
        keys[2]: mu,
        keys[3]: band_mdf,
    }
