"""Stationary (undecimated, a trous) wavelet transform and per-level features.

Level-k coefficients are circular convolutions of the level-(k-1)
approximation with the analysis filters upsampled by 2**(k-1): no
downsampling, so every coefficient array keeps the input length and the
transform is covariant to circular shifts.  Inputs whose length is not a
multiple of 2**levels are symmetrically padded at the end for the transform
and the coefficients truncated back.

Analysis filters are orthonormal (sum h**2 = sum g**2 = 1); the highpass is
the quadrature mirror g[n] = (-1)**n * h[L-1-n].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..core import as_signal
from ..spectral import periodogram
from . import entropy as _entropy
from . import freqdomain as _freq
from . import timedomain as _time

__all__ = ["SWTDecomposition", "swt", "swt_features", "wavelet_filters", "WAVELETS", "SWT_SUBFEATURES"]

_SQRT2_INV = 1.0 / math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)

# Orthonormal scaling (lowpass analysis) filters, sum of squares = 1.
# haar and db2 come from their closed forms; db4 has no radical form and
# uses the standard published coefficients.
_DEC_LO = {
    "haar": np.array([_SQRT2_INV, _SQRT2_INV]),
    "db2": np.array([1.0 + _SQRT3, 3.0 + _SQRT3, 3.0 - _SQRT3, 1.0 - _SQRT3])
    / (4.0 * math.sqrt(2.0)),
    "db4": np.array(
        [
            0.23037781330885523,
            0.7148465705525415,
            0.6308807679295904,
            -0.02798376941698385,
            -0.18703481171888114,
            0.030841381835986965,
            0.032883011666982945,
            -0.010597401784997278,
        ]
    ),
}

WAVELETS = tuple(sorted(_DEC_LO))

SWT_SUBFEATURES = ("mnf", "psr", "peak", "mds", "mns", "see", "perm_ent", "nse")


def wavelet_filters(name: str) -> tuple[np.ndarray, np.ndarray]:
    """Analysis (lowpass, highpass) filter pair for a wavelet name."""
    try:
        h = _DEC_LO[name]
    except KeyError:
        raise ValueError(f"unknown wavelet {name!r}; expected one of {WAVELETS}") from None
    n = np.arange(h.size)
    g = (-1.0) ** n * h[::-1]
    return h.copy(), g


@dataclass
class SWTDecomposition:
    """Per-level coefficient arrays, each exactly the input length."""

    wavelet: str
    levels: int
    approx: list[np.ndarray]
    detail: list[np.ndarray]


def default_levels(n: int) -> int:
    return min(4, int(math.floor(math.log2(n))))


def swt(x, wavelet: str = "db4", levels: int | None = None) -> SWTDecomposition:
    """Stationary wavelet decomposition.

    ``levels`` defaults to min(4, floor(log2(N))).  Rejects inputs shorter
    than 2**levels.
    """
    x = as_signal(x)
    if np.isnan(x).any():
        raise ValueError("input contains NaN; interpolate missing samples first")
    n = x.size
    if levels is None:
        levels = default_levels(n)
    levels = int(levels)
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    min_len = 2**levels
    if n < min_len:
        raise ValueError(
            f"input too short for {levels} levels: need at least {min_len} samples, got {n}"
        )
    h, g = wavelet_filters(wavelet)
    block = 2**levels
    padded_len = ((n + block - 1) // block) * block
    if padded_len > n:
        a = np.pad(x, (0, padded_len - n), mode="symmetric")
    else:
        a = x.copy()
    approx: list[np.ndarray] = []
    detail: list[np.ndarray] = []
    for k in range(levels):
        dilation = 2**k
        d = _kernels.atrous_convolve(a, g, dilation)
        a = _kernels.atrous_convolve(a, h, dilation)
        detail.append(np.asarray(d)[:n].copy())
        approx.append(np.asarray(a)[:n].copy())
    return SWTDecomposition(wavelet=wavelet, levels=levels, approx=approx, detail=detail)


def _subfeatures(coeff: np.ndarray, fs: float, selected, psr_ratio: float) -> dict[str, float]:
    """Selected sub-features of one coefficient array (everything but nse)."""
    out: dict[str, float] = {}
    spec = None
    if any(name in selected for name in ("mnf", "psr", "peak")):
        spec = periodogram(coeff, fs)
    for name in selected:
        if name == "nse":
            continue
        try:
            if name == "mnf":
                out[name] = _freq.mnf(spec)
            elif name == "psr":
                out[name] = _freq.psr(spec, psr_ratio)
            elif name == "peak":
                out[name] = _freq.peaks(spec, n_peaks=1)[0].freq
            elif name == "mds":
                out[name] = _time.median_abs_diff(coeff)
            elif name == "mns":
                out[name] = _time.mean_diff_series(coeff)
            elif name == "see":
                out[name] = _entropy.entropy(coeff)
            elif name == "perm_ent":
                out[name] = _entropy.perm_entropy(coeff)
        except ValueError:
            out[name] = float("nan")
    return out


def swt_features(
    x,
    fs: float,
    wavelet: str = "db4",
    levels: int | None = None,
    selected=SWT_SUBFEATURES,
    psr_ratio: float = 0.01,
) -> dict[str, float]:
    """Per-level features of the SWT details and final approximation.

    Emits keys ``swt_d{k}_{name}`` for k = 1..levels and ``swt_a{levels}_{name}``
    for each selected sub-feature.  ``nse`` is the level's share of the total
    energy over all emitted arrays (details plus final approximation), so the
    emitted nse values sum to 1.  Sub-features that are undefined on a level
    (zero spectra, too-short arrays) come back NaN for that key only.
    """
    for name in selected:
        if name not in SWT_SUBFEATURES:
            raise ValueError(
                f"unknown swt sub-feature {name!r}; expected one of {SWT_SUBFEATURES}"
            )
    dec = swt(x, wavelet=wavelet, levels=levels)
    arrays = [(f"swt_d{k + 1}", d) for k, d in enumerate(dec.detail)]
    arrays.append((f"swt_a{dec.levels}", dec.approx[-1]))
    energies = np.array([float(np.sum(c * c)) for _, c in arrays])
    total_energy = float(energies.sum())
    out: dict[str, float] = {}
    for (prefix, coeff), energy in zip(arrays, energies):
        vals = _subfeatures(coeff, fs, selected, psr_ratio)
        for name in selected:
            if name == "nse":
                out[f"{prefix}_nse"] = (
                    energy / total_energy if total_energy > 0.0 else float("nan")
                )
            else:
                out[f"{prefix}_{name}"] = vals[name]
    return out
