"""Core data types shared across the package.

A signal is represented as a 1-D float64 array plus a sampling rate in Hz;
missing samples are NaN.  A :class:`Record` bundles named channels that share
one time base.  A :class:`Spectrum` is a one-sided power spectral density on a
uniform frequency grid (density convention: ``sum(power) * df`` equals the
population variance of the mean-removed input).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Record",
    "Spectrum",
    "FeatureRow",
    "TsforgeError",
    "ConfigError",
    "IngestError",
    "TransportError",
    "as_signal",
]


class TsforgeError(Exception):
    """Base class for package errors."""


class ConfigError(TsforgeError):
    """Invalid configuration (unknown keys, bad parameter domains, ...)."""


class IngestError(TsforgeError):
    """Malformed input data (CSV shape errors, undecodable binary, ...)."""


class TransportError(IngestError):
    """Network-level failure while fetching remote records."""


def as_signal(x, name: str = "signal") -> np.ndarray:
    """Coerce ``x`` to a 1-D float64 array, rejecting anything else.

    Accepts any sequence of numbers; NaN entries are preserved as the missing
    marker.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    return arr


@dataclass
class Record:
    """Named channels sharing one sampling rate and one sample count.

    ``channels`` preserves insertion order; every array is 1-D float64 of the
    same length.  NaN marks missing samples.
    """

    id: str
    fs: float
    channels: dict[str, np.ndarray]

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be non-empty")
        if not (self.fs > 0) or not np.isfinite(self.fs):
            raise ValueError(f"fs must be a positive finite number, got {self.fs}")
        if not self.channels:
            raise ValueError(f"record {self.id!r} has no channels")
        coerced = {}
        length = None
        for name, arr in self.channels.items():
            arr = as_signal(arr, name=f"channel {name!r}")
            if length is None:
                length = arr.size
            elif arr.size != length:
                raise ValueError(
                    f"record {self.id!r}: channel {name!r} has {arr.size} samples, "
                    f"expected {length}"
                )
            coerced[name] = arr
        self.channels = coerced

    @property
    def n_samples(self) -> int:
        return next(iter(self.channels.values())).size

    @property
    def channel_names(self) -> list[str]:
        return list(self.channels)

    @property
    def duration(self) -> float:
        """Record length in seconds."""
        return self.n_samples / self.fs

    @property
    def missing_counts(self) -> dict[str, int]:
        """NaN count per channel."""
        return {name: int(np.isnan(arr).sum()) for name, arr in self.channels.items()}


@dataclass
class Spectrum:
    """One-sided power spectral density on a uniform frequency grid.

    Density units (power per Hz): ``sum(power) * df`` recovers the population
    variance of the mean-removed signal that produced it.
    """

    freqs: np.ndarray
    power: np.ndarray
    fs: float
    method: str = "ps"

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=np.float64)
        self.power = np.asarray(self.power, dtype=np.float64)
        if self.freqs.ndim != 1 or self.power.ndim != 1:
            raise ValueError("freqs and power must be 1-D")
        if self.freqs.size != self.power.size:
            raise ValueError(
                f"freqs ({self.freqs.size}) and power ({self.power.size}) differ in length"
            )
        if self.freqs.size < 2:
            raise ValueError("spectrum needs at least two frequency bins")
        if np.any(np.diff(self.freqs) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if np.any(self.power < 0):
            raise ValueError("power must be non-negative")

    @property
    def df(self) -> float:
        """Grid spacing in Hz."""
        return float(self.freqs[1] - self.freqs[0])

    @property
    def nbins(self) -> int:
        return self.freqs.size

    def total_power(self) -> float:
        """Integrated power, ``sum(power) * df``."""
        return float(np.sum(self.power) * self.df)


@dataclass
class FeatureRow:
    """One output row: a record (or window) id plus feature values.

    Undefined features carry NaN; writers render NaN as an empty CSV cell or a
    JSON null.
    """

    id: str
    values: dict[str, float] = field(default_factory=dict)
