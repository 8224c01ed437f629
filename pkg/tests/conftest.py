"""Shared fixtures: CSV writers and WFDB fixture encoders.

The encoders here are test-only inverses of the package decoders, used for
round-trip checks and for building offline record fixtures.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import pytest


def write_csv_record(path, columns: dict) -> Path:
    """Write {name: 1-D array} as a CSV with a header row; NaN -> empty."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(len(arrays[0])):
            row = []
            for arr in arrays:
                v = arr[i]
                row.append("" if np.isnan(v) else repr(float(v)))
            w.writerow(row)
    return path


def encode_212(samples: np.ndarray) -> bytes:
    """Pack interleaved 12-bit two's-complement samples, 2 per 3 bytes."""
    s = np.asarray(samples, dtype=np.int64)
    if s.size % 2:
        raise ValueError("format 212 packs samples in pairs")
    if np.any(s < -2048) or np.any(s > 2047):
        raise ValueError("sample outside 12-bit range")
    u = np.where(s < 0, s + 4096, s).astype(np.uint16)
    out = bytearray()
    for i in range(0, u.size, 2):
        s1, s2 = int(u[i]), int(u[i + 1])
        out.append(s1 & 0xFF)
        out.append(((s1 >> 8) & 0x0F) | (((s2 >> 8) & 0x0F) << 4))
        out.append(s2 & 0xFF)
    return bytes(out)


def encode_16(samples: np.ndarray) -> bytes:
    s = np.asarray(samples, dtype=np.int64)
    if np.any(s < -32768) or np.any(s > 32767):
        raise ValueError("sample outside 16-bit range")
    return s.astype("<i2").tobytes()


def make_wfdb_fixture(
    directory,
    name: str,
    fs: float,
    channels: dict,
    fmt: int = 212,
    gains=None,
    baselines=None,
    units="mV",
) -> Path:
    """Write {name}.hea and {name}.dat holding integer ADC channels."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    ch_names = list(channels)
    arrays = [np.asarray(channels[c], dtype=np.int64) for c in ch_names]
    n_samples = arrays[0].size
    if any(a.size != n_samples for a in arrays):
        raise ValueError("channel length mismatch")
    n_sig = len(ch_names)
    gains = gains or [200.0] * n_sig
    baselines = baselines or [0] * n_sig

    dat_name = f"{name}.dat"
    lines = [f"{name} {n_sig} {fs:g} {n_samples}"]
    for i, ch in enumerate(ch_names):
        gain_field = f"{gains[i]:g}({baselines[i]})/{units}"
        # record: file format gain(baseline)/units adc_res adc_zero init_value checksum block_size description
        lines.append(f"{dat_name} {fmt} {gain_field} 12 0 0 0 0 {ch}")
    (directory / f"{name}.hea").write_text("\n".join(lines) + "\n")

    interleaved = np.empty(n_samples * n_sig, dtype=np.int64)
    for i, arr in enumerate(arrays):
        interleaved[i::n_sig] = arr
    if fmt == 212:
        if interleaved.size % 2:
            interleaved = np.append(interleaved, 0)
        payload = encode_212(interleaved)
    elif fmt == 16:
        payload = encode_16(interleaved)
    else:
        raise ValueError(f"unsupported fixture format {fmt}")
    (directory / dat_name).write_bytes(payload)
    return directory / f"{name}.hea"


@pytest.fixture
def csv_record_factory(tmp_path):
    def factory(name: str, columns: dict) -> Path:
        return write_csv_record(tmp_path / name, columns)

    return factory
