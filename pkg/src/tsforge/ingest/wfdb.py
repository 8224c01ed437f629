"""Native WFDB record parsing: header grammar and signal formats 16 and 212.

Only the two formats needed for the supported databases are implemented;
anything else is rejected by name.  Format 212 packs two 12-bit two's
complement samples into three bytes: the first sample is the first byte plus
the low nibble of the second byte (as ADU bits 8..11), the second sample is
the third byte plus the high nibble of the second byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core import IngestError, Record

__all__ = [
    "SignalSpec",
    "WFDBHeader",
    "parse_wfdb_header",
    "decode_dat",
    "adc_to_physical",
    "read_wfdb_record",
]

SUPPORTED_FORMATS = (16, 212)

DEFAULT_GAIN = 200.0


@dataclass
class SignalSpec:
    """One signal line of a header."""

    filename: str
    fmt: int
    gain: float
    baseline: int
    units: str
    description: str


@dataclass
class WFDBHeader:
    record_name: str
    n_sig: int
    fs: float
    n_samples: int
    signals: list[SignalSpec]


def _parse_gain_field(token: str, adc_zero: int) -> tuple[float, int, str]:
    """Split a gain token ``gain(baseline)/units`` into its parts.

    Gain 0 or an absent token means uncalibrated: gain defaults to 200.
    Baseline defaults to the ADC zero when no parenthesized value is given.
    """
    units = "mV"
    if "/" in token:
        token, units = token.split("/", 1)
    baseline = None
    if "(" in token:
        if not token.endswith(")"):
            raise IngestError(f"malformed gain field {token!r}")
        token, base_str = token[:-1].split("(", 1)
        baseline = int(base_str)
    gain = float(token) if token else 0.0
    if gain == 0.0:
        gain = DEFAULT_GAIN
    if baseline is None:
        baseline = adc_zero
    return gain, baseline, units


def parse_wfdb_header(text: str) -> WFDBHeader:
    """Parse header text: one record line, then one signal line per channel.

    Comment lines (starting with '#') and blank lines are ignored.  Optional
    fields default per the WFDB conventions: fs 250, gain 200, baseline =
    ADC zero (itself defaulting to 0).
    """
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise IngestError("header has no content lines")
    rec_tokens = lines[0].split()
    if len(rec_tokens) < 2:
        raise IngestError(f"malformed record line: {lines[0]!r}")
    record_name = rec_tokens[0].split("/")[0]
    try:
        n_sig = int(rec_tokens[1])
    except ValueError:
        raise IngestError(f"malformed record line (bad signal count): {lines[0]!r}") from None
    if n_sig < 1:
        raise IngestError(f"record line declares {n_sig} signals: {lines[0]!r}")
    fs = 250.0
    n_samples = 0
    if len(rec_tokens) >= 3:
        try:
            fs = float(rec_tokens[2].split("/")[0])
        except ValueError:
            raise IngestError(f"malformed record line (bad fs): {lines[0]!r}") from None
    if fs <= 0:
        raise IngestError(f"record line declares fs={fs}: {lines[0]!r}")
    if len(rec_tokens) >= 4:
        try:
            n_samples = int(rec_tokens[3])
        except ValueError:
            raise IngestError(
                f"malformed record line (bad sample count): {lines[0]!r}"
            ) from None
        if n_samples < 0:
            raise IngestError(f"record line declares n_samples={n_samples}: {lines[0]!r}")
    sig_lines = lines[1:]
    if len(sig_lines) < n_sig:
        raise IngestError(
            f"record line declares {n_sig} signals but header has only "
            f"{len(sig_lines)} signal lines"
        )
    signals: list[SignalSpec] = []
    for i, line in enumerate(sig_lines[:n_sig]):
        tokens = line.split()
        if len(tokens) < 2:
            raise IngestError(f"malformed signal line: {line!r}")
        filename = tokens[0]
        fmt_token = tokens[1]
        if not fmt_token.isdigit():
            raise IngestError(
                f"unsupported format token {fmt_token!r} in signal line: {line!r}"
            )
        fmt = int(fmt_token)
        if fmt not in SUPPORTED_FORMATS:
            raise IngestError(
                f"unsupported signal format {fmt} (supported: "
                f"{', '.join(map(str, SUPPORTED_FORMATS))}) in signal line: {line!r}"
            )
        adc_zero = 0
        if len(tokens) >= 5:
            try:
                adc_zero = int(tokens[4])
            except ValueError:
                raise IngestError(
                    f"malformed signal line (bad ADC zero): {line!r}"
                ) from None
        if len(tokens) >= 3:
            try:
                gain, baseline, units = _parse_gain_field(tokens[2], adc_zero)
            except ValueError:
                raise IngestError(f"malformed signal line (bad gain): {line!r}") from None
        else:
            gain, baseline, units = DEFAULT_GAIN, adc_zero, "mV"
        description = " ".join(tokens[8:]) if len(tokens) > 8 else f"ch{i}"
        signals.append(
            SignalSpec(
                filename=filename,
                fmt=fmt,
                gain=gain,
                baseline=baseline,
                units=units,
                description=description,
            )
        )
    return WFDBHeader(
        record_name=record_name, n_sig=n_sig, fs=fs, n_samples=n_samples, signals=signals
    )


def decode_dat(data: bytes, fmt: int, n_sig: int) -> list[np.ndarray]:
    """Decode interleaved samples and de-multiplex them round-robin.

    Returns ``n_sig`` int32 ADU arrays of equal length; trailing samples that
    do not complete a round-robin frame (a format-212 pad sample) are dropped.
    A trailing partial byte frame is rejected with its byte offset.
    """
    if n_sig < 1:
        raise IngestError(f"n_sig must be >= 1, got {n_sig}")
    raw = np.frombuffer(data, dtype=np.uint8)
    if fmt == 212:
        leftover = raw.size % 3
        if leftover:
            raise IngestError(
                f"format 212 data ends with a partial 3-byte frame at byte offset "
                f"{raw.size - leftover}"
            )
        b0 = raw[0::3].astype(np.int32)
        b1 = raw[1::3].astype(np.int32)
        b2 = raw[2::3].astype(np.int32)
        s1 = b0 | ((b1 & 0x0F) << 8)
        s2 = b2 | ((b1 & 0xF0) << 4)
        s1[s1 > 2047] -= 4096
        s2[s2 > 2047] -= 4096
        flat = np.empty(s1.size * 2, dtype=np.int32)
        flat[0::2] = s1
        flat[1::2] = s2
    elif fmt == 16:
        if raw.size % 2:
            raise IngestError(
                f"format 16 data ends with a partial 2-byte sample at byte offset "
                f"{raw.size - 1}"
            )
        flat = np.frombuffer(data, dtype="<i2").astype(np.int32)
    else:
        raise IngestError(
            f"unsupported signal format {fmt} (supported: "
            f"{', '.join(map(str, SUPPORTED_FORMATS))})"
        )
    n_complete = flat.size // n_sig
    flat = flat[: n_complete * n_sig]
    return [flat[i::n_sig].copy() for i in range(n_sig)]


def adc_to_physical(adu, gain: float, baseline: int) -> np.ndarray:
    """Convert ADC units to physical units: (adu - baseline) / gain."""
    if gain == 0:
        raise IngestError("gain must be nonzero")
    adu = np.asarray(adu)
    return (adu.astype(np.float64) - float(baseline)) / float(gain)


def assemble_record(
    header: WFDBHeader,
    dat_bytes: dict[str, bytes],
    channels: list[str] | None = None,
    record_id: str | None = None,
) -> Record:
    """Build a physical-unit Record from a parsed header plus raw signal bytes.

    ``dat_bytes`` maps each signal filename referenced by the header to its
    contents.  Signals sharing a file are interleaved within it in header
    order.  Channel arrays are keyed by signal description; ``channels``
    optionally filters (and orders) them.  The decoded length is checked
    against the header's sample count: longer-than-declared data is truncated
    (format 212 padding), shorter is rejected.
    """
    by_file: dict[str, list[int]] = {}
    for i, sig in enumerate(header.signals):
        by_file.setdefault(sig.filename, []).append(i)
    arrays: dict[int, np.ndarray] = {}
    for filename, indices in by_file.items():
        if filename not in dat_bytes:
            raise IngestError(f"missing signal file {filename!r}")
        fmts = {header.signals[i].fmt for i in indices}
        if len(fmts) > 1:
            raise IngestError(f"signal file {filename!r} mixes formats {sorted(fmts)}")
        decoded = decode_dat(dat_bytes[filename], fmts.pop(), len(indices))
        length = decoded[0].size
        if header.n_samples:
            if length < header.n_samples:
                raise IngestError(
                    f"signal file {filename!r} holds {length} samples per signal, "
                    f"header declares {header.n_samples}"
                )
            decoded = [arr[: header.n_samples] for arr in decoded]
        for arr, i in zip(decoded, indices):
            arrays[i] = arr
    out: dict[str, np.ndarray] = {}
    for i, sig in enumerate(header.signals):
        if sig.description in out:
            raise IngestError(f"duplicate channel description {sig.description!r}")
        out[sig.description] = adc_to_physical(arrays[i], sig.gain, sig.baseline)
    if channels is not None:
        missing = [ch for ch in channels if ch not in out]
        if missing:
            raise IngestError(
                f"requested channel(s) {missing} not in record "
                f"(available: {list(out)})"
            )
        out = {ch: out[ch] for ch in channels}
    return Record(id=record_id or header.record_name, fs=header.fs, channels=out)


def read_wfdb_record(
    hea_path, channels: list[str] | None = None, record_id: str | None = None
) -> Record:
    """Read a local record from its ``.hea`` path; signal files are resolved
    relative to the header's directory."""
    hea_path = Path(hea_path)
    try:
        text = hea_path.read_text()
    except OSError as exc:
        raise IngestError(f"cannot open {hea_path}: {exc}") from exc
    header = parse_wfdb_header(text)
    dat_bytes: dict[str, bytes] = {}
    for sig in header.signals:
        if sig.filename in dat_bytes:
            continue
        dat_path = hea_path.parent / sig.filename
        try:
            dat_bytes[sig.filename] = dat_path.read_bytes()
        except OSError as exc:
            raise IngestError(f"cannot open signal file {dat_path}: {exc}") from exc
    return assemble_record(header, dat_bytes, channels=channels, record_id=record_id)
