"""Rolling-window segmentation of records.

Windows start at offsets 0, step, 2*step, ...; only fully contained windows
are emitted (no padding), so a record of N samples yields exactly
floor((N - length)/step) + 1 windows.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Record

__all__ = ["WindowSpec", "rolling_windows"]


@dataclass(frozen=True)
class WindowSpec:
    length: int
    step: int

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"window length must be >= 1, got {self.length}")
        if self.step < 1:
            raise ValueError(f"window step must be >= 1, got {self.step}")


def rolling_windows(record: Record, spec: WindowSpec) -> list[Record]:
    """Cut a record into windows; ids are ``{parent_id}__w{start_index}``."""
    n = record.n_samples
    if spec.length > n:
        raise ValueError(
            f"window length {spec.length} exceeds record length {n} "
            f"(record {record.id!r})"
        )
    out = []
    for start in range(0, n - spec.length + 1, spec.step):
        channels = {
            name: arr[start : start + spec.length].copy()
            for name, arr in record.channels.items()
        }
        out.append(
            Record(id=f"{record.id}__w{start}", fs=record.fs, channels=channels)
        )
    return out
