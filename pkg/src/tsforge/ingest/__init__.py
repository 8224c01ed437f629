"""Record acquisition: CSV files, native WFDB parsing, PhysioNet fetch,
rolling-window segmentation."""

from .csvio import read_csv
from .fetch import DownloadCache, fetch_physionet
from .wfdb import (
    SignalSpec,
    WFDBHeader,
    adc_to_physical,
    assemble_record,
    decode_dat,
    parse_wfdb_header,
    read_wfdb_record,
)
from .windows import WindowSpec, rolling_windows

__all__ = [
    "read_csv",
    "WFDBHeader",
    "SignalSpec",
    "parse_wfdb_header",
    "assemble_record",
    "decode_dat",
    "adc_to_physical",
    "read_wfdb_record",
    "fetch_physionet",
    "DownloadCache",
    "WindowSpec",
    "rolling_windows",
]
