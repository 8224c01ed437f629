"""Feature extraction for continuously monitored multi-channel time series.

Import records from CSV or WFDB sources, clean them with an ordered filter
chain, and compute time-domain, frequency-domain, entropy, and stationary
wavelet features into a wide table, sequentially or across a process pool
with byte-identical results.
"""

from ._kernels import BACKEND
from .core import (
    ConfigError,
    FeatureRow,
    IngestError,
    Record,
    Spectrum,
    TransportError,
    TsforgeError,
)
from .features import FeatureSet, feature_names
from .ingest import (
    DownloadCache,
    WindowSpec,
    fetch_physionet,
    read_csv,
    read_wfdb_record,
    rolling_windows,
)
from .pipeline import (
    CSVImporter,
    Pipeline,
    RunResult,
    WFDBImporter,
    extract_features,
    run_plan,
    schema_keys,
    write_feature_csv,
    write_feature_jsonl,
    write_report,
)
from .preprocess import (
    FilterChain,
    butter_apply,
    butter_design,
    interpolate,
    rm_outlier,
    rm_outliers_quantile,
)
from .spectral import periodogram, welch

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    "TsforgeError",
    "ConfigError",
    "IngestError",
    "TransportError",
    "Record",
    "Spectrum",
    "FeatureRow",
    "FeatureSet",
    "feature_names",
    "read_csv",
    "read_wfdb_record",
    "fetch_physionet",
    "DownloadCache",
    "WindowSpec",
    "rolling_windows",
    "FilterChain",
    "rm_outlier",
    "rm_outliers_quantile",
    "butter_design",
    "butter_apply",
    "interpolate",
    "periodogram",
    "welch",
    "extract_features",
    "schema_keys",
    "CSVImporter",
    "WFDBImporter",
    "Pipeline",
    "RunResult",
    "run_plan",
    "write_feature_csv",
    "write_feature_jsonl",
    "write_report",
]
