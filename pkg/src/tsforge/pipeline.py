"""Batch orchestration: importer + filter chain + feature set(s) over many
records, sequentially or in a worker pool, with deterministic output.

Records are independent units of work.  Parallelism distributes whole records
across processes and reassembles results by each job's position in the
importer's ordering, so the output table is a pure function of configuration
and input bytes: byte-identical for any n_jobs.  A record that fails to load
or clean still produces its row, filled with NaN, and the failure is listed
in the run report.
"""

from __future__ import annotations

import csv
import glob as _glob
import json
import math
import time
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path

from .core import FeatureRow, IngestError, Record
from .features import FeatureSet
from .ingest.csvio import read_csv
from .ingest.fetch import fetch_physionet
from .ingest.windows import WindowSpec, rolling_windows
from .preprocess import FilterChain

__all__ = [
    "extract_features",
    "CSVImporter",
    "WFDBImporter",
    "Pipeline",
    "RunResult",
    "run_plan",
    "schema_keys",
    "write_feature_csv",
    "write_feature_jsonl",
]


def _effective_sets(features, channel_names: list[str]):
    """Resolve (channel, FeatureSet) pairs in output order.

    A bare FeatureSet applies to every channel in record order; a dict maps
    channel names to their own sets (dict order wins, unknown names rejected).
    """
    if isinstance(features, FeatureSet):
        return [(ch, features) for ch in channel_names]
    if isinstance(features, dict):
        missing = [ch for ch in features if ch not in channel_names]
        if missing:
            raise ValueError(
                f"feature map names channel(s) {missing} not present in record "
                f"(available: {channel_names})"
            )
        return list(features.items())
    raise TypeError(
        f"features must be a FeatureSet or a dict of them, got {type(features).__name__}"
    )


def extract_features(
    record: Record,
    features,
    chain: FilterChain | None = None,
    errors: list | None = None,
) -> FeatureRow:
    """One record through the cleaning chain and feature set(s).

    Keys come out as ``{channel}_{feature_key}``.  A chain or feature failure
    on one channel fills that channel's keys with NaN and logs to ``errors``;
    other channels are unaffected.
    """
    sets = _effective_sets(features, record.channel_names)
    values: dict[str, float] = {}
    for ch, fset in sets:
        label = f"{record.id}:{ch}"
        x = record.channels[ch]
        if chain is not None and len(chain):
            try:
                x = chain.apply(x, record.fs)
            except Exception as exc:
                for k in fset.keys():
                    values[f"{ch}_{k}"] = float("nan")
                if errors is not None:
                    errors.append(
                        {"where": label, "step": "filter_chain", "message": str(exc)}
                    )
                continue
        ch_values = fset.compute(x, record.fs, errors=errors, label=label)
        for k, v in ch_values.items():
            values[f"{ch}_{k}"] = v
    return FeatureRow(id=record.id, values=values)


def schema_keys(features, channel_names: list[str]) -> list[str]:
    """Full output column list (minus the id column), from configuration only."""
    if isinstance(features, FeatureSet):
        pairs = [(ch, features) for ch in channel_names]
    elif isinstance(features, dict):
        pairs = list(features.items())
    else:
        raise TypeError(
            f"features must be a FeatureSet or a dict of them, got {type(features).__name__}"
        )
    out: list[str] = []
    for ch, fset in pairs:
        out.extend(f"{ch}_{k}" for k in fset.keys())
    return out


# ---------------------------------------------------------------------------
# importers: each yields picklable jobs that load one record in a worker

@dataclass(frozen=True)
class CSVJob:
    record_id: str
    path: str
    fs: float
    channels: tuple | None

    def load(self) -> Record:
        record = read_csv(self.path, fs=self.fs, record_id=self.record_id)
        if self.channels is not None:
            missing = [ch for ch in self.channels if ch not in record.channels]
            if missing:
                raise IngestError(
                    f"record {self.record_id!r}: channel(s) {missing} not in file "
                    f"(available: {record.channel_names})"
                )
            record = Record(
                id=record.id,
                fs=record.fs,
                channels={ch: record.channels[ch] for ch in self.channels},
            )
        return record


@dataclass(frozen=True)
class WFDBJob:
    record_id: str
    public_dir: str
    record_name: str
    channels: tuple | None
    base_url: str | None
    cache_dir: str | None

    def load(self) -> Record:
        return fetch_physionet(
            self.public_dir,
            self.record_name,
            channels=list(self.channels) if self.channels is not None else None,
            base_url=self.base_url,
            cache_dir=self.cache_dir,
        )


class CSVImporter:
    """CSV files (explicit paths and/or glob patterns) at one sampling rate.

    ``channels`` names the columns to keep, in order; required when a shared
    FeatureSet is used so the output schema is known up front.
    """

    def __init__(self, paths, fs: float, channels=None, window: WindowSpec | None = None):
        if isinstance(paths, (str, Path)):
            paths = [paths]
        resolved: list[str] = []
        for pattern in paths:
            pattern = str(pattern)
            if _glob.has_magic(pattern):
                matches = sorted(_glob.glob(pattern))
                if not matches:
                    raise IngestError(f"glob pattern {pattern!r} matches no files")
                resolved.extend(matches)
            else:
                if not Path(pattern).exists():
                    raise IngestError(f"input file not found: {pattern}")
                resolved.append(pattern)
        if not resolved:
            raise IngestError("importer resolved zero input files")
        self.paths = resolved
        self.fs = float(fs)
        self.channels = tuple(channels) if channels is not None else None
        self.window = window

    def jobs(self) -> list[CSVJob]:
        return [
            CSVJob(record_id=Path(p).stem, path=p, fs=self.fs, channels=self.channels)
            for p in self.paths
        ]

    @property
    def channel_names(self):
        return list(self.channels) if self.channels is not None else None


class WFDBImporter:
    """Remote (or cached/fixture-served) WFDB records by name.

    ``records`` is a sequence of (public_dir, record_name) pairs or dicts with
    those keys; all records share the channel selection.
    """

    def __init__(
        self,
        records,
        channels=None,
        base_url: str | None = None,
        cache_dir=None,
        window: WindowSpec | None = None,
    ):
        entries: list[tuple[str, str]] = []
        for rec in records:
            if isinstance(rec, dict):
                entries.append((str(rec["public_dir"]), str(rec["record_name"])))
            else:
                public_dir, record_name = rec
                entries.append((str(public_dir), str(record_name)))
        if not entries:
            raise IngestError("importer resolved zero records")
        self.records = entries
        self.channels = tuple(channels) if channels is not None else None
        self.base_url = base_url
        self.cache_dir = str(cache_dir) if cache_dir is not None else None
        self.window = window

    def jobs(self) -> list[WFDBJob]:
        return [
            WFDBJob(
                record_id=name,
                public_dir=public_dir,
                record_name=name,
                channels=self.channels,
                base_url=self.base_url,
                cache_dir=self.cache_dir,
            )
            for public_dir, name in self.records
        ]

    @property
    def channel_names(self):
        return list(self.channels) if self.channels is not None else None


# ---------------------------------------------------------------------------
# execution

@dataclass
class _JobOutcome:
    index: int
    rows: list
    errors: list
    seconds: float


@dataclass(frozen=True)
class _RunPlan:
    """Everything a worker needs; picklable."""

    jobs: tuple
    chain: FilterChain | None
    features: object
    window: WindowSpec | None
    keys: tuple


def _conform(row: FeatureRow, keys) -> FeatureRow:
    """Project a row onto the schema: missing keys become NaN, extras drop."""
    values = {k: row.values.get(k, float("nan")) for k in keys}
    return FeatureRow(id=row.id, values=values)


def _nan_row(record_id: str, keys) -> FeatureRow:
    return FeatureRow(id=record_id, values={k: float("nan") for k in keys})


def _process_job(args) -> _JobOutcome:
    plan, index = args
    job = plan.jobs[index]
    t0 = time.perf_counter()
    errors: list = []
    rows: list = []
    try:
        record = job.load()
        records = (
            rolling_windows(record, plan.window) if plan.window is not None else [record]
        )
        for rec in records:
            row = extract_features(rec, plan.features, plan.chain, errors=errors)
            rows.append(_conform(row, plan.keys))
    except Exception as exc:
        errors.append({"where": job.record_id, "step": "load", "message": str(exc)})
        rows = [_nan_row(job.record_id, plan.keys)]
    return _JobOutcome(
        index=index, rows=rows, errors=errors, seconds=time.perf_counter() - t0
    )


@dataclass
class RunResult:
    keys: list[str]
    rows: list[FeatureRow]
    report: dict


def run_plan(
    jobs,
    features,
    chain: FilterChain | None = None,
    window: WindowSpec | None = None,
    channel_names=None,
    n_jobs: int = 1,
    progress=None,
) -> RunResult:
    """Execute feature extraction over a list of record jobs.

    ``channel_names`` (required for a shared FeatureSet) fixes the output
    schema before any data is read.  ``progress`` is an optional callable
    ``(done, total, record_id)`` invoked as jobs finish.  Rows come back in
    importer order regardless of worker scheduling.
    """
    jobs = list(jobs)
    if not jobs:
        raise IngestError("no records to process")
    if n_jobs < 1:
        raise ValueError(f"n_jobs must be >= 1, got {n_jobs}")
    if isinstance(features, FeatureSet) and channel_names is None:
        raise ValueError(
            "channel_names is required with a shared FeatureSet so the output "
            "schema is known before any data is read"
        )
    keys = schema_keys(features, channel_names or [])
    plan = _RunPlan(
        jobs=tuple(jobs),
        chain=chain,
        features=features,
        window=window,
        keys=tuple(keys),
    )
    t0 = time.perf_counter()
    outcomes: list = [None] * len(jobs)
    if n_jobs == 1:
        for i in range(len(jobs)):
            outcome = _process_job((plan, i))
            outcomes[i] = outcome
            if progress is not None:
                progress(i + 1, len(jobs), jobs[i].record_id)
    else:
        done = 0
        with Pool(processes=n_jobs) as pool:
            for outcome in pool.imap_unordered(
                _process_job, [(plan, i) for i in range(len(jobs))]
            ):
                outcomes[outcome.index] = outcome
                done += 1
                if progress is not None:
                    progress(done, len(jobs), jobs[outcome.index].record_id)
    wall = time.perf_counter() - t0
    rows: list[FeatureRow] = []
    failures: list = []
    per_record: list = []
    for outcome in outcomes:
        rows.extend(outcome.rows)
        failures.extend(outcome.errors)
        per_record.append(
            {
                "id": jobs[outcome.index].record_id,
                "seconds": round(outcome.seconds, 6),
                "n_errors": len(outcome.errors),
            }
        )
    report = {
        "records_total": len(jobs),
        "rows": len(rows),
        "n_failures": len(failures),
        "failures": failures,
        "wall_time_s": round(wall, 6),
        "per_record": per_record,
    }
    return RunResult(keys=keys, rows=rows, report=report)


class Pipeline:
    """Importer + filters + features, executed in one call.

    ``features`` is a FeatureSet (applied to every imported channel; the
    importer must then declare its channels) or a dict of channel name to
    FeatureSet.
    """

    def __init__(self, importer, features, filters: FilterChain | None = None):
        self.importer = importer
        self.features = features
        self.filters = filters
        if isinstance(features, FeatureSet) and importer.channel_names is None:
            raise ValueError(
                "importer must declare channels when a shared FeatureSet is used"
            )

    def run(self, n_jobs: int = 1, progress=None) -> RunResult:
        return run_plan(
            self.importer.jobs(),
            self.features,
            chain=self.filters,
            window=self.importer.window,
            channel_names=self.importer.channel_names,
            n_jobs=n_jobs,
            progress=progress,
        )


# ---------------------------------------------------------------------------
# output sinks

def _format_value(v: float) -> str:
    if isinstance(v, float) and math.isnan(v):
        return ""
    return repr(float(v))


def write_feature_csv(path, keys, rows) -> None:
    """Wide CSV: header ``id,<keys...>``, NaN as empty cells, '\\n' endings."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *keys])
        for row in rows:
            writer.writerow(
                [row.id, *(_format_value(row.values.get(k, float("nan"))) for k in keys)]
            )


def write_feature_jsonl(path, keys, rows) -> None:
    """JSON-lines: one object per row, NaN carried as null."""
    with open(path, "w") as fh:
        for row in rows:
            obj = {"id": row.id}
            for k in keys:
                v = row.values.get(k, float("nan"))
                obj[k] = None if (isinstance(v, float) and math.isnan(v)) else v
            fh.write(json.dumps(obj) + "\n")


def write_report(path, report: dict) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
