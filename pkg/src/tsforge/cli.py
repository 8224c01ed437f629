"""Command-line front end.

``tsforge validate <config>`` checks a JSON pipeline document and reports
every problem.  ``tsforge run <config>`` executes it and writes the feature
table plus a run report.  ``tsforge inspect <path|url>`` summarizes a single
record.  Exit codes: 0 success, 1 configuration error, 2 data or transport
error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path
from urllib.parse import urlparse

import numpy as np

from .config import build_plan, load_config, validate_config
from .core import ConfigError, IngestError, TsforgeError
from .ingest.csvio import read_csv
from .ingest.fetch import fetch_physionet
from .ingest.wfdb import read_wfdb_record
from .pipeline import run_plan, write_feature_csv, write_feature_jsonl, write_report

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsforge",
        description="multi-channel time-series feature extraction pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser(
        "validate", help="check a pipeline config without running it"
    )
    p_validate.add_argument("config", help="path to a JSON pipeline config")

    p_run = sub.add_parser("run", help="execute a pipeline config")
    p_run.add_argument("config", help="path to a JSON pipeline config")
    p_run.add_argument(
        "--n-jobs", type=int, default=None, help="worker process count override"
    )
    p_run.add_argument("--output", default=None, help="feature table path override")

    p_inspect = sub.add_parser(
        "inspect", help="summarize one record (CSV file, .hea file, or URL)"
    )
    p_inspect.add_argument("record", help="CSV path, WFDB header path, or .hea URL")
    p_inspect.add_argument(
        "--fs",
        type=float,
        default=None,
        help="sampling rate for CSV input (CSV files carry no rate)",
    )
    return parser


def cmd_validate(config_path: str) -> int:
    try:
        doc = load_config(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = validate_config(doc)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if result.errors:
        for e in result.errors:
            print(f"error: {e}", file=sys.stderr)
        print(f"invalid: {len(result.errors)} error(s)", file=sys.stderr)
        return 1
    print("configuration valid")
    return 0


def cmd_run(config_path: str, n_jobs_override=None, output_override=None) -> int:
    try:
        doc = load_config(config_path)
        result = validate_config(doc)
        for w in result.warnings:
            print(f"warning: {w}", file=sys.stderr)
        if result.errors:
            for e in result.errors:
                print(f"error: {e}", file=sys.stderr)
            return 1
        plan = build_plan(doc)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    n_jobs = n_jobs_override if n_jobs_override is not None else plan.run.n_jobs
    if n_jobs < 1:
        print(f"error: --n-jobs must be >= 1, got {n_jobs}", file=sys.stderr)
        return 1
    output = output_override if output_override is not None else plan.run.output
    if output is None:
        output = "features.csv"
    report_path = plan.run.report
    if report_path is None:
        report_path = str(Path(output).with_suffix(".report.json"))

    jobs = plan.importer.jobs()
    print(f"Running the pipeline on {len(jobs)} instances...", file=sys.stderr)

    def progress(done: int, total: int, record_id: str) -> None:
        print(f"  {done}/{total} records done ({record_id})", file=sys.stderr)

    t0 = time.perf_counter()
    try:
        run_result = run_plan(
            jobs,
            plan.features,
            chain=plan.chain,
            window=plan.importer.window,
            channel_names=plan.channel_names,
            n_jobs=n_jobs,
            progress=progress,
        )
        if plan.run.format == "jsonl":
            write_feature_jsonl(output, run_result.keys, run_result.rows)
        else:
            write_feature_csv(output, run_result.keys, run_result.rows)
        write_report(report_path, run_result.report)
    except (TsforgeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - t0
    print("finished!", file=sys.stderr)
    n_fail = run_result.report["n_failures"]
    print(
        f"wrote {len(run_result.rows)} rows to {output} "
        f"({n_fail} failure(s), {wall:.2f} s); report: {report_path}"
    )
    return 0


def _fmt(v: float) -> str:
    if math.isnan(v):
        return "n/a"
    return f"{v:g}"


def _load_for_inspect(target: str, fs):
    parsed = urlparse(target)
    if parsed.scheme in ("http", "https"):
        path = parsed.path
        if path.endswith(".hea"):
            path = path[: -len(".hea")]
        public_dir, _, record_name = path.strip("/").rpartition("/")
        if not record_name:
            raise IngestError(f"cannot extract a record name from URL {target!r}")
        base = f"{parsed.scheme}://{parsed.netloc}"
        return fetch_physionet(public_dir, record_name, base_url=base), None
    p = Path(target)
    if p.suffix == ".hea":
        return read_wfdb_record(p), None
    used_default = fs is None
    record = read_csv(p, fs=fs if fs is not None else 1.0)
    return record, used_default


def cmd_inspect(target: str, fs=None) -> int:
    try:
        record, fs_unknown = _load_for_inspect(target, fs)
    except (TsforgeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"record: {record.id}")
    if fs_unknown:
        print("fs: n/a (CSV input; pass --fs to set)")
        print(f"samples: {record.n_samples}")
        print("duration: n/a")
    else:
        print(f"fs: {_fmt(record.fs)} Hz")
        print(f"samples: {record.n_samples}")
        print(f"duration: {_fmt(record.duration)} s")
    print(f"channels: {len(record.channels)}")
    missing = record.missing_counts
    for name, x in record.channels.items():
        finite = x[np.isfinite(x)]
        lo = _fmt(float(finite.min())) if finite.size else "n/a"
        hi = _fmt(float(finite.max())) if finite.size else "n/a"
        print(f"  {name}: missing={missing[name]} min={lo} max={hi}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "validate":
        return cmd_validate(args.config)
    if args.command == "run":
        return cmd_run(args.config, args.n_jobs, args.output)
    return cmd_inspect(args.record, args.fs)


if __name__ == "__main__":
    sys.exit(main())
