"""Declarative pipeline configuration: a single JSON document describing the
importer, cleaning steps, feature selection, and run options.

The schema is strict: unknown keys are rejected (with a nearest-match hint),
referenced paths must resolve at validation time, and feature/filter names
must come from the built-in vocabulary.  ``validate_config`` collects every
problem instead of stopping at the first; ``build_plan`` turns a valid
document into live importer/chain/feature objects.

Document shape::

    {
      "importer": {
        "kind": "csv-glob",
        "paths": ["data/*.csv"],
        "fs": 500,
        "channels": ["II", "V1"],
        "window": {"length": 5000, "step": 2500}
      },
      "filters": [
        {"name": "butter_filter", "params": {"cutoff": 60, "btype": "lowpass"}},
        "interpolate"
      ],
      "features": ["mnf", {"name": "band_power",
                           "params": {"low": 0.6, "high": 2, "spectrum": "welch"}}],
      "run": {"n_jobs": 4, "output": "features.csv", "format": "csv"}
    }

``features`` may instead be ``{"shared": [...], "per_channel": {"II": [...]}}``;
each channel gets the shared steps plus its own.  The wfdb-manifest importer
replaces paths/fs with ``records`` (inline ``{"public_dir", "record_name"}``
objects) or ``manifest`` (a text file, one ``public_dir record_name`` pair per
line, ``#`` comments allowed) plus an optional ``base_url``.
"""

from __future__ import annotations

import difflib
import json
from dataclasses import dataclass
from pathlib import Path

from .core import ConfigError
from .features import FeatureSet
from .features.freqdomain import format_number
from .pipeline import CSVImporter, WFDBImporter, schema_keys
from .preprocess import FILTER_STEPS, FilterChain, butter_design
from .ingest.windows import WindowSpec

__all__ = [
    "load_config",
    "validate_config",
    "build_plan",
    "ValidationResult",
    "Plan",
    "RunOptions",
]

_TOP_KEYS = ("importer", "filters", "features", "run")
_IMPORTER_KINDS = ("csv-glob", "wfdb-manifest")
_CSV_KEYS = ("kind", "paths", "fs", "channels", "window")
_WFDB_KEYS = ("kind", "records", "manifest", "channels", "base_url", "window")
_WINDOW_KEYS = ("length", "step")
_RUN_KEYS = ("n_jobs", "output", "format", "report", "cache_dir")
_FEATURES_KEYS = ("shared", "per_channel")
_ENTRY_KEYS = ("name", "params")
_FORMATS = ("csv", "jsonl")
_BAND_FEATURES = ("band_power", "band_std", "band_mnf", "band_mdf")


def _suggest(name: str, vocabulary) -> str:
    close = difflib.get_close_matches(str(name), list(vocabulary), n=1)
    return f" (did you mean {close[0]!r}?)" if close else ""


def _check_keys(section: dict, allowed, where: str, errors: list) -> None:
    for key in section:
        if key not in allowed:
            errors.append(
                f"{where}: unknown key {key!r}{_suggest(key, allowed)}; "
                f"allowed: {sorted(allowed)}"
            )


@dataclass
class ValidationResult:
    errors: list
    warnings: list

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class RunOptions:
    n_jobs: int = 1
    output: str | None = None
    format: str = "csv"
    report: str | None = None
    cache_dir: str | None = None


@dataclass
class Plan:
    importer: object
    chain: FilterChain | None
    features: object
    channel_names: list
    keys: list
    run: RunOptions


def load_config(path) -> dict:
    """Read and parse the JSON document; parse errors carry line/column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ConfigError(
            f"config root must be a JSON object, got {type(doc).__name__}"
        )
    return doc


def _as_entry(item, where: str, errors: list):
    """Normalize a feature/filter list item to (name, params) or None."""
    if isinstance(item, str):
        return item, {}
    if isinstance(item, dict):
        _check_keys(item, _ENTRY_KEYS, where, errors)
        if "name" not in item:
            errors.append(f"{where}: entry object needs a 'name' key")
            return None
        name = item["name"]
        if not isinstance(name, str):
            errors.append(f"{where}: 'name' must be a string")
            return None
        params = item.get("params", {})
        if not isinstance(params, dict):
            errors.append(f"{where}: 'params' must be an object")
            return None
        return name, dict(params)
    errors.append(
        f"{where}: each entry must be a name string or "
        f"{{'name': ..., 'params': {{...}}}}, got {type(item).__name__}"
    )
    return None


def _positive_int(value, where: str, errors: list, minimum: int = 1):
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"{where} must be an integer, got {value!r}")
        return None
    if value < minimum:
        errors.append(f"{where} must be >= {minimum}, got {value}")
        return None
    return value


def _parse_window(section, where: str, errors: list) -> WindowSpec | None:
    if not isinstance(section, dict):
        errors.append(f"{where} must be an object with 'length' and 'step'")
        return None
    _check_keys(section, _WINDOW_KEYS, where, errors)
    length = _positive_int(section.get("length"), f"{where}.length", errors)
    step = _positive_int(section.get("step"), f"{where}.step", errors)
    if length is None or step is None:
        return None
    return WindowSpec(length=length, step=step)


def _parse_channels(section: dict, where: str, errors: list):
    channels = section.get("channels")
    if channels is None:
        errors.append(f"{where}: 'channels' is required")
        return None
    if (
        not isinstance(channels, list)
        or not channels
        or not all(isinstance(c, str) and c for c in channels)
    ):
        errors.append(f"{where}.channels must be a non-empty list of channel names")
        return None
    if len(set(channels)) != len(channels):
        errors.append(f"{where}.channels contains duplicates: {channels}")
        return None
    return list(channels)


def _read_manifest(path: Path, errors: list):
    try:
        text = path.read_text()
    except OSError as exc:
        errors.append(f"importer.manifest: cannot read {path}: {exc}")
        return None
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            errors.append(
                f"importer.manifest line {lineno}: expected "
                f"'public_dir record_name', got {raw.strip()!r}"
            )
            continue
        records.append({"public_dir": parts[0], "record_name": parts[1]})
    if not records and not errors:
        errors.append(f"importer.manifest: {path} lists no records")
    return records


def _parse_importer(section, errors: list, warnings: list):
    """Returns (importer_kwargs, kind, fs, channels, window) or Nones."""
    if not isinstance(section, dict):
        errors.append("'importer' must be an object")
        return None, None, None, None, None
    kind = section.get("kind")
    if kind not in _IMPORTER_KINDS:
        errors.append(
            f"importer.kind must be one of {list(_IMPORTER_KINDS)}, got {kind!r}"
            f"{_suggest(kind, _IMPORTER_KINDS) if isinstance(kind, str) else ''}"
        )
        return None, None, None, None, None

    window = None
    if "window" in section:
        window = _parse_window(section["window"], "importer.window", errors)

    channels = _parse_channels(section, "importer", errors)

    if kind == "csv-glob":
        _check_keys(section, _CSV_KEYS, "importer", errors)
        fs = section.get("fs")
        if fs is None:
            errors.append("importer: 'fs' is required for csv-glob")
            fs = None
        elif isinstance(fs, bool) or not isinstance(fs, (int, float)) or not fs > 0:
            errors.append(f"importer.fs must be a positive number, got {fs!r}")
            fs = None
        paths = section.get("paths")
        if isinstance(paths, str):
            paths = [paths]
        if (
            not isinstance(paths, list)
            or not paths
            or not all(isinstance(p, str) and p for p in paths)
        ):
            errors.append("importer.paths must be a non-empty list of paths/globs")
            paths = None
        kwargs = None
        if paths is not None and fs is not None and channels is not None:
            try:
                probe = CSVImporter(paths, fs=fs, channels=channels, window=window)
            except Exception as exc:
                errors.append(f"importer: {exc}")
            else:
                kwargs = {
                    "kind": kind,
                    "paths": paths,
                    "fs": float(fs),
                    "channels": channels,
                    "window": window,
                }
                if window is not None:
                    _warn_short_records(probe.paths, window, warnings)
        return kwargs, kind, fs, channels, window

    _check_keys(section, _WFDB_KEYS, "importer", errors)
    records = section.get("records")
    manifest = section.get("manifest")
    if (records is None) == (manifest is None):
        errors.append(
            "importer: exactly one of 'records' (inline list) or 'manifest' "
            "(path to a record list) is required for wfdb-manifest"
        )
        return None, kind, None, channels, window
    if manifest is not None:
        if not isinstance(manifest, str) or not manifest:
            errors.append("importer.manifest must be a path string")
            return None, kind, None, channels, window
        records = _read_manifest(Path(manifest), errors)
        if records is None or errors:
            return None, kind, None, channels, window
    else:
        if not isinstance(records, list) or not records:
            errors.append("importer.records must be a non-empty list")
            return None, kind, None, channels, window
        cleaned = []
        for i, rec in enumerate(records):
            if (
                not isinstance(rec, dict)
                or set(rec) != {"public_dir", "record_name"}
                or not all(isinstance(rec[k], str) and rec[k] for k in rec)
            ):
                errors.append(
                    f"importer.records[{i}] must be "
                    "{'public_dir': ..., 'record_name': ...}"
                )
            else:
                cleaned.append(rec)
        if len(cleaned) != len(records):
            return None, kind, None, channels, window
        records = cleaned
    base_url = section.get("base_url")
    if base_url is not None and (not isinstance(base_url, str) or not base_url):
        errors.append("importer.base_url must be a URL string")
        return None, kind, None, channels, window
    kwargs = None
    if channels is not None:
        kwargs = {
            "kind": kind,
            "records": records,
            "channels": channels,
            "base_url": base_url,
            "window": window,
        }
    return kwargs, kind, None, channels, window


def _csv_data_rows(path: str) -> int:
    n = 0
    with open(path, newline="") as fh:
        for line in fh:
            if line.strip():
                n += 1
    return max(n - 1, 0)


def _warn_short_records(paths, window: WindowSpec, warnings: list) -> None:
    for p in paths:
        try:
            rows = _csv_data_rows(p)
        except OSError:
            continue
        if window.length > rows:
            warnings.append(
                f"window length {window.length} exceeds record length {rows} "
                f"for {p}; that record will yield no windows"
            )


def _parse_filters(section, fs, errors: list) -> FilterChain | None:
    if not isinstance(section, list):
        errors.append("'filters' must be a list of step entries")
        return None
    chain = FilterChain()
    for i, item in enumerate(section):
        entry = _as_entry(item, f"filters[{i}]", errors)
        if entry is None:
            continue
        name, params = entry
        try:
            chain.add(name, **params)
        except ValueError as exc:
            msg = str(exc)
            if "unknown filter step" in msg:
                msg = (
                    f"unknown filter step {name!r}{_suggest(name, FILTER_STEPS)}; "
                    f"expected one of {sorted(FILTER_STEPS)}"
                )
            errors.append(f"filters[{i}]: {msg}")
            continue
        if name == "butter_filter" and fs is not None:
            try:
                butter_design(
                    params.get("order", 5),
                    params["cutoff"],
                    params.get("btype", "lowpass"),
                    float(fs),
                )
            except Exception as exc:
                errors.append(f"filters[{i}]: {exc}")
    return chain if not errors else None


def _band_nyquist_check(name, params, fs, where, errors) -> None:
    if fs is None or name not in _BAND_FEATURES:
        return
    low, high = params.get("low"), params.get("high")
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (low, high)):
        return
    nyq = float(fs) / 2.0
    if high > nyq:
        errors.append(
            f"{where}: band [{format_number(float(low))}, "
            f"{format_number(float(high))}] Hz exceeds Nyquist "
            f"{format_number(nyq)} Hz at fs={format_number(float(fs))}"
        )


def _add_entries(fset: FeatureSet, entries, fs, where: str, errors: list) -> None:
    for i, item in enumerate(entries):
        entry = _as_entry(item, f"{where}[{i}]", errors)
        if entry is None:
            continue
        name, params = entry
        pre_nyq = len(errors)
        _band_nyquist_check(name, params, fs, f"{where}[{i}]", errors)
        if len(errors) > pre_nyq:
            continue
        try:
            fset.add(name, **params)
        except ValueError as exc:
            errors.append(f"{where}[{i}]: {exc}")


def _parse_features(section, channels, fs, errors: list):
    """Returns a FeatureSet (shared) or {channel: FeatureSet} map."""
    if isinstance(section, list):
        fset = FeatureSet()
        _add_entries(fset, section, fs, "features", errors)
        if not errors and not fset.keys():
            errors.append("features: no features selected")
        return fset if not errors else None
    if isinstance(section, dict):
        _check_keys(section, _FEATURES_KEYS, "features", errors)
        shared = section.get("shared", [])
        per_channel = section.get("per_channel", {})
        if not isinstance(shared, list):
            errors.append("features.shared must be a list of feature entries")
            return None
        if not isinstance(per_channel, dict):
            errors.append("features.per_channel must map channel names to entry lists")
            return None
        if channels is not None:
            stray = [ch for ch in per_channel if ch not in channels]
            if stray:
                errors.append(
                    f"features.per_channel names channel(s) {stray} not in "
                    f"importer.channels {channels}"
                )
        result = {}
        for ch in channels or []:
            fset = FeatureSet()
            _add_entries(fset, shared, fs, "features.shared", errors)
            extra = per_channel.get(ch, [])
            if not isinstance(extra, list):
                errors.append(
                    f"features.per_channel.{ch} must be a list of feature entries"
                )
                continue
            _add_entries(fset, extra, fs, f"features.per_channel.{ch}", errors)
            result[ch] = fset
        if not errors and all(not f.keys() for f in result.values()):
            errors.append("features: no features selected")
        return result if not errors else None
    errors.append(
        "'features' must be a list of entries or "
        "{'shared': [...], 'per_channel': {...}}"
    )
    return None


def _parse_run(section, errors: list) -> RunOptions | None:
    if not isinstance(section, dict):
        errors.append("'run' must be an object")
        return None
    _check_keys(section, _RUN_KEYS, "run", errors)
    n_jobs = 1
    if "n_jobs" in section:
        got = _positive_int(section["n_jobs"], "run.n_jobs", errors)
        if got is not None:
            n_jobs = got
    fmt = section.get("format", "csv")
    if fmt not in _FORMATS:
        errors.append(
            f"run.format must be one of {list(_FORMATS)}, got {fmt!r}"
            f"{_suggest(fmt, _FORMATS) if isinstance(fmt, str) else ''}"
        )
        fmt = "csv"
    for key in ("output", "report", "cache_dir"):
        if key in section and (
            not isinstance(section[key], str) or not section[key]
        ):
            errors.append(f"run.{key} must be a path string")
    if errors:
        return None
    return RunOptions(
        n_jobs=n_jobs,
        output=section.get("output"),
        format=fmt,
        report=section.get("report"),
        cache_dir=section.get("cache_dir"),
    )


def _build(doc: dict):
    errors: list = []
    warnings: list = []
    _check_keys(doc, _TOP_KEYS, "config", errors)
    for required in ("importer", "features"):
        if required not in doc:
            errors.append(f"config: '{required}' section is required")
    if errors:
        return None, errors, warnings

    imp_kwargs, kind, fs, channels, window = _parse_importer(
        doc["importer"], errors, warnings
    )

    chain = None
    if "filters" in doc:
        filter_errors: list = []
        chain = _parse_filters(doc["filters"], fs, filter_errors)
        errors.extend(filter_errors)

    feature_errors: list = []
    features = _parse_features(doc["features"], channels, fs, feature_errors)
    errors.extend(feature_errors)

    run = RunOptions()
    if "run" in doc:
        run_errors: list = []
        parsed = _parse_run(doc["run"], run_errors)
        errors.extend(run_errors)
        if parsed is not None:
            run = parsed

    if errors or imp_kwargs is None or features is None:
        return None, errors, warnings

    if kind == "csv-glob":
        importer = CSVImporter(
            imp_kwargs["paths"],
            fs=imp_kwargs["fs"],
            channels=imp_kwargs["channels"],
            window=imp_kwargs["window"],
        )
    else:
        importer = WFDBImporter(
            imp_kwargs["records"],
            channels=imp_kwargs["channels"],
            base_url=imp_kwargs["base_url"],
            cache_dir=run.cache_dir,
            window=imp_kwargs["window"],
        )
    keys = schema_keys(features, channels)
    plan = Plan(
        importer=importer,
        chain=chain,
        features=features,
        channel_names=channels,
        keys=keys,
        run=run,
    )
    return plan, errors, warnings


def validate_config(doc: dict) -> ValidationResult:
    """Full schema and semantic validation; collects all problems."""
    _, errors, warnings = _build(doc)
    return ValidationResult(errors=errors, warnings=warnings)


def build_plan(doc: dict) -> Plan:
    """Validate and construct the executable plan; raises ConfigError."""
    plan, errors, _ = _build(doc)
    if errors or plan is None:
        detail = "\n".join(f"  - {e}" for e in errors) or "  - unknown error"
        raise ConfigError(f"configuration invalid:\n{detail}")
    return plan
