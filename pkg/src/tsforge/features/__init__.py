"""Feature vocabulary and the FeatureSet container.

Every built-in feature is described by a registry entry that can validate its
parameters, name its output keys, and compute its values, so a feature
configuration fully determines the output column schema before any data is
read.  A FeatureSet holds an ordered list of steps; frequency features share
per-signal spectrum estimates through a cache, and user-defined callables can
be appended with their keys fixed at registration time.

Steps can be added two ways, equivalent in effect::

    fs.add("mnf", spectrum="ps")
    fs.add.mnf(spectrum="ps")

User functions::

    fs.udf.add(my_feature)            # keys probed on a synthetic signal
    fs.udf.add(my_feature, keys=["q_low", "q_high"])
"""

from __future__ import annotations

import difflib
import inspect
import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..core import as_signal
from ..spectral import periodogram, welch
from . import entropy as _entropy
from . import freqdomain as _freq
from . import timedomain as _time
from . import wavelet as _wavelet

__all__ = ["FeatureSet", "FeatureStep", "SignalContext", "REGISTRY", "feature_names"]


# ---------------------------------------------------------------------------
# parameter validation helpers

def _as_bool(name: str, v) -> bool:
    if not isinstance(v, bool):
        raise ValueError(f"parameter {name!r} must be a boolean, got {v!r}")
    return v


def _as_int(name: str, v, lo=None, hi=None) -> int:
    if isinstance(v, bool):
        raise ValueError(f"parameter {name!r} must be an integer, got {v!r}")
    if isinstance(v, float):
        if not v.is_integer():
            raise ValueError(f"parameter {name!r} must be an integer, got {v!r}")
        v = int(v)
    if not isinstance(v, int):
        raise ValueError(f"parameter {name!r} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ValueError(f"parameter {name!r} must be >= {lo}, got {v}")
    if hi is not None and v > hi:
        raise ValueError(f"parameter {name!r} must be <= {hi}, got {v}")
    return v


def _as_number(name: str, v, lo=None, hi=None, lo_open=False, hi_open=False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"parameter {name!r} must be a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"parameter {name!r} must be finite, got {v}")
    if lo is not None and (v <= lo if lo_open else v < lo):
        op = ">" if lo_open else ">="
        raise ValueError(f"parameter {name!r} must be {op} {lo}, got {v}")
    if hi is not None and (v >= hi if hi_open else v > hi):
        op = "<" if hi_open else "<="
        raise ValueError(f"parameter {name!r} must be {op} {hi}, got {v}")
    return v


def _reject_unknown(feature: str, params: dict, allowed) -> None:
    unknown = set(params) - set(allowed)
    if unknown:
        raise ValueError(
            f"unknown parameter(s) {sorted(unknown)} for feature {feature!r}; "
            f"allowed: {sorted(allowed)}"
        )


_SPECTRUM_SELECTORS = ("ps", "welch")
_WELCH_PARAMS = ("nperseg", "overlap_ratio", "window")


def _validate_spectrum_params(feature: str, params: dict) -> dict:
    """Normalize the spectrum selector plus estimator parameters in place."""
    out = {}
    selector = params.get("spectrum", "ps")
    if selector not in _SPECTRUM_SELECTORS:
        raise ValueError(
            f"feature {feature!r}: spectrum must be one of {_SPECTRUM_SELECTORS}, "
            f"got {selector!r}"
        )
    out["spectrum"] = selector
    present = [k for k in _WELCH_PARAMS if k in params]
    if selector == "ps" and present:
        raise ValueError(
            f"feature {feature!r}: parameter(s) {present} apply only to spectrum='welch'"
        )
    if "nperseg" in params:
        out["nperseg"] = _as_int("nperseg", params["nperseg"], lo=4)
    if "overlap_ratio" in params:
        out["overlap_ratio"] = _as_number(
            "overlap_ratio", params["overlap_ratio"], lo=0.0, hi=1.0, hi_open=True
        )
    if "window" in params:
        w = params["window"]
        if w not in ("hann", "hamming", "rectangular"):
            raise ValueError(
                f"feature {feature!r}: window must be one of "
                f"('hann', 'hamming', 'rectangular'), got {w!r}"
            )
        out["window"] = w
    return out


# ---------------------------------------------------------------------------
# evaluation context

class SignalContext:
    """One channel's signal plus cached derived quantities.

    Spectra are cached per (selector, parameters) so a feature set computes
    each estimate at most once per signal; basic time statistics are shared
    the same way.
    """

    def __init__(self, x, fs: float):
        self.x = as_signal(x)
        self.fs = float(fs)
        self._spectra: dict = {}
        self._basic: dict | None = None

    def spectrum(self, selector: str = "ps", **params):
        key = (selector, tuple(sorted(params.items())))
        if key not in self._spectra:
            if selector == "ps":
                self._spectra[key] = periodogram(self.x, self.fs)
            elif selector == "welch":
                self._spectra[key] = welch(self.x, self.fs, **params)
            else:
                raise ValueError(f"unknown spectrum selector {selector!r}")
        return self._spectra[key]

    def basic(self) -> dict:
        if self._basic is None:
            self._basic = _time.basic_stats(self.x)
        return self._basic


def _ctx_spectrum(ctx: SignalContext, params: dict):
    sel = params.get("spectrum", "ps")
    welch_params = {k: params[k] for k in _WELCH_PARAMS if k in params}
    return ctx.spectrum(sel, **welch_params)


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class FeatureDef:
    name: str
    validate: Callable[[dict], dict]
    keys: Callable[[dict], tuple]
    compute: Callable[[SignalContext, dict], dict]


REGISTRY: dict[str, FeatureDef] = {}


def _register(name, validate, keys, compute):
    REGISTRY[name] = FeatureDef(name=name, validate=validate, keys=keys, compute=compute)


def feature_names() -> list[str]:
    return sorted(REGISTRY)


def _no_params(feature: str):
    def validate(params: dict) -> dict:
        _reject_unknown(feature, params, ())
        return {}

    return validate


# time-domain singles share the cached basic_stats computation
def _register_time_singles():
    for key in _time.BASIC_STAT_KEYS:
        def compute(ctx, params, _key=key):
            return {_key: ctx.basic()[_key]}

        _register(key, _no_params(key), lambda params, _key=key: (_key,), compute)


_register_time_singles()

_register(
    "basic_stats",
    _no_params("basic_stats"),
    lambda params: tuple(_time.BASIC_STAT_KEYS),
    lambda ctx, params: dict(ctx.basic()),
)


def _validate_zcr(params):
    _reject_unknown("zcr", params, ("center",))
    out = {}
    if "center" in params:
        out["center"] = _as_bool("center", params["center"])
    return out


_register(
    "zcr",
    _validate_zcr,
    lambda params: ("zcr",),
    lambda ctx, params: {"zcr": float(_time.zcr(ctx.x, center=params.get("center", True)))},
)


def _validate_entropy(params):
    _reject_unknown("entropy", params, ("bins", "log_base"))
    out = {}
    if "bins" in params and params["bins"] is not None:
        out["bins"] = _as_int("bins", params["bins"], lo=1)
    if "log_base" in params:
        base = params["log_base"]
        if base not in (2, 2.0, "e") and not (
            isinstance(base, (int, float)) and not isinstance(base, bool) and base > 1
        ):
            raise ValueError(f"parameter 'log_base' must be > 1 or 'e', got {base!r}")
        out["log_base"] = base
    return out


_register(
    "entropy",
    _validate_entropy,
    lambda params: ("entropy",),
    lambda ctx, params: {
        "entropy": _entropy.entropy(
            ctx.x, bins=params.get("bins"), log_base=params.get("log_base", 2)
        )
    },
)


def _validate_sampen(params):
    _reject_unknown("sample_entropy", params, ("m", "r"))
    out = {}
    if "m" in params:
        out["m"] = _as_int("m", params["m"], lo=1)
    if "r" in params and params["r"] is not None:
        out["r"] = _as_number("r", params["r"], lo=0.0)
    return out


_register(
    "sample_entropy",
    _validate_sampen,
    lambda params: ("sample_entropy",),
    lambda ctx, params: {
        "sample_entropy": _entropy.sample_entropy(
            ctx.x, m=params.get("m", 2), r=params.get("r")
        )
    },
)


def _validate_perm(params):
    _reject_unknown("perm_entropy", params, ("order", "delay", "normalize"))
    out = {}
    if "order" in params:
        out["order"] = _as_int("order", params["order"], lo=2, hi=10)
    if "delay" in params:
        out["delay"] = _as_int("delay", params["delay"], lo=1)
    if "normalize" in params:
        out["normalize"] = _as_bool("normalize", params["normalize"])
    return out


_register(
    "perm_entropy",
    _validate_perm,
    lambda params: ("perm_entropy",),
    lambda ctx, params: {
        "perm_entropy": _entropy.perm_entropy(
            ctx.x,
            order=params.get("order", 3),
            delay=params.get("delay", 1),
            normalize=params.get("normalize", False),
        )
    },
)


def _validate_spectral_entropy(params):
    out = _validate_spectrum_params("spectral_entropy", params)
    rest = {k: v for k, v in params.items() if k not in out}
    _reject_unknown("spectral_entropy", rest, ("normalize",))
    if "normalize" in rest:
        out["normalize"] = _as_bool("normalize", rest["normalize"])
    return out


_register(
    "spectral_entropy",
    _validate_spectral_entropy,
    lambda params: ("spectral_entropy",),
    lambda ctx, params: {
        "spectral_entropy": _entropy.spectrum_entropy(
            _ctx_spectrum(ctx, params), normalize=params.get("normalize", True)
        )
    },
)


def _spectral_moment(name: str, fn):
    def validate(params):
        out = _validate_spectrum_params(name, params)
        rest = {k: v for k, v in params.items() if k not in out}
        _reject_unknown(name, rest, ())
        return out

    def compute(ctx, params):
        return {name: fn(_ctx_spectrum(ctx, params))}

    _register(name, validate, lambda params: (name,), compute)


_spectral_moment("mnf", _freq.mnf)
_spectral_moment("mdf", _freq.mdf)
_spectral_moment("vcf", _freq.vcf)
_spectral_moment("stdf", _freq.stdf)


def _validate_psr(params):
    out = _validate_spectrum_params("psr", params)
    rest = {k: v for k, v in params.items() if k not in out}
    _reject_unknown("psr", rest, ("int_limit_ratio",))
    ratio = 0.01
    if "int_limit_ratio" in rest:
        ratio = _as_number("int_limit_ratio", rest["int_limit_ratio"], lo=0.0, hi=1.0, lo_open=True)
    out["int_limit_ratio"] = ratio
    return out


_register(
    "psr",
    _validate_psr,
    lambda params: (f"psr_{_freq.format_number(params.get('int_limit_ratio', 0.01))}",),
    lambda ctx, params: {
        f"psr_{_freq.format_number(params.get('int_limit_ratio', 0.01))}": _freq.psr(
            _ctx_spectrum(ctx, params), params.get("int_limit_ratio", 0.01)
        )
    },
)


def _validate_peaks(params):
    out = _validate_spectrum_params("peaks", params)
    rest = {k: v for k, v in params.items() if k not in out}
    _reject_unknown("peaks", rest, ("n_peaks", "height", "width"))
    out["n_peaks"] = _as_int("n_peaks", rest.get("n_peaks", 1), lo=1)
    out["height"] = _as_bool("height", rest["height"]) if "height" in rest else True
    out["width"] = _as_bool("width", rest["width"]) if "width" in rest else True
    return out


def _peaks_keys(params) -> tuple:
    n = params.get("n_peaks", 1)
    height = params.get("height", True)
    width = params.get("width", True)
    keys = []
    for i in range(1, n + 1):
        keys.append(f"peak_freq_{i}")
        if height:
            keys.append(f"peak_height_{i}")
        if width:
            keys.append(f"peak_width_{i}")
    return tuple(keys)


def _peaks_compute(ctx, params):
    n = params.get("n_peaks", 1)
    height = params.get("height", True)
    width = params.get("width", True)
    results = _freq.peaks(
        _ctx_spectrum(ctx, params), n_peaks=n, want_height=height, want_width=width
    )
    out = {}
    for i, r in enumerate(results, start=1):
        out[f"peak_freq_{i}"] = r.freq
        if height:
            out[f"peak_height_{i}"] = r.height
        if width:
            out[f"peak_width_{i}"] = r.width
    return out


_register("peaks", _validate_peaks, _peaks_keys, _peaks_compute)


def _band_feature(name: str, stat: str):
    def validate(params):
        out = _validate_spectrum_params(name, params)
        rest = {k: v for k, v in params.items() if k not in out}
        _reject_unknown(name, rest, ("low", "high"))
        if "low" not in rest or "high" not in rest:
            raise ValueError(f"feature {name!r} requires parameters 'low' and 'high'")
        low = _as_number("low", rest["low"], lo=0.0)
        high = _as_number("high", rest["high"])
        if not (low < high):
            raise ValueError(
                f"feature {name!r}: band edges must satisfy low < high, got [{low}, {high}]"
            )
        out["low"] = low
        out["high"] = high
        return out

    def keys(params) -> tuple:
        return (_freq.format_band_key(stat, params["low"], params["high"]),)

    def compute(ctx, params):
        key = _freq.format_band_key(stat, params["low"], params["high"])
        values = _freq.band_features(_ctx_spectrum(ctx, params), params["low"], params["high"])
        return {key: values[key]}

    _register(name, validate, keys, compute)


_band_feature("band_power", "power")
_band_feature("band_std", "std")
_band_feature("band_mnf", "mnf")
_band_feature("band_mdf", "mdf")


def _validate_swt(params):
    _reject_unknown(
        "swt_features", params, ("wavelet", "levels", "selected", "psr_ratio")
    )
    out = {}
    wavelet = params.get("wavelet", "db4")
    if wavelet not in _wavelet.WAVELETS:
        raise ValueError(
            f"parameter 'wavelet' must be one of {_wavelet.WAVELETS}, got {wavelet!r}"
        )
    out["wavelet"] = wavelet
    out["levels"] = _as_int("levels", params.get("levels", 4), lo=1, hi=12)
    selected = params.get("selected", list(_wavelet.SWT_SUBFEATURES))
    if isinstance(selected, str):
        selected = [selected]
    if not selected:
        raise ValueError("parameter 'selected' must name at least one sub-feature")
    for s in selected:
        if s not in _wavelet.SWT_SUBFEATURES:
            raise ValueError(
                f"unknown swt sub-feature {s!r}; expected one of {_wavelet.SWT_SUBFEATURES}"
            )
    out["selected"] = tuple(selected)
    if "psr_ratio" in params:
        out["psr_ratio"] = _as_number("psr_ratio", params["psr_ratio"], lo=0.0, hi=1.0, lo_open=True)
    return out


def _swt_keys(params) -> tuple:
    levels = params.get("levels", 4)
    selected = params.get("selected", _wavelet.SWT_SUBFEATURES)
    keys = []
    for k in range(1, levels + 1):
        keys.extend(f"swt_d{k}_{name}" for name in selected)
    keys.extend(f"swt_a{levels}_{name}" for name in selected)
    return tuple(keys)


def _swt_compute(ctx, params):
    return _wavelet.swt_features(
        ctx.x,
        ctx.fs,
        wavelet=params.get("wavelet", "db4"),
        levels=params.get("levels", 4),
        selected=params.get("selected", _wavelet.SWT_SUBFEATURES),
        psr_ratio=params.get("psr_ratio", 0.01),
    )


_register("swt_features", _validate_swt, _swt_keys, _swt_compute)


# ---------------------------------------------------------------------------
# FeatureSet

@dataclass(frozen=True)
class FeatureStep:
    """One configured feature: a registry name (or user function) plus
    validated parameters and the output keys it will emit."""

    name: str
    params: dict
    keys: tuple
    udf: Callable | None = None


def _probe_signal() -> np.ndarray:
    """Deterministic synthetic signal used to discover UDF output keys."""
    t = np.arange(512) / 128.0
    return (
        np.sin(2 * np.pi * 5.0 * t)
        + 0.5 * np.sin(2 * np.pi * 17.0 * t + 0.7)
        + 0.05 * np.cos(2 * np.pi * 41.0 * t)
    )


def _call_udf(func: Callable, x: np.ndarray, fs: float) -> dict:
    try:
        sig = inspect.signature(func)
        takes_fs = "fs" in sig.parameters
    except (TypeError, ValueError):
        takes_fs = False
    return func(x, fs=fs) if takes_fs else func(x)


class _Adder:
    """Supports both fs.add("mnf", ...) and fs.add.mnf(...)."""

    def __init__(self, owner: "FeatureSet"):
        self._owner = owner

    def __call__(self, name: str, **params) -> "FeatureSet":
        return self._owner._add_builtin(name, params)

    def __getattr__(self, name: str):
        if name.startswith("_"):
            raise AttributeError(name)

        def add(**params):
            return self._owner._add_builtin(name, params)

        return add


class _UdfAdder:
    def __init__(self, owner: "FeatureSet"):
        self._owner = owner

    def add(self, func: Callable, keys=None, name: str | None = None) -> "FeatureSet":
        return self._owner._add_udf(func, keys=keys, name=name)


class FeatureSet:
    """Ordered feature steps for one channel namespace.

    Keys are unique across steps; the full key list is known as soon as the
    set is configured, independent of any data.  Instances are picklable
    (user functions must be module-level for multiprocess runs).
    """

    def __init__(self):
        self._steps: list[FeatureStep] = []

    # adder objects are created on the fly so pickling stays trivial
    @property
    def add(self) -> _Adder:
        return _Adder(self)

    @property
    def udf(self) -> _UdfAdder:
        return _UdfAdder(self)

    @property
    def steps(self) -> tuple[FeatureStep, ...]:
        return tuple(self._steps)

    def keys(self) -> list[str]:
        out: list[str] = []
        for step in self._steps:
            out.extend(step.keys)
        return out

    def _check_collisions(self, new_keys) -> None:
        existing = set(self.keys())
        for k in new_keys:
            if k in existing:
                raise ValueError(f"duplicate feature key {k!r}")
        if len(set(new_keys)) != len(new_keys):
            raise ValueError(f"feature step emits duplicate keys: {new_keys}")

    def _add_builtin(self, name: str, params: dict) -> "FeatureSet":
        if name not in REGISTRY:
            close = difflib.get_close_matches(name, REGISTRY, n=1)
            hint = f" (nearest match: {close[0]!r})" if close else ""
            raise ValueError(f"unknown feature: {name}{hint}")
        spec = REGISTRY[name]
        normalized = spec.validate(dict(params))
        keys = tuple(spec.keys(normalized))
        self._check_collisions(keys)
        self._steps.append(FeatureStep(name=name, params=normalized, keys=keys))
        return self

    def _add_udf(self, func: Callable, keys=None, name: str | None = None) -> "FeatureSet":
        if not callable(func):
            raise ValueError("udf must be callable")
        display = name or getattr(func, "__name__", "udf")
        if keys is None:
            try:
                probed = _call_udf(func, _probe_signal(), 128.0)
            except Exception as exc:
                raise ValueError(
                    f"cannot determine output keys for udf {display!r}: probing raised "
                    f"{exc!r}; pass keys=[...] explicitly"
                ) from exc
            if not isinstance(probed, dict):
                raise ValueError(
                    f"udf {display!r} must return a dict of feature values, got "
                    f"{type(probed).__name__}"
                )
            keys = list(probed.keys())
        keys = tuple(str(k) for k in keys)
        self._check_collisions(keys)
        self._steps.append(
            FeatureStep(name=f"udf:{display}", params={}, keys=keys, udf=func)
        )
        return self

    def compute(
        self,
        x,
        fs: float,
        errors: list | None = None,
        label: str = "",
    ) -> dict[str, float]:
        """Evaluate every step; failed steps yield NaN for their keys and an
        entry in ``errors`` (a list of dicts), never an exception."""
        ctx = SignalContext(x, fs)
        out: dict[str, float] = {}
        for step in self._steps:
            try:
                if step.udf is not None:
                    values = _call_udf(step.udf, ctx.x, ctx.fs)
                    if not isinstance(values, dict):
                        raise ValueError(
                            f"udf returned {type(values).__name__}, expected dict"
                        )
                else:
                    values = REGISTRY[step.name].compute(ctx, step.params)
            except Exception as exc:
                for k in step.keys:
                    out[k] = float("nan")
                if errors is not None:
                    errors.append(
                        {"where": label, "step": step.name, "message": str(exc)}
                    )
                continue
            for k in step.keys:
                v = values.get(k, float("nan"))
                out[k] = float(v)
        return out

    def __len__(self) -> int:
        return len(self._steps)

    def __repr__(self) -> str:
        names = ", ".join(s.name for s in self._steps)
        return f"FeatureSet[{names}]"
