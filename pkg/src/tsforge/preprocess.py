"""Signal cleaning: outlier masking, Butterworth filtering, gap interpolation.

Outlier removal masks offending samples with NaN rather than deleting them,
preserving the uniform time base; ``interpolate`` is the sanctioned repair
before any spectral operation.  Filters are designed natively: analog
Butterworth prototype (maximally flat, -3.01 dB at the cutoff), frequency
pre-warping, bilinear transform.  ``FilterChain`` composes steps in insertion
order and is picklable for use across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import as_signal

__all__ = [
    "IIRCoefficients",
    "FilterStep",
    "FilterChain",
    "rm_outlier",
    "rm_outliers_quantile",
    "butter_design",
    "butter_apply",
    "interpolate",
    "FILTER_STEPS",
]


def rm_outlier(x, low: float, high: float) -> np.ndarray:
    """Mask samples outside [low, high] with NaN; in-range samples unchanged."""
    if not (low < high):
        raise ValueError(f"thresholds must satisfy low < high, got low={low}, high={high}")
    x = as_signal(x)
    out = x.copy()
    with np.errstate(invalid="ignore"):
        out[(x < low) | (x > high)] = np.nan
    return out


def rm_outliers_quantile(x, low_q: float, high_q: float) -> np.ndarray:
    """Mask samples strictly outside the [low_q, high_q] quantile range.

    Quantiles use linear interpolation between order statistics and ignore
    samples that are already missing.
    """
    if not (0.0 <= low_q < high_q <= 1.0):
        raise ValueError(
            f"quantiles must satisfy 0 <= low_q < high_q <= 1, got {low_q}, {high_q}"
        )
    x = as_signal(x)
    finite = x[~np.isnan(x)]
    if finite.size == 0:
        return x.copy()
    q_low, q_high = np.quantile(finite, [low_q, high_q])
    out = x.copy()
    with np.errstate(invalid="ignore"):
        out[(x < q_low) | (x > q_high)] = np.nan
    return out


@dataclass
class IIRCoefficients:
    """Transfer-function coefficients with a[0] == 1 and all poles strictly
    inside the unit circle."""

    b: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=np.float64)
        self.a = np.asarray(self.a, dtype=np.float64)
        if self.a.ndim != 1 or self.b.ndim != 1 or self.a.size < 1:
            raise ValueError("coefficient arrays must be 1-D and non-empty")
        if self.a[0] == 0:
            raise ValueError("a[0] must be nonzero")
        if self.a[0] != 1.0:
            self.b = self.b / self.a[0]
            self.a = self.a / self.a[0]
        if self.a.size > 1:
            poles = np.roots(self.a)
            if poles.size and np.max(np.abs(poles)) >= 1.0:
                raise ValueError("unstable filter: poles on or outside the unit circle")


_BTYPES = ("lowpass", "highpass", "bandpass")


def butter_design(
    order: int, cutoff, btype: str = "lowpass", fs: float = 2.0
) -> IIRCoefficients:
    """Digital Butterworth design via the bilinear transform.

    The analog prototype is maximally flat with -3.01 dB gain at the cutoff;
    cutoffs are pre-warped so the digital response hits the same frequencies.
    ``cutoff`` is one edge in Hz for lowpass/highpass, a (low, high) pair for
    bandpass.  Coefficient lengths: order+1 (lowpass/highpass), 2*order+1
    (bandpass).
    """
    order = int(order)
    if not (1 <= order <= 10):
        raise ValueError(f"order must be in [1, 10], got {order}")
    if btype not in _BTYPES:
        raise ValueError(f"btype must be one of {_BTYPES}, got {btype!r}")
    edges = np.atleast_1d(np.asarray(cutoff, dtype=np.float64))
    nyquist = fs / 2.0
    for e in edges:
        if not (0.0 < e < nyquist):
            raise ValueError(
                f"cutoff {e} Hz outside the open interval (0, {nyquist}) Hz for fs={fs}"
            )
    if btype == "bandpass":
        if edges.size != 2:
            raise ValueError("bandpass requires two cutoff edges (low, high)")
        if not (edges[0] < edges[1]):
            raise ValueError(f"bandpass edges must satisfy low < high, got {edges}")
    elif edges.size != 1:
        raise ValueError(f"{btype} requires exactly one cutoff edge, got {edges.size}")

    # analog prototype: poles on the unit circle in the left half plane
    k = np.arange(1, order + 1)
    theta = np.pi * (2 * k - 1) / (2 * order)
    poles = -np.sin(theta) + 1j * np.cos(theta)
    zeros = np.empty(0, dtype=complex)
    gain = 1.0

    warped = 2.0 * fs * np.tan(np.pi * edges / fs)
    if btype == "lowpass":
        w0 = warped[0]
        poles = poles * w0
        gain *= w0 ** (poles.size - zeros.size)
    elif btype == "highpass":
        w0 = warped[0]
        degree = poles.size - zeros.size
        gain *= np.real(np.prod(-zeros) / np.prod(-poles))
        zeros = np.zeros(degree, dtype=complex)
        poles = w0 / poles
    else:  # bandpass
        w1, w2 = warped
        bw = w2 - w1
        wo = np.sqrt(w1 * w2)
        degree = poles.size - zeros.size
        scaled = poles * (bw / 2.0)
        shift = np.sqrt(scaled**2 - wo**2)
        poles = np.concatenate([scaled + shift, scaled - shift])
        zeros = np.zeros(degree, dtype=complex)
        gain *= bw**degree

    # bilinear transform s = 2*fs*(z-1)/(z+1)
    fs2 = 2.0 * fs
    degree = poles.size - zeros.size
    gain *= np.real(np.prod(fs2 - zeros) / np.prod(fs2 - poles))
    zeros_d = (fs2 + zeros) / (fs2 - zeros)
    poles_d = (fs2 + poles) / (fs2 - poles)
    zeros_d = np.concatenate([zeros_d, -np.ones(degree)])

    b = np.real(gain * np.poly(zeros_d))
    a = np.real(np.poly(poles_d))

    # polynomial expansion rounds enough to miss the passband reference
    # gain by ~1e-12 at high orders; rescale the numerator so the gain at
    # the reference frequency (DC, Nyquist, or band center) is exact
    if btype == "lowpass":
        z_ref = 1.0 + 0.0j
    elif btype == "highpass":
        z_ref = -1.0 + 0.0j
    else:
        z_ref = np.exp(2j * np.arctan(wo / fs2))
    ref_gain = abs(np.polyval(a, z_ref) / np.polyval(b, z_ref))
    b = b * ref_gain
    return IIRCoefficients(b=b, a=a)


def _steady_state_zi(b: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Initial filter state whose step response has no transient (unit input)."""
    n = max(b.size, a.size)
    bb = np.zeros(n)
    bb[: b.size] = b
    aa = np.zeros(n)
    aa[: a.size] = a
    companion = np.zeros((n - 1, n - 1))
    companion[0, :] = -aa[1:]
    if n > 2:
        companion[1:, :-1] = np.eye(n - 2)
    rhs = bb[1:] - aa[1:] * bb[0]
    return np.linalg.solve(np.eye(n - 1) - companion.T, rhs)


def butter_apply(x, coeffs: IIRCoefficients, zero_phase: bool = True) -> np.ndarray:
    """Run the difference equation over the signal.

    ``zero_phase`` applies the filter forward then backward with odd-symmetric
    edge extension and steady-state initial conditions, cancelling phase
    distortion (and squaring the magnitude response).
    """
    x = as_signal(x)
    if np.isnan(x).any():
        raise ValueError("input contains missing values; interpolate first")
    b, a = coeffs.b, coeffs.a
    if not zero_phase:
        return np.asarray(_kernels.iir_apply(b, a, x))
    pad = 3 * (max(b.size, a.size) - 1)
    if x.size <= pad:
        raise ValueError(
            f"input too short for zero-phase filtering: need more than {pad} samples, got {x.size}"
        )
    left = 2.0 * x[0] - x[pad:0:-1]
    right = 2.0 * x[-1] - x[-2 : -pad - 2 : -1]
    ext = np.concatenate([left, x, right])
    zi = _steady_state_zi(b, a)
    y = np.asarray(_kernels.iir_apply(b, a, ext, zi * ext[0]))
    y = y[::-1]
    y = np.asarray(_kernels.iir_apply(b, a, y, zi * y[0]))
    y = y[::-1]
    return y[pad : pad + x.size].copy()


def _natural_cubic_eval(t: np.ndarray, y: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Natural cubic spline through (t, y), evaluated at points u inside
    [t[0], t[-1]].  Second derivatives at both ends are zero."""
    n = t.size
    h = np.diff(t)
    # tridiagonal system for interior second derivatives (Thomas algorithm)
    m = np.zeros(n)
    if n > 2:
        diag = 2.0 * (h[:-1] + h[1:])
        rhs = 6.0 * (np.diff(y[1:]) / h[1:] - np.diff(y[:-1]) / h[:-1])
        lower = h[:-1].copy()
        upper = h[1:].copy()
        cp = np.zeros(n - 2)
        dp = np.zeros(n - 2)
        cp[0] = upper[0] / diag[0]
        dp[0] = rhs[0] / diag[0]
        for i in range(1, n - 2):
            denom = diag[i] - lower[i] * cp[i - 1]
            cp[i] = upper[i] / denom
            dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / denom
        m[n - 2] = dp[-1]
        for i in range(n - 4, -1, -1):
            m[i + 1] = dp[i] - cp[i] * m[i + 2]
    idx = np.clip(np.searchsorted(t, u, side="right") - 1, 0, n - 2)
    hi = h[idx]
    tl = t[idx]
    tr = t[idx + 1]
    ml = m[idx]
    mr = m[idx + 1]
    yl = y[idx]
    yr = y[idx + 1]
    return (
        ml * (tr - u) ** 3 / (6.0 * hi)
        + mr * (u - tl) ** 3 / (6.0 * hi)
        + (yl / hi - ml * hi / 6.0) * (tr - u)
        + (yr / hi - mr * hi / 6.0) * (u - tl)
    )


_INTERP_KINDS = ("linear", "cubic")


def interpolate(x, kind: str = "linear") -> np.ndarray:
    """Fill NaN gaps through the non-missing samples.

    Interior gaps use the chosen interpolant (natural cubic spline for
    ``cubic``); leading and trailing gaps take the nearest edge value.
    Non-missing samples pass through bit-identical.  Requires at least 2
    anchors (4 for cubic).
    """
    if kind not in _INTERP_KINDS:
        raise ValueError(f"kind must be one of {_INTERP_KINDS}, got {kind!r}")
    x = as_signal(x)
    mask = np.isnan(x)
    if not mask.any():
        return x.copy()
    anchors = np.flatnonzero(~mask)
    min_anchors = 4 if kind == "cubic" else 2
    if anchors.size < min_anchors:
        raise ValueError(
            f"{kind} interpolation needs at least {min_anchors} non-missing samples, "
            f"got {anchors.size}"
        )
    out = x.copy()
    missing = np.flatnonzero(mask)
    t = anchors.astype(np.float64)
    vals = x[anchors]
    if kind == "linear":
        out[missing] = np.interp(missing.astype(np.float64), t, vals)
        return out
    lead = missing < anchors[0]
    trail = missing > anchors[-1]
    interior = ~lead & ~trail
    out[missing[lead]] = vals[0]
    out[missing[trail]] = vals[-1]
    if interior.any():
        u = missing[interior].astype(np.float64)
        out[missing[interior]] = _natural_cubic_eval(t, vals, u)
    return out


@dataclass(frozen=True)
class FilterStep:
    kind: str
    params: dict


def _apply_rm_outlier(x, fs, low, high):
    return rm_outlier(x, low, high)


def _apply_rm_outliers_quantile(x, fs, low_q, high_q):
    return rm_outliers_quantile(x, low_q, high_q)


def _apply_butter(x, fs, cutoff, btype="lowpass", order=5, zero_phase=True):
    coeffs = butter_design(order, cutoff, btype, fs)
    return butter_apply(x, coeffs, zero_phase=zero_phase)


def _apply_interpolate(x, fs, kind="linear"):
    return interpolate(x, kind=kind)


# step kind -> (applier, required params, optional params)
FILTER_STEPS = {
    "rm_outlier": (_apply_rm_outlier, ("low", "high"), ()),
    "rm_outliers_quantile": (_apply_rm_outliers_quantile, ("low_q", "high_q"), ()),
    "butter_filter": (_apply_butter, ("cutoff",), ("btype", "order", "zero_phase")),
    "interpolate": (_apply_interpolate, (), ("kind",)),
}


class FilterChain:
    """Ordered, picklable sequence of cleaning steps.

    ``add`` validates the step name and parameter names immediately;
    value-domain errors that need the sampling rate (cutoff vs. Nyquist)
    surface at ``apply`` time.  The empty chain is the identity.
    """

    def __init__(self):
        self._steps: list[FilterStep] = []

    @property
    def steps(self) -> tuple[FilterStep, ...]:
        return tuple(self._steps)

    # first parameter is positional-only so steps may use a `kind` parameter
    # of their own (interpolate does)
    def add(self, step_name: str, /, **params) -> "FilterChain":
        if step_name not in FILTER_STEPS:
            raise ValueError(
                f"unknown filter step {step_name!r}; expected one of {sorted(FILTER_STEPS)}"
            )
        _, required, optional = FILTER_STEPS[step_name]
        allowed = set(required) | set(optional)
        unknown = set(params) - allowed
        if unknown:
            raise ValueError(
                f"unknown parameter(s) {sorted(unknown)} for filter step {step_name!r}; "
                f"allowed: {sorted(allowed)}"
            )
        missing = set(required) - set(params)
        if missing:
            raise ValueError(
                f"filter step {step_name!r} missing required parameter(s) {sorted(missing)}"
            )
        self._steps.append(FilterStep(step_name, dict(params)))
        return self

    def apply(self, x, fs: float) -> np.ndarray:
        x = as_signal(x)
        out = x.copy()
        for step in self._steps:
            applier = FILTER_STEPS[step.kind][0]
            out = applier(out, fs, **step.params)
        return out

    def __len__(self) -> int:
        return len(self._steps)

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{s.kind}({', '.join(f'{k}={v!r}' for k, v in s.params.items())})"
            for s in self._steps
        )
        return f"FilterChain[{inner}]"
