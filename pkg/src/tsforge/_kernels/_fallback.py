"""Pure-numpy implementations of the hot kernels.

These define the reference semantics; the compiled extension in ``_core.pyx``
mirrors them operation-for-operation so both backends return bit-identical
results.  Kept dependency-free beyond numpy so the package works on any
platform without a C compiler.
"""

from __future__ import annotations

import numpy as np

__all__ = ["sampen_pair_counts", "ordinal_codes", "iir_apply", "atrous_convolve"]


def sampen_pair_counts(x: np.ndarray, m: int, r: float) -> tuple[int, int]:
    """Unordered template-pair match counts for sample entropy.

    Templates of length ``m`` and ``m+1`` both range over start indices
    ``0 .. n-m-1`` (the same ``n-m`` templates), so a constant input yields
    equal counts.  A pair (i, j), i < j, matches when the Chebyshev distance
    between the two templates is ``<= r``.

    Returns (b, a): matches at length m and at length m+1.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    nt = n - m
    if nt < 2:
        return 0, 0
    tm = np.lib.stride_tricks.sliding_window_view(x, m)[:nt]
    tm1 = np.lib.stride_tricks.sliding_window_view(x, m + 1)
    b = 0
    a = 0
    for i in range(nt - 1):
        d = np.max(np.abs(tm[i + 1 :] - tm[i]), axis=1)
        b += int(np.count_nonzero(d <= r))
        d1 = np.max(np.abs(tm1[i + 1 :] - tm1[i]), axis=1)
        a += int(np.count_nonzero(d1 <= r))
    return b, a


def ordinal_codes(x: np.ndarray, order: int, delay: int) -> np.ndarray:
    """Integer pattern code of every embedding window.

    Window i is ``x[i], x[i+delay], ..., x[i+(order-1)*delay]``.  Each element
    gets the rank it would receive from a stable ascending sort (ties keep
    first-appearance order); the rank vector is packed into one integer in
    base ``order``.
    """
    x = np.asarray(x, dtype=np.float64)
    n_win = x.size - (order - 1) * delay
    if n_win < 1:
        return np.empty(0, dtype=np.int64)
    idx = np.arange(n_win)[:, None] + np.arange(order)[None, :] * delay
    win = x[idx]
    sort_idx = np.argsort(win, axis=1, kind="stable")
    ranks = np.empty_like(sort_idx)
    np.put_along_axis(ranks, sort_idx, np.arange(order)[None, :], axis=1)
    weights = order ** np.arange(order, dtype=np.int64)
    return ranks.astype(np.int64) @ weights


def iir_apply(
    b: np.ndarray, a: np.ndarray, x: np.ndarray, zi: np.ndarray | None = None
) -> np.ndarray:
    """Direct form II transposed IIR recursion.  Assumes a[0] == 1."""
    b = np.asarray(b, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    n_coef = max(b.size, a.size)
    bb = np.zeros(n_coef)
    bb[: b.size] = b
    aa = np.zeros(n_coef)
    aa[: a.size] = a
    nz = n_coef - 1
    y = np.empty_like(x)
    if nz == 0:
        np.multiply(x, bb[0], out=y)
        return y
    z = np.zeros(nz) if zi is None else np.asarray(zi, dtype=np.float64).copy()
    if z.size != nz:
        raise ValueError(f"zi must have length {nz}, got {z.size}")
    for n in range(x.size):
        xn = x[n]
        yn = bb[0] * xn + z[0]
        for k in range(nz - 1):
            z[k] = bb[k + 1] * xn + z[k + 1] - aa[k + 1] * yn
        z[nz - 1] = bb[nz] * xn - aa[nz] * yn
        y[n] = yn
    return y


def atrous_convolve(a: np.ndarray, c: np.ndarray, dilation: int) -> np.ndarray:
    """Circular convolution with a filter upsampled by ``dilation``.

    out[n] = sum_t c[t] * a[(n - t*dilation) mod len(a)]
    """
    a = np.asarray(a, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    out = np.zeros_like(a)
    for t in range(c.size):
        out += c[t] * np.roll(a, t * dilation)
    return out
