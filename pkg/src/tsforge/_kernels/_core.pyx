# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled hot kernels.

Each function mirrors the pure-numpy fallback operation-for-operation so the
two backends produce bit-identical output (exact integer counts; identical
floating-point evaluation order).
"""

import numpy as np

__all__ = ["sampen_pair_counts", "ordinal_codes", "iir_apply", "atrous_convolve"]


def sampen_pair_counts(x, int m, double r):
    """Unordered template-pair match counts (b at length m, a at length m+1)."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t nt = n - m
    if nt < 2:
        return 0, 0
    cdef long long b = 0
    cdef long long a = 0
    cdef Py_ssize_t i, j, k
    cdef double d, dk, dlast
    for i in range(nt - 1):
        for j in range(i + 1, nt):
            d = 0.0
            for k in range(m):
                dk = xv[i + k] - xv[j + k]
                if dk < 0.0:
                    dk = -dk
                if dk > d:
                    d = dk
            if d <= r:
                b += 1
                dlast = xv[i + m] - xv[j + m]
                if dlast < 0.0:
                    dlast = -dlast
                if dlast > d:
                    d = dlast
                if d <= r:
                    a += 1
    return int(b), int(a)


def ordinal_codes(x, int order, int delay):
    """Stable-rank pattern code of every embedding window, base ``order``."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t n_win = n - (order - 1) * delay
    if n_win < 1:
        return np.empty(0, dtype=np.int64)
    out = np.empty(n_win, dtype=np.int64)
    cdef long long[::1] ov = out
    cdef Py_ssize_t i, p, q
    cdef long long code, rank, weight
    cdef double wp
    for i in range(n_win):
        code = 0
        weight = 1
        for p in range(order):
            wp = xv[i + p * delay]
            rank = 0
            for q in range(order):
                if xv[i + q * delay] < wp:
                    rank += 1
                elif q < p and xv[i + q * delay] == wp:
                    rank += 1
            code += rank * weight
            weight *= order
        ov[i] = code
    return out


def iir_apply(b, a, x, zi=None):
    """Direct form II transposed IIR recursion.  Assumes a[0] == 1."""
    b = np.asarray(b, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    cdef Py_ssize_t n_coef = max(b.size, a.size)
    bb = np.zeros(n_coef)
    bb[: b.size] = b
    aa = np.zeros(n_coef)
    aa[: a.size] = a
    cdef double[::1] bv = bb
    cdef double[::1] av = aa
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t nz = n_coef - 1
    cdef Py_ssize_t n = xv.shape[0]
    y = np.empty(n, dtype=np.float64)
    cdef double[::1] yv = y
    cdef Py_ssize_t i, k
    cdef double xn, yn
    if nz == 0:
        for i in range(n):
            yv[i] = bv[0] * xv[i]
        return y
    if zi is None:
        z = np.zeros(nz)
    else:
        z = np.asarray(zi, dtype=np.float64).copy()
        if z.size != nz:
            raise ValueError(f"zi must have length {nz}, got {z.size}")
    cdef double[::1] zv = z
    for i in range(n):
        xn = xv[i]
        yn = bv[0] * xn + zv[0]
        for k in range(nz - 1):
            zv[k] = bv[k + 1] * xn + zv[k + 1] - av[k + 1] * yn
        zv[nz - 1] = bv[nz] * xn - av[nz] * yn
        yv[i] = yn
    return y


def atrous_convolve(a, c, int dilation):
    """Circular convolution with a filter upsampled by ``dilation``."""
    cdef double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t n = av.shape[0]
    cdef Py_ssize_t nc = cv.shape[0]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t t, i, shift, idx
    cdef double ct
    for t in range(nc):
        ct = cv[t]
        shift = (t * dilation) % n
        for i in range(n):
            idx = i - shift
            if idx < 0:
                idx += n
            ov[i] = ov[i] + ct * av[idx]
    return out
