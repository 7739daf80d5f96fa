"""Hot synthesis kernels: numba-jitted with a pure-numpy fallback.

Set EIGENSMOOTH_NUMBA=0 to force the numpy path.  Both paths use a fixed
summation order (Kahan in the jitted loops, mode-major chunks in numpy) so
results are deterministic and agree within 1e-13 relative.
"""

from __future__ import annotations

import os

import numpy as np

_SQRT_PI = np.sqrt(np.pi)
_SQRT_2PI = np.sqrt(2.0 * np.pi)

_CHUNK = 512  # modes per numpy broadcast block

KIND_CONST = 0
KIND_COS = 1
KIND_SIN = 2


def _circle_basis_block(freq, kind, theta):
    """Basis values for a block of circle modes at the given angles."""
    phase = np.outer(freq, theta)
    vals = np.where(
        kind[:, None] == KIND_COS,
        np.cos(phase) / _SQRT_PI,
        np.sin(phase) / _SQRT_PI,
    )
    vals[kind == KIND_CONST] = 1.0 / _SQRT_2PI
    return vals


def circle_synth_numpy(freq, kind, coeffs, theta):
    out = np.zeros(theta.shape, dtype=complex)
    for lo in range(0, freq.size, _CHUNK):
        hi = min(lo + _CHUNK, freq.size)
        basis = _circle_basis_block(freq[lo:hi], kind[lo:hi], theta)
        out += coeffs[lo:hi] @ basis
    return out


def torus_synth_numpy(k1, k2, kind, coeffs, x1, x2):
    norm = 1.0 / (np.pi * np.sqrt(2.0))
    out = np.zeros(x1.shape, dtype=complex)
    for lo in range(0, k1.size, _CHUNK):
        hi = min(lo + _CHUNK, k1.size)
        phase = np.outer(k1[lo:hi], x1) + np.outer(k2[lo:hi], x2)
        vals = np.where(
            kind[lo:hi, None] == KIND_COS, np.cos(phase) * norm, np.sin(phase) * norm
        )
        vals[kind[lo:hi] == KIND_CONST] = 1.0 / (2.0 * np.pi)
        out += coeffs[lo:hi] @ vals
    return out


def zonal_synth_numpy(coeffs, xcos):
    """Sum a_l * sqrt((2l+1)/4pi) * P_l(x) by upward Legendre recurrence."""
    lmax = coeffs.size - 1
    p_prev = np.ones_like(xcos)
    p_cur = xcos.copy()
    out = coeffs[0] * np.sqrt(1.0 / (4.0 * np.pi)) * p_prev
    if lmax >= 1:
        out = out + coeffs[1] * np.sqrt(3.0 / (4.0 * np.pi)) * p_cur
    for l in range(1, lmax):
        p_next = ((2 * l + 1) * xcos * p_cur - l * p_prev) / (l + 1)
        out = out + coeffs[l + 1] * np.sqrt((2 * l + 3) / (4.0 * np.pi)) * p_next
        p_prev, p_cur = p_cur, p_next
    return out


def legendre_table_numpy(lmax, xcos):
    """P_0..P_lmax at the given points, shape (lmax+1, n)."""
    out = np.empty((lmax + 1, xcos.size))
    out[0] = 1.0
    if lmax >= 1:
        out[1] = xcos
    for l in range(1, lmax):
        out[l + 1] = ((2 * l + 1) * xcos * out[l] - l * out[l - 1]) / (l + 1)
    return out


def _circle_synth_loop(freq, kind, re, im, theta, out_re, out_im):
    for j in range(theta.size):
        acc_re = 0.0
        c_re = 0.0
        acc_im = 0.0
        c_im = 0.0
        t = theta[j]
        for n in range(freq.size):
            if kind[n] == 0:
                b = 0.3989422804014327  # 1/sqrt(2 pi)
            elif kind[n] == 1:
                b = np.cos(freq[n] * t) * 0.5641895835477563  # 1/sqrt(pi)
            else:
                b = np.sin(freq[n] * t) * 0.5641895835477563
            y = re[n] * b - c_re
            s = acc_re + y
            c_re = (s - acc_re) - y
            acc_re = s
            y = im[n] * b - c_im
            s = acc_im + y
            c_im = (s - acc_im) - y
            acc_im = s
        out_re[j] = acc_re
        out_im[j] = acc_im


def _torus_synth_loop(k1, k2, kind, re, im, x1, x2, out_re, out_im):
    norm = 0.22507907903927651  # 1/(pi sqrt(2))
    const = 0.15915494309189535  # 1/(2 pi)
    for j in range(x1.size):
        acc_re = 0.0
        c_re = 0.0
        acc_im = 0.0
        c_im = 0.0
        for n in range(k1.size):
            ph = k1[n] * x1[j] + k2[n] * x2[j]
            if kind[n] == 0:
                b = const
            elif kind[n] == 1:
                b = np.cos(ph) * norm
            else:
                b = np.sin(ph) * norm
            y = re[n] * b - c_re
            s = acc_re + y
            c_re = (s - acc_re) - y
            acc_re = s
            y = im[n] * b - c_im
            s = acc_im + y
            c_im = (s - acc_im) - y
            acc_im = s
        out_re[j] = acc_re
        out_im[j] = acc_im


def _zonal_synth_loop(re, im, xcos, out_re, out_im):
    four_pi = 4.0 * np.pi
    lmax = re.size - 1
    for j in range(xcos.size):
        x = xcos[j]
        p_prev = 1.0
        p_cur = x
        acc_re = re[0] * np.sqrt(1.0 / four_pi)
        acc_im = im[0] * np.sqrt(1.0 / four_pi)
        if lmax >= 1:
            nrm = np.sqrt(3.0 / four_pi)
            acc_re += re[1] * nrm * p_cur
            acc_im += im[1] * nrm * p_cur
        for l in range(1, lmax):
            p_next = ((2 * l + 1) * x * p_cur - l * p_prev) / (l + 1)
            nrm = np.sqrt((2 * l + 3) / four_pi)
            acc_re += re[l + 1] * nrm * p_next
            acc_im += im[l + 1] * nrm * p_next
            p_prev, p_cur = p_cur, p_next
        out_re[j] = acc_re
        out_im[j] = acc_im


_WANT_NUMBA = os.environ.get("EIGENSMOOTH_NUMBA", "1") != "0"

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
    _circle_synth_jit = njit(cache=True)(_circle_synth_loop)
    _torus_synth_jit = njit(cache=True)(_torus_synth_loop)
    _zonal_synth_jit = njit(cache=True)(_zonal_synth_loop)
except ImportError:
    HAVE_NUMBA = False
    _circle_synth_jit = None
    _torus_synth_jit = None
    _zonal_synth_jit = None


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def _run_loop(loop, coeffs, npoints, args):
    re = np.ascontiguousarray(coeffs.real)
    im = np.ascontiguousarray(coeffs.imag)
    out_re = np.empty(npoints)
    out_im = np.empty(npoints)
    loop(*args[0], re, im, *args[1], out_re, out_im)
    return out_re + 1j * out_im


def circle_synth(freq, kind, coeffs, theta):
    theta = np.ascontiguousarray(theta, dtype=float)
    if _circle_synth_jit is not None:
        return _run_loop(
            _circle_synth_jit,
            coeffs,
            theta.size,
            ((np.ascontiguousarray(freq, dtype=np.int64), np.ascontiguousarray(kind, dtype=np.int64)), (theta,)),
        )
    return circle_synth_numpy(freq, kind, coeffs, theta)


def torus_synth(k1, k2, kind, coeffs, x1, x2):
    x1 = np.ascontiguousarray(x1, dtype=float)
    x2 = np.ascontiguousarray(x2, dtype=float)
    if _torus_synth_jit is not None:
        return _run_loop(
            _torus_synth_jit,
            coeffs,
            x1.size,
            (
                (
                    np.ascontiguousarray(k1, dtype=np.int64),
                    np.ascontiguousarray(k2, dtype=np.int64),
                    np.ascontiguousarray(kind, dtype=np.int64),
                ),
                (x1, x2),
            ),
        )
    return torus_synth_numpy(k1, k2, coeffs=coeffs, kind=kind, x1=x1, x2=x2)


def zonal_synth(coeffs, xcos):
    xcos = np.ascontiguousarray(xcos, dtype=float)
    if _zonal_synth_jit is not None:
        return _run_loop(_zonal_synth_jit, coeffs, xcos.size, ((), (xcos,)))
    return zonal_synth_numpy(coeffs, xcos)
