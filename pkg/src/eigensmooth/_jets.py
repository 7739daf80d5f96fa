"""Truncated Taylor-jet arithmetic.

A jet of order m at a batch of points is an ndarray of shape (m+1, n)
holding Taylor coefficients c_k = f^(k)(x)/k!.  Composing jets instead of
finite-differencing keeps high-order symbol derivatives free of subtraction
noise.
"""

from __future__ import annotations

import math

import numpy as np


def jet_const(value, order: int, n: int) -> np.ndarray:
    out = np.zeros((order + 1, n))
    out[0] = value
    return out


def jet_var(x: np.ndarray, order: int) -> np.ndarray:
    """Jet of the identity function at points x."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((order + 1, x.size))
    out[0] = x
    if order >= 1:
        out[1] = 1.0
    return out


def jet_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a + b


def jet_scale(a: np.ndarray, c: float) -> np.ndarray:
    return a * c


def jet_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = a.shape[0]
    out = np.zeros_like(a)
    for k in range(m):
        for i in range(k + 1):
            out[k] += a[i] * b[k - i]
    return out


def jet_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Series division a/b; b[0] must be nonzero everywhere."""
    m = a.shape[0]
    out = np.zeros_like(a)
    out[0] = a[0] / b[0]
    for k in range(1, m):
        acc = a[k].copy()
        for i in range(1, k + 1):
            acc -= b[i] * out[k - i]
        out[k] = acc / b[0]
    return out


def jet_exp(a: np.ndarray) -> np.ndarray:
    """Jet of exp(f) given the jet of f."""
    m = a.shape[0]
    out = np.zeros_like(a)
    out[0] = np.exp(a[0])
    for k in range(1, m):
        acc = np.zeros_like(out[0])
        for i in range(1, k + 1):
            acc += i * a[i] * out[k - i]
        out[k] = acc / k
    return out


def jet_recip_power(x: np.ndarray, p: int, order: int) -> np.ndarray:
    """Jet of x^(-p) for p >= 1 at strictly positive points."""
    x = np.asarray(x, dtype=float)
    out = np.zeros((order + 1, x.size))
    term = x ** (-float(p))
    out[0] = term
    coeff = 1.0
    for k in range(1, order + 1):
        # d^k/dx^k x^{-p} = (-1)^k p(p+1)...(p+k-1) x^{-p-k}
        coeff *= -(p + k - 1)
        out[k] = coeff * x ** (-float(p + k)) / math.factorial(k)
    return out


def jet_affine_compose(inner_jet_of_outer: np.ndarray, slope: float) -> np.ndarray:
    """Given the jet of F at u(x) where u is affine with du/dx = slope,
    return the jet of F(u(x)) in the x variable."""
    m = inner_jet_of_outer.shape[0]
    out = inner_jet_of_outer.copy()
    factor = 1.0
    for k in range(1, m):
        factor *= slope
        out[k] = out[k] * factor
    return out


def jet_to_derivatives(a: np.ndarray) -> np.ndarray:
    """Convert Taylor coefficients to plain derivative values (multiply by k!)."""
    out = a.copy()
    fact = 1.0
    for k in range(1, a.shape[0]):
        fact *= k
        out[k] = out[k] * fact
    return out


def derivatives_to_jet(d: np.ndarray) -> np.ndarray:
    out = d.copy()
    fact = 1.0
    for k in range(1, d.shape[0]):
        fact *= k
        out[k] = out[k] / fact
    return out
