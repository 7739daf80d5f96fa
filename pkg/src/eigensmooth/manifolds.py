"""Closed model manifolds presented by their Laplace spectra.

Each manifold provides a deterministic coefficient-mode ordering (eigenvalue
ascending, ties broken by frequency vector lexicographically with cosine
before sine), exact-for-bandlimited quadrature, eigenfunction evaluation and
the spectral counting function.

Supported models: the unit circle (circumference 2*pi), the flat square
torus (side 2*pi) and the unit sphere restricted to its zonal subspace.
On the sphere the coefficient basis indexes one zonal mode per degree l
while spectral counting uses the full 2l+1 multiplicity.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from functools import lru_cache

import numpy as np

from . import _kernels
from .exceptions import ConfigError, UnsupportedSeminormError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _max_int_with_square_below(lam: float) -> int:
    """Largest n >= 0 with n*n < lam, or -1 if none."""
    if lam <= 0.0:
        return -1
    n = int(math.sqrt(lam))
    while n * n >= lam:
        n -= 1
    while (n + 1) * (n + 1) < lam:
        n += 1
    return n


class SpectralManifold(ABC):
    name: str
    dim: int
    volume: float
    isometry_group: tuple[str, ...]

    # -- spectrum ---------------------------------------------------------

    @abstractmethod
    def eigenvalues(self, count: int) -> np.ndarray:
        """First `count` coefficient-mode eigenvalues, ascending."""

    @abstractmethod
    def count_modes_below(self, lam: float) -> int:
        """Number of coefficient modes with eigenvalue strictly below lam."""

    @abstractmethod
    def weyl_count(self, lam: float) -> int:
        """Eigenvalues (with full multiplicity) strictly below lam."""

    def weyl_asymptotic(self, lam: float) -> float:
        m = self.dim
        const = self.volume / ((4.0 * math.pi) ** (m / 2.0) * math.gamma(m / 2.0 + 1.0))
        return const * lam ** (m / 2.0)

    # -- analysis / synthesis ---------------------------------------------

    @abstractmethod
    def quadrature(self, bandwidth: int):
        """(points, weights) integrating products of two bandwidth-limited
        basis functions exactly."""

    @abstractmethod
    def analyze_values(self, values: np.ndarray, count: int, points) -> np.ndarray:
        """Coefficients of a function given its values on `quadrature` points."""

    @abstractmethod
    def synthesize_at(self, coeffs: np.ndarray, points) -> np.ndarray:
        """Evaluate sum_n a_n phi_n at arbitrary points."""

    @abstractmethod
    def max_frequency(self, count: int) -> int:
        """Largest per-axis frequency (or degree) among the first `count` modes."""

    def eval_on(self, f, points) -> np.ndarray:
        if np.ndim(points) == 2:
            return np.asarray(f(points[:, 0], points[:, 1]), dtype=complex)
        return np.asarray(f(np.asarray(points, dtype=float)), dtype=complex)

    def analyze(self, f, count: int, bandwidth: int | None = None) -> np.ndarray:
        points, _ = self.quadrature(bandwidth or self.max_frequency(count))
        return self.analyze_values(self.eval_on(f, points), count, points)

    # -- structure ---------------------------------------------------------

    @abstractmethod
    def differentiate(self, coeffs: np.ndarray, axis: int) -> np.ndarray:
        """Partial derivative along a coordinate axis as a mode-pair map."""

    @abstractmethod
    def apply_isometry(self, coeffs: np.ndarray, iso: dict) -> np.ndarray:
        """Pull back a coefficient vector along an isometry."""

    def default_eps_floor(self) -> float:
        return 1e-6


def _pair_indices(kind: np.ndarray, size: int):
    cos_idx = np.nonzero(kind == _kernels.KIND_COS)[0]
    cos_idx = cos_idx[cos_idx + 1 < size]
    return cos_idx, cos_idx + 1


class CircleManifold(SpectralManifold):
    """Unit circle; eigenvalues n^2, real basis {1/sqrt(2pi), cos/sqrt(pi), sin/sqrt(pi)}."""

    name = "circle"
    dim = 1
    volume = 2.0 * math.pi
    isometry_group = ("identity", "rotation", "reflection")

    @staticmethod
    def mode_info(count: int):
        idx = np.arange(count)
        freq = (idx + 1) // 2
        kind = np.where(
            idx == 0,
            _kernels.KIND_CONST,
            np.where(idx % 2 == 1, _kernels.KIND_COS, _kernels.KIND_SIN),
        )
        return freq.astype(np.int64), kind.astype(np.int64)

    def eigenvalues(self, count):
        freq, _ = self.mode_info(count)
        return (freq * freq).astype(float)

    def max_frequency(self, count):
        return max(int(count) // 2, 1)

    def count_modes_below(self, lam):
        n = _max_int_with_square_below(lam)
        return 0 if n < 0 else 2 * n + 1

    def weyl_count(self, lam):
        return self.count_modes_below(lam)

    def quadrature(self, bandwidth):
        g = 4 * max(int(bandwidth), 1) + 1
        points = np.arange(g) * (2.0 * math.pi / g)
        weights = np.full(g, 2.0 * math.pi / g)
        return points, weights

    def analyze_values(self, values, count, points):
        g = points.size
        b = int(count) // 2
        spec = np.fft.fft(np.asarray(values, dtype=complex)) * (_SQRT_2PI / g)
        coeffs = np.zeros(count, dtype=complex)
        coeffs[0] = spec[0]
        if b >= 1:
            n = np.arange(1, b + 1)
            cp = spec[n]
            cm = spec[(-n) % g]
            a_c = (cp + cm) / math.sqrt(2.0)
            a_s = 1j * (cp - cm) / math.sqrt(2.0)
            cos_slots = 2 * n - 1
            sin_slots = 2 * n
            keep = cos_slots < count
            coeffs[cos_slots[keep]] = a_c[keep]
            keep = sin_slots < count
            coeffs[sin_slots[keep]] = a_s[keep]
        return coeffs

    def to_exponential(self, coeffs: np.ndarray) -> np.ndarray:
        """Coefficients against exp(i n theta)/sqrt(2 pi) for n = -B..B."""
        c = np.asarray(coeffs, dtype=complex)
        if c.size % 2 == 0:
            c = np.append(c, 0.0)
        b = c.size // 2
        out = np.zeros(2 * b + 1, dtype=complex)
        out[b] = c[0]
        if b >= 1:
            a_c = c[1::2]
            a_s = c[2::2]
            out[b + 1:] = (a_c - 1j * a_s) / math.sqrt(2.0)
            out[:b] = ((a_c + 1j * a_s) / math.sqrt(2.0))[::-1]
        return out

    def synthesize_grid(self, coeffs: np.ndarray, grid_size: int) -> np.ndarray:
        """Values on the uniform grid of `grid_size` angles via FFT."""
        full = self.to_exponential(coeffs)
        b = full.size // 2
        if grid_size < 2 * b + 1:
            raise ValueError("grid does not resolve bandwidth")
        spec = np.zeros(grid_size, dtype=complex)
        n = np.arange(-b, b + 1)
        np.add.at(spec, n % grid_size, full)
        return np.fft.ifft(spec) * (grid_size / _SQRT_2PI)

    def grid_points(self, grid_size: int) -> np.ndarray:
        return np.arange(grid_size) * (2.0 * math.pi / grid_size)

    def synthesize_at(self, coeffs, points):
        freq, kind = self.mode_info(len(coeffs))
        return _kernels.circle_synth(
            freq, kind, np.asarray(coeffs, dtype=complex), np.asarray(points, dtype=float)
        )

    def differentiate(self, coeffs, axis=0):
        if axis != 0:
            raise ValueError("circle has a single coordinate")
        freq, kind = self.mode_info(len(coeffs))
        out = np.zeros_like(np.asarray(coeffs))
        ci, si = _pair_indices(kind, len(coeffs))
        out[ci] = freq[ci] * coeffs[si]
        out[si] = -freq[si] * coeffs[ci]
        return out

    def apply_isometry(self, coeffs, iso):
        kind = iso.get("kind")
        coeffs = np.asarray(coeffs)
        if kind == "identity":
            return coeffs.copy()
        freq, mkind = self.mode_info(len(coeffs))
        out = coeffs.copy()
        if kind == "rotation":
            a = float(iso["angle"])
            ci, si = _pair_indices(mkind, len(coeffs))
            c = np.cos(freq[ci] * a)
            s = np.sin(freq[ci] * a)
            out[ci] = coeffs[ci] * c - coeffs[si] * s
            out[si] = coeffs[ci] * s + coeffs[si] * c
            return out
        if kind == "reflection":
            out[mkind == _kernels.KIND_SIN] *= -1.0
            return out
        raise ConfigError(f"unsupported circle isometry: {kind!r}")


class TorusManifold(SpectralManifold):
    """Flat square torus of side 2*pi; eigenvalues |k|^2 over the integer lattice."""

    name = "torus2"
    dim = 2
    volume = 4.0 * math.pi ** 2
    isometry_group = ("identity", "translation", "swap_axes")

    def __init__(self):
        self._table = None  # (lam, k1, k2, kind) over modes, eigenvalue-sorted
        self._table_lam = -1.0

    # Representative frequency vectors take k1 > 0, or k1 == 0 and k2 > 0.
    def _build_table(self, lam_max: float):
        if self._table is not None and self._table_lam >= lam_max:
            return
        r = _max_int_with_square_below(lam_max) + 1
        k1s, k2s = [], []
        for k1 in range(0, r + 1):
            lim = lam_max - k1 * k1
            if lim <= 0:
                break
            m = _max_int_with_square_below(lim)
            lo = 1 if k1 == 0 else -m
            k2 = np.arange(lo, m + 1)
            k1s.append(np.full(k2.size, k1))
            k2s.append(k2)
        k1 = np.concatenate(k1s) if k1s else np.zeros(0, dtype=int)
        k2 = np.concatenate(k2s) if k2s else np.zeros(0, dtype=int)
        lam = (k1 * k1 + k2 * k2).astype(float)
        order = np.lexsort((k2, k1, lam))
        k1, k2, lam = k1[order], k2[order], lam[order]
        n_modes = 1 + 2 * k1.size
        mk1 = np.zeros(n_modes, dtype=np.int64)
        mk2 = np.zeros(n_modes, dtype=np.int64)
        mlam = np.zeros(n_modes)
        mkind = np.zeros(n_modes, dtype=np.int64)
        mk1[1::2], mk1[2::2] = k1, k1
        mk2[1::2], mk2[2::2] = k2, k2
        mlam[1::2], mlam[2::2] = lam, lam
        mkind[1::2] = _kernels.KIND_COS
        mkind[2::2] = _kernels.KIND_SIN
        self._table = (mlam, mk1, mk2, mkind)
        self._table_lam = lam_max

    def _ensure_count(self, count: int):
        lam = max(16.0, 1.3 * count / math.pi + 16.0)
        while True:
            self._build_table(lam)
            if self._table[0].size >= count:
                return
            lam *= 1.6

    def mode_info(self, count: int):
        self._ensure_count(count)
        _, k1, k2, kind = self._table
        return k1[:count], k2[:count], kind[:count]

    def eigenvalues(self, count):
        self._ensure_count(count)
        return self._table[0][:count].copy()

    def max_frequency(self, count):
        k1, k2, _ = self.mode_info(count)
        if k1.size <= 1:
            return 1
        return int(max(np.abs(k1).max(), np.abs(k2).max(), 1))

    def count_modes_below(self, lam):
        return self.weyl_count(lam)

    def weyl_count(self, lam):
        if lam <= 0:
            return 0
        r = _max_int_with_square_below(lam)
        k1 = np.arange(-r, r + 1)
        rem = lam - k1.astype(float) ** 2
        m = np.floor(np.sqrt(np.maximum(rem, 0.0))).astype(np.int64)
        m = np.where(m * m >= rem, m - 1, m)  # enforce strict inequality
        return int(np.sum(np.where(m >= 0, 2 * m + 1, 0)))

    def quadrature(self, bandwidth):
        g = 4 * max(int(bandwidth), 1) + 1
        ax = np.arange(g) * (2.0 * math.pi / g)
        xx, yy = np.meshgrid(ax, ax, indexing="ij")
        points = np.column_stack([xx.ravel(), yy.ravel()])
        weights = np.full(points.shape[0], (2.0 * math.pi / g) ** 2)
        return points, weights

    def analyze_values(self, values, count, points):
        g = int(round(math.sqrt(points.shape[0])))
        vals = np.asarray(values, dtype=complex).reshape(g, g)
        spec = np.fft.fft2(vals) * (2.0 * math.pi / (g * g))
        k1, k2, kind = self.mode_info(count)
        coeffs = np.zeros(count, dtype=complex)
        coeffs[0] = spec[0, 0]
        if count > 1:
            cp = spec[k1[1:] % g, k2[1:] % g]
            cm = spec[(-k1[1:]) % g, (-k2[1:]) % g]
            is_cos = kind[1:] == _kernels.KIND_COS
            coeffs[1:] = np.where(
                is_cos, (cp + cm) / math.sqrt(2.0), 1j * (cp - cm) / math.sqrt(2.0)
            )
        return coeffs

    def synthesize_grid(self, coeffs: np.ndarray, grid_size: int) -> np.ndarray:
        b = self.max_frequency(len(coeffs))
        if grid_size < 2 * b + 1:
            raise ValueError("grid does not resolve bandwidth")
        g = grid_size
        spec = np.zeros((g, g), dtype=complex)
        k1, k2, kind = self.mode_info(len(coeffs))
        c = np.asarray(coeffs, dtype=complex)
        spec[0, 0] = c[0]
        if c.size > 1:
            is_cos = kind[1:] == _kernels.KIND_COS
            cp = np.where(is_cos, c[1:], -1j * c[1:]) / math.sqrt(2.0)
            cm = np.where(is_cos, c[1:], 1j * c[1:]) / math.sqrt(2.0)
            flat_p = (k1[1:] % g) * g + (k2[1:] % g)
            flat_m = ((-k1[1:]) % g) * g + ((-k2[1:]) % g)
            np.add.at(spec.ravel(), flat_p, cp)
            np.add.at(spec.ravel(), flat_m, cm)
        return np.fft.ifft2(spec) * (g * g / (2.0 * math.pi))

    def grid_points(self, grid_size: int) -> np.ndarray:
        return np.arange(grid_size) * (2.0 * math.pi / grid_size)

    def synthesize_at(self, coeffs, points):
        k1, k2, kind = self.mode_info(len(coeffs))
        pts = np.asarray(points, dtype=float)
        return _kernels.torus_synth(
            k1, k2, kind, np.asarray(coeffs, dtype=complex), pts[:, 0], pts[:, 1]
        )

    def differentiate(self, coeffs, axis):
        if axis not in (0, 1):
            raise ValueError("torus axis must be 0 or 1")
        k1, k2, kind = self.mode_info(len(coeffs))
        factor = k1 if axis == 0 else k2
        out = np.zeros_like(np.asarray(coeffs))
        ci, si = _pair_indices(kind, len(coeffs))
        out[ci] = factor[si] * coeffs[si]
        out[si] = -factor[ci] * coeffs[ci]
        return out

    def apply_isometry(self, coeffs, iso):
        kind = iso.get("kind")
        coeffs = np.asarray(coeffs)
        if kind == "identity":
            return coeffs.copy()
        k1, k2, mkind = self.mode_info(len(coeffs))
        if kind == "translation":
            a1, a2 = (float(v) for v in iso["offset"])
            out = coeffs.copy()
            ci, si = _pair_indices(mkind, len(coeffs))
            ph = k1[ci] * a1 + k2[ci] * a2
            c, s = np.cos(ph), np.sin(ph)
            out[ci] = coeffs[ci] * c - coeffs[si] * s
            out[si] = coeffs[ci] * s + coeffs[si] * c
            return out
        if kind == "swap_axes":
            ci, si = _pair_indices(mkind, len(coeffs))
            a, b = k2[ci].copy(), k1[ci].copy()  # swapped frequency vectors
            flip = ~((a > 0) | ((a == 0) & (b > 0)))
            a[flip], b[flip] = -a[flip], -b[flip]
            sign = np.where(flip, -1.0, 1.0)
            # locate each swapped representative in the mode table
            key = k1[ci] * (2 ** 31) + k2[ci]
            order = np.argsort(key, kind="stable")
            target = np.searchsorted(key[order], a * (2 ** 31) + b)
            j = ci[order[target]]
            out = np.zeros_like(coeffs)
            out[0] = coeffs[0]
            out[j] = coeffs[ci]
            out[j + 1] = sign * coeffs[si]
            return out
        raise ConfigError(f"unsupported torus isometry: {kind!r}")

    def default_eps_floor(self):
        return 1e-4


class SphereZonalManifold(SpectralManifold):
    """Unit sphere, zonal (axially symmetric) subspace; one mode per degree l.

    Points are colatitudes in [0, pi]; quadrature is Gauss-Legendre in cos(theta).
    """

    name = "sphere-zonal"
    dim = 2
    volume = 4.0 * math.pi
    isometry_group = ("identity", "polar_rotation", "equatorial_reflection")

    def eigenvalues(self, count):
        l = np.arange(count, dtype=float)
        return l * (l + 1.0)

    def max_frequency(self, count):
        return max(int(count) - 1, 1)

    @staticmethod
    def _max_degree_below(lam):
        if lam <= 0:
            return -1
        l = int((-1.0 + math.sqrt(1.0 + 4.0 * lam)) / 2.0)
        while l >= 0 and l * (l + 1) >= lam:
            l -= 1
        while (l + 1) * (l + 2) < lam:
            l += 1
        return l

    def count_modes_below(self, lam):
        return self._max_degree_below(lam) + 1

    def weyl_count(self, lam):
        l = self._max_degree_below(lam)
        return (l + 1) ** 2 if l >= 0 else 0

    def quadrature(self, bandwidth):
        nodes, weights = np.polynomial.legendre.leggauss(int(bandwidth) + 1)
        theta = np.arccos(nodes)
        return theta, 2.0 * math.pi * weights

    def analyze_values(self, values, count, points):
        xcos = np.cos(np.asarray(points, dtype=float))
        _, gl_w = np.polynomial.legendre.leggauss(xcos.size)
        table = _kernels.legendre_table_numpy(count - 1, xcos)
        norms = np.sqrt((2.0 * np.arange(count) + 1.0) / (4.0 * math.pi))
        vals = np.asarray(values, dtype=complex)
        return 2.0 * math.pi * norms * (table @ (gl_w * vals))

    def synthesize_at(self, coeffs, points):
        return _kernels.zonal_synth(
            np.asarray(coeffs, dtype=complex), np.cos(np.asarray(points, dtype=float))
        )

    def differentiate(self, coeffs, axis=0):
        raise UnsupportedSeminormError("sup-derivative seminorms are not available on the sphere")

    def apply_isometry(self, coeffs, iso):
        kind = iso.get("kind")
        coeffs = np.asarray(coeffs)
        if kind in ("identity", "polar_rotation"):
            return coeffs.copy()
        if kind == "equatorial_reflection":
            signs = np.where(np.arange(len(coeffs)) % 2 == 0, 1.0, -1.0)
            return coeffs * signs
        raise ConfigError(f"unsupported sphere isometry: {kind!r}")


_REGISTRY = {
    "circle": CircleManifold,
    "torus2": TorusManifold,
    "sphere-zonal": SphereZonalManifold,
}


@lru_cache(maxsize=None)
def _cached(name: str) -> SpectralManifold:
    return _REGISTRY[name]()


def make_manifold(spec) -> SpectralManifold:
    """Build a manifold from a name or a {"name": ...} descriptor."""
    if isinstance(spec, SpectralManifold):
        return spec
    if isinstance(spec, dict):
        name = spec.get("name")
        extra = set(spec) - {"name"}
        if extra:
            raise ConfigError(f"unknown manifold keys: {sorted(extra)}")
    else:
        name = spec
    if name not in _REGISTRY:
        raise ConfigError(f"unknown manifold {name!r}; expected one of {sorted(_REGISTRY)}")
    return _cached(name)
