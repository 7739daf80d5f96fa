"""Rapidly decaying spectral multipliers and their scaled nets.

Symbols live on [0, inf) since they are only ever evaluated on Laplace
spectra.  Derivatives up to order 6 come from truncated Taylor-jet
composition, not finite differences, so high-order seminorm estimates carry
no subtraction noise.

The built-in families:

* plateau symbols: identically 1 on [0, t], then a compactly supported
  Gevrey-type taper (exp(-1/s^k) transition) reaching exactly 0 by (1+w) t;
* poly-heat symbols exp(-x) * sum_{i<q} x^i / i! whose value-1 defect at the
  origin is of order x^q (q = 1 is the plain heat multiplier);
* an "almost 1 near 0" limit symbol (1 - exp(-a/x)) * plateau, together with
  the plateau-member sequences that converge to it fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._jets import (
    jet_add,
    jet_affine_compose,
    jet_div,
    jet_exp,
    jet_mul,
    jet_recip_power,
    jet_to_derivatives,
    jet_var,
)
from .exceptions import ConfigError, GridLevelError, ScheduleError

MAX_JET_ORDER = 8


@dataclass(frozen=True)
class TaperShape:
    """Transition profile g(s) = exp(-1/s^power), stretched over width*t."""

    power: int = 2
    width: float = 3.0

    def __post_init__(self):
        if self.power < 1 or self.width <= 0:
            raise ConfigError("taper shape requires power >= 1 and width > 0")


def _transition_jet(s: np.ndarray, order: int, power: int) -> np.ndarray:
    """Jet of exp(-1/s^power) at points s in (0, 1]; exact zero below underflow."""
    s = np.asarray(s, dtype=float)
    cut = (1.0 / 700.0) ** (1.0 / power)
    safe = np.maximum(s, cut)
    jet = jet_exp(-jet_recip_power(safe, power, order))
    jet[:, s < cut] = 0.0
    return jet


def _profile_jet(u: np.ndarray, order: int, power: int) -> np.ndarray:
    """Jet of the smooth step h with h(0)=1, h(1)=0 at points u in (0, 1)."""
    g_right = jet_affine_compose(_transition_jet(1.0 - u, order, power), -1.0)
    g_left = _transition_jet(u, order, power)
    return jet_div(g_right, jet_add(g_right, g_left))


class SchwartzSymbol:
    """A rapidly decaying function on [0, inf) with analytic derivatives."""

    plateau_radius: float | None = None
    label: str = "symbol"

    def jet(self, x: np.ndarray, order: int) -> np.ndarray:
        """Derivative values F, F', ..., F^(order) at x; shape (order+1, n)."""
        raise NotImplementedError

    def evaluate(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        vals = self.jet(arr, 0)[0]
        return float(vals[0]) if np.isscalar(x) or np.ndim(x) == 0 else vals

    def derivative(self, order: int, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        vals = self.jet(arr, order)[order]
        return float(vals[0]) if np.isscalar(x) or np.ndim(x) == 0 else vals

    def sup_value(self) -> float:
        return 1.0

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        """Smallest radius beyond which |F| < rel_threshold * sup|F|."""
        raise NotImplementedError

    def decay_certificate(self, p: int, alpha: int, x_max: float = 1e6) -> float:
        """Sampled bound on |x^p F^(alpha)| over a log grid up to x_max."""
        return symbol_seminorm(self, p, alpha, x_max=x_max)

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class PlateauSymbol(SchwartzSymbol):
    def __init__(self, t: float, shape: TaperShape | None = None):
        if t <= 0:
            raise ConfigError("plateau radius must be positive")
        self.plateau_radius = float(t)
        self.shape = shape or TaperShape()
        self.label = f"plateau(t={t:g})"

    @property
    def support_end(self) -> float:
        return self.plateau_radius * (1.0 + self.shape.width)

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        out = np.zeros((order + 1, x.size))
        t, end = self.plateau_radius, self.support_end
        inside = x <= t
        out[0, inside] = 1.0
        mid = (~inside) & (x < end)
        if mid.any():
            span = end - t
            u = (x[mid] - t) / span
            out[:, mid] = jet_affine_compose(
                _profile_jet(u, order, self.shape.power), 1.0 / span
            )
        return out

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return self.support_end


class PolyHeatSymbol(SchwartzSymbol):
    """exp(-x) * sum_{i<q} x^i/i!; monotone from 1 with 1-F ~ x^q/q! near 0."""

    def __init__(self, q: int = 1):
        if q < 1:
            raise ConfigError("poly-heat order must be >= 1")
        self.q = int(q)
        self.label = "heat" if q == 1 else f"poly_heat(q={q})"

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        expo = jet_exp(-jet_var(x, order))
        poly = np.zeros((order + 1, x.size))
        for k in range(order + 1):
            acc = np.zeros(x.size)
            for i in range(k, self.q):
                acc += x ** (i - k) / math.factorial(i - k)
            poly[k] = acc / math.factorial(k)
        return jet_to_derivatives(jet_mul(expo, poly))

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        lo, hi = float(self.q), float(self.q)
        while self.evaluate(hi) >= rel_threshold:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.evaluate(mid) >= rel_threshold:
                lo = mid
            else:
                hi = mid
        return hi


class AdmissibleLimitSymbol(SchwartzSymbol):
    """(1 - exp(-a/x)) * plateau(t_outer); equals 1 only at 0, all derivatives
    vanish there, yet it is approximable at super-polynomial rate by genuine
    plateau symbols."""

    def __init__(self, a: float = 8.0, outer: PlateauSymbol | None = None):
        if a <= 0:
            raise ConfigError("flatness parameter must be positive")
        self.a = float(a)
        self.outer = outer or PlateauSymbol(2.0)
        self.label = f"admissible(a={a:g})"
        self.plateau_radius = None

    def _rise_jet(self, x, order):
        # 1 - exp(-a/x); exactly 1 below the underflow knee
        x = np.asarray(x, dtype=float)
        out = np.zeros((order + 1, x.size))
        cut = self.a / 700.0
        tiny = x <= cut
        out[0, tiny] = 1.0
        big = ~tiny
        if big.any():
            ex = jet_exp(-self.a * jet_recip_power(x[big], 1, order))
            ex = -ex
            ex[0] += 1.0
            out[:, big] = ex
        return out

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        rise = self._rise_jet(x, order)
        outer = self.outer.jet(x, order)
        from ._jets import derivatives_to_jet

        prod = jet_mul(rise, derivatives_to_jet(outer))
        return jet_to_derivatives(prod) if False else jet_to_derivatives(
            jet_mul(derivatives_to_jet(jet_to_derivatives(rise) * 0 + rise) * 0 + rise, derivatives_to_jet(outer))
        )

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return self.outer.support_end


class MemberSymbol(SchwartzSymbol):
    """Plateau-t member of a sequence converging to an admissible limit:
    F_n = F + (1 - F) * step(x / t_n), equal to 1 on [0, t_n] and to the
    limit beyond 2 t_n."""

    def __init__(self, limit: AdmissibleLimitSymbol, t_n: float, index: int):
        self.limit = limit
        self.plateau_radius = float(t_n)
        self.index = index
        self.label = f"member(n={index}, t={t_n:g})"

    def _step_jet(self, x, order):
        # 1 on [0, t], 0 beyond 2t, smooth in between (reversed profile)
        t = self.plateau_radius
        x = np.asarray(x, dtype=float)
        out = np.zeros((order + 1, x.size))
        out[0, x <= t] = 1.0
        mid = (x > t) & (x < 2.0 * t)
        if mid.any():
            u = (x[mid] - t) / t
            out[:, mid] = jet_affine_compose(
                _profile_jet(u, order, self.limit.outer.shape.power), 1.0 / t
            )
        return out

    def jet(self, x, order):
        from ._jets import derivatives_to_jet

        x = np.asarray(x, dtype=float)
        lim = self.limit.jet(x, order)
        one_minus = -lim.copy()
        one_minus[0] += 1.0
        step = self._step_jet(x, order)
        corr = jet_to_derivatives(
            jet_mul(derivatives_to_jet(one_minus), derivatives_to_jet(step))
        )
        out = lim + corr
        # plateau values are exact by construction, not by cancellation
        t = self.plateau_radius
        out[:, x <= t] = 0.0
        out[0, x <= t] = 1.0
        return out

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return self.limit.support_radius(rel_threshold)


class DifferenceSymbol(SchwartzSymbol):
    """Pointwise difference A - B with jet-level arithmetic."""

    def __init__(self, a: SchwartzSymbol, b: SchwartzSymbol):
        self.a, self.b = a, b
        self.label = f"({a.label} - {b.label})"
        self.plateau_radius = None

    def jet(self, x, order):
        return self.a.jet(x, order) - self.b.jet(x, order)

    def sup_value(self):
        return max(self.a.sup_value(), self.b.sup_value())

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return max(self.a.support_radius(rel_threshold), self.b.support_radius(rel_threshold))


class MemberDefectSymbol(SchwartzSymbol):
    """Analytic member-minus-limit: exp(-a/x) * step(x/t_n), free of
    cancellation (both factors are evaluated directly)."""

    def __init__(self, member: MemberSymbol):
        self.member = member
        self.label = f"defect({member.label})"
        self.plateau_radius = None

    def jet(self, x, order):
        from ._jets import derivatives_to_jet

        x = np.asarray(x, dtype=float)
        lim = self.member.limit
        out = np.zeros((order + 1, x.size))
        active = x < 2.0 * self.member.plateau_radius
        if active.any():
            xa = x[active]
            rise = lim._rise_jet(xa, order)  # jet of 1 - exp(-a/x)
            flat = -rise
            flat[0] += 1.0  # exp(-a/x)
            step = self.member._step_jet(xa, order)
            out[:, active] = jet_to_derivatives(
                jet_mul(derivatives_to_jet(flat), derivatives_to_jet(step))
            )
        return out

    def sup_value(self):
        return 1.0

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return 2.0 * self.member.plateau_radius


class ZeroSymbol(SchwartzSymbol):
    label = "zero"

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        return np.zeros((order + 1, x.size))

    def sup_value(self):
        return 0.0

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return 0.0


class ScaledSymbol(SchwartzSymbol):
    """x -> F(eps x); derivatives carry the eps^order chain-rule factor."""

    def __init__(self, base: SchwartzSymbol, eps: float):
        if not 0.0 < eps <= 1.0:
            raise ConfigError("scaling parameter must lie in (0, 1]")
        self.base = base
        self.eps = float(eps)
        self.label = f"{base.label}@eps={eps:g}"
        t = base.plateau_radius
        self.plateau_radius = None if t is None else t / eps

    def jet(self, x, order):
        x = np.asarray(x, dtype=float)
        inner = self.base.jet(self.eps * x, order)
        for k in range(1, order + 1):
            inner[k] *= self.eps ** k
        return inner

    def sup_value(self):
        return self.base.sup_value()

    def support_radius(self, rel_threshold: float = 1e-16) -> float:
        return self.base.support_radius(rel_threshold) / self.eps


# -- constructors ------------------------------------------------------------


def plateau_symbol(t: float, shape: TaperShape | None = None) -> PlateauSymbol:
    return PlateauSymbol(t, shape)


def heat_symbol() -> PolyHeatSymbol:
    return PolyHeatSymbol(1)


def poly_heat_symbol(q: int) -> PolyHeatSymbol:
    return PolyHeatSymbol(q)


def zero_symbol() -> ZeroSymbol:
    return ZeroSymbol()


def scale(symbol: SchwartzSymbol, eps: float) -> ScaledSymbol:
    return ScaledSymbol(symbol, eps)


def k_index(level: int, eps: float) -> int:
    """Smallest integer strictly greater than eps^(-level)."""
    if level < 1:
        raise ConfigError("staging level must be >= 1")
    if not 0.0 < eps <= 1.0:
        raise ConfigError("eps must lie in (0, 1]")
    value = eps ** (-float(level))
    if value > 2.0 ** 62:
        raise GridLevelError(f"eps^-{level} exceeds the index range at eps={eps:g}")
    snapped = round(value)
    if snapped > 0 and abs(value - snapped) <= 1e-9 * value:
        value = float(snapped)
    return int(math.floor(value)) + 1


# -- schedules and sequences --------------------------------------------------


def schedule_radius(schedule: dict, n: int) -> float:
    kind = schedule.get("kind")
    if kind == "constant":
        return float(schedule.get("t", 1.0))
    if kind == "log":
        return 1.0 / math.log(n + math.e)
    if kind == "exp-sqrt-log":
        return min(1.0, math.exp(-math.sqrt(math.log(max(n, 1)))))
    raise ScheduleError(f"unknown schedule kind {kind!r}")


def validate_schedule(schedule: dict):
    kind = schedule.get("kind")
    if kind in ("constant", "log", "exp-sqrt-log"):
        return
    if kind == "poly":
        raise ScheduleError("polynomially decaying plateau schedules are not admissible")
    raise ScheduleError(f"unknown schedule kind {kind!r}")


class SymbolSequence:
    """Members F_n with plateau radii t_n converging fast to a limit symbol."""

    def __init__(self, limit: SchwartzSymbol, schedule: dict):
        self.limit = limit
        self.schedule = schedule
        self.rate_constants: dict[tuple[int, int], float] = {}
        self._members: dict[int, SchwartzSymbol] = {}

    def radius(self, n: int) -> float:
        return schedule_radius(self.schedule, n)

    def member(self, n: int) -> SchwartzSymbol:
        if n < 1:
            raise ConfigError("sequence members are indexed from 1")
        got = self._members.get(n)
        if got is None:
            got = self._make_member(n)
            self._members[n] = got
        return got

    def _make_member(self, n: int) -> SchwartzSymbol:
        if self.schedule.get("kind") == "constant" or not isinstance(
            self.limit, AdmissibleLimitSymbol
        ):
            return self.limit
        return MemberSymbol(self.limit, self.radius(n), n)

    def member_defect(self, n: int) -> SchwartzSymbol:
        """Analytic F_n - F, avoiding cancellation."""
        member = self.member(n)
        if isinstance(member, MemberSymbol):
            return MemberDefectSymbol(member)
        return ZeroSymbol()

    def measure_rate_constants(self, n_values, battery) -> dict:
        """Record max_n n * rho(F_n - F) per (p, alpha) seminorm."""
        for p, alpha in battery:
            best = 0.0
            for n in n_values:
                best = max(best, n * symbol_seminorm(self.member_defect(n), p, alpha))
            self.rate_constants[(p, alpha)] = best
        return self.rate_constants


def admissible_from_schedule(schedule: dict, shape: TaperShape | None = None, flatness: float = 8.0) -> SymbolSequence:
    """Sequence of plateau symbols with sub-polynomial radii converging to an
    "almost 1 near 0" limit; consecutive members differ only between their
    plateau radii and the increments decay faster than 1/n^2 in every battery
    seminorm."""
    validate_schedule(schedule)
    if schedule.get("kind") == "constant":
        t = float(schedule.get("t", 1.0))
        return SymbolSequence(plateau_symbol(t, shape), schedule)
    outer = PlateauSymbol(2.0, shape)
    return SymbolSequence(AdmissibleLimitSymbol(flatness, outer), schedule)


def staged_symbol(seq: SymbolSequence, level: int, eps: float) -> ScaledSymbol:
    """x -> F_k(eps x) with k the staging index for (level, eps)."""
    return ScaledSymbol(seq.member(k_index(level, eps)), eps)


# -- seminorms ----------------------------------------------------------------


def _sample_grid(x_max: float, n: int = 1600) -> np.ndarray:
    return np.concatenate([[0.0], np.geomspace(1e-6, x_max, n)])


def symbol_seminorm(symbol: SchwartzSymbol, p: int, alpha: int, x_max: float = 1e6, grid: np.ndarray | None = None) -> float:
    """sup over a log-spaced grid of |x^p F^(alpha)(x)|."""
    if alpha > MAX_JET_ORDER:
        raise ConfigError(f"derivative order {alpha} beyond jet budget {MAX_JET_ORDER}")
    x = _sample_grid(x_max) if grid is None else np.asarray(grid, dtype=float)
    deriv = symbol.jet(x, alpha)[alpha]
    return float(np.max(np.abs(x ** p * deriv)))


# -- nets ---------------------------------------------------------------------


class SymbolNet:
    """A scaled-symbol net: plain F(eps x) or staged F_{k(l, eps)}(eps x)."""

    def __init__(self, base, level: int | None = None):
        if isinstance(base, SymbolSequence):
            self.sequence = base
            self.level = level
            if level is None:
                self.base = base.limit
            else:
                if level < 1:
                    raise ConfigError("staging level must be >= 1")
                self.base = None
        else:
            if level is not None:
                raise ConfigError("staged mode requires a symbol sequence")
            self.sequence = None
            self.level = None
            self.base = base

    @property
    def staged(self) -> bool:
        return self.level is not None

    def member_at(self, eps: float) -> SchwartzSymbol:
        if self.staged:
            return self.sequence.member(k_index(self.level, eps))
        return self.base

    def weights(self, eps: float, lam: np.ndarray) -> np.ndarray:
        return self.member_at(eps).evaluate(eps * np.asarray(lam, dtype=float))

    def plateau_radius_at(self, eps: float) -> float | None:
        return self.member_at(eps).plateau_radius

    def support_radius_at(self, eps: float, rel_threshold: float = 1e-16) -> float:
        """Spectral cutoff: eigenvalues beyond this contribute below threshold."""
        return self.member_at(eps).support_radius(rel_threshold) / eps

    @property
    def label(self) -> str:
        if self.staged:
            return f"staged(l={self.level}, {self.sequence.limit.label})"
        return self.base.label
