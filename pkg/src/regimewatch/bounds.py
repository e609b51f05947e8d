"""Distribution-free tail bounds for means of bounded random variables.

Everything in this module is a pure function of its arguments: the
exponential bound ``exp(-2 t^2 n)`` on the probability that an observed
mean deviates from a committed mean by at least ``t``, its two-sided
variant, the tighter product-form bound obtained by optimizing a free
exponent ``h``, the closed-form optimizer ``optimal_h``, and the
supporting constructs used to verify the product form (the secant line
that dominates a convex exponential on an interval, and the variance cap
implied by boundedness).

Committed means and tolerances are first rescaled to the unit interval
(:func:`normalize`); every bound formula then works in normalized units
and never needs the raw interval endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "DomainError",
    "UnitInterval",
    "BoundValue",
    "SampleCount",
    "Bounds",
    "UNIT_BOUNDS",
    "NormalizedPair",
    "normalize",
    "exp_bound",
    "two_sided_exp_bound",
    "tight_bound",
    "shortfall_tight_bound",
    "optimal_h",
    "a4_rhs",
    "lemma1_line_bound",
    "variance_cap",
    "geometric_mean",
]


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class UnitInterval(float):
    """A float constrained to [0, 1]; construction outside the range is rejected."""

    __slots__ = ()

    def __new__(cls, value: float) -> "UnitInterval":
        v = float(value)
        if math.isnan(v) or not 0.0 <= v <= 1.0:
            raise DomainError(f"expected a value in [0, 1], got {value!r}")
        return super().__new__(cls, v)


# Maximum chance-probability of a deviation event; always a unit-interval value.
BoundValue = UnitInterval


class SampleCount(int):
    """Number of completed observations; at least one."""

    __slots__ = ()

    def __new__(cls, n: int) -> "SampleCount":
        if isinstance(n, float) and not n.is_integer():
            raise DomainError(f"observation count must be an integer, got {n!r}")
        v = int(n)
        if v < 1:
            raise DomainError(f"observation count must be >= 1, got {n!r}")
        return super().__new__(cls, v)


@dataclass(frozen=True)
class Bounds:
    """Closed interval [a, b] confining every observation of a variable."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"bounds must be finite, got [{self.a!r}, {self.b!r}]")
        if not self.b > self.a:
            raise DomainError(
                f"upper bound must strictly exceed lower bound, got [{self.a}, {self.b}]"
            )

    @property
    def width(self) -> float:
        return self.b - self.a

    def contains(self, x: float) -> bool:
        return self.a <= x <= self.b


UNIT_BOUNDS = Bounds(0.0, 1.0)


@dataclass(frozen=True)
class NormalizedPair:
    """Committed mean and tolerance rescaled so the variable lives on [0, 1]."""

    mu_dot: float
    t_dot: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu_dot", UnitInterval(self.mu_dot))
        t = float(self.t_dot)
        if math.isnan(t) or t < 0.0:
            raise DomainError(f"normalized tolerance must be >= 0, got {self.t_dot!r}")
        object.__setattr__(self, "t_dot", t)


def normalize(mu: float, t: float, bounds: Bounds) -> NormalizedPair:
    """Rescale a committed mean and tolerance by the interval width.

    Returns ``((mu - a) / (b - a), t / (b - a))``.
    """
    if math.isnan(mu) or not bounds.contains(mu):
        raise DomainError(f"mean {mu!r} outside bounds [{bounds.a}, {bounds.b}]")
    if math.isnan(t) or t < 0.0:
        raise DomainError(f"tolerance must be >= 0, got {t!r}")
    return NormalizedPair((mu - bounds.a) / bounds.width, t / bounds.width)


def exp_bound(t_dot: float, n: int) -> BoundValue:
    """One-sided exponential bound ``min(1, exp(-2 t^2 n))`` on a unit-width deviation.

    The same value bounds deviations in either direction. A non-positive
    tolerance carries no adverse evidence, so the bound clamps to 1.
    """
    n = SampleCount(n)
    if math.isnan(t_dot):
        raise DomainError("tolerance must not be NaN")
    if t_dot <= 0.0:
        return BoundValue(1.0)
    return BoundValue(min(1.0, math.exp(-2.0 * t_dot * t_dot * n)))


def two_sided_exp_bound(t_dot: float, n: int) -> BoundValue:
    """Two-sided exponential bound ``min(1, 2 exp(-2 t^2 n))``."""
    n = SampleCount(n)
    if math.isnan(t_dot):
        raise DomainError("tolerance must not be NaN")
    if t_dot <= 0.0:
        return BoundValue(1.0)
    return BoundValue(min(1.0, 2.0 * math.exp(-2.0 * t_dot * t_dot * n)))


def tight_bound(pair: NormalizedPair, n: int) -> BoundValue:
    """Product-form bound on ``P[mean exceeds mu by at least t]`` in normalized units.

    This is the value of :func:`a4_rhs` at its minimizing exponent
    ``optimal_h``, in closed form::

        ((mu/(mu+t))^(mu+t) * ((1-mu)/(1-mu-t))^(1-mu-t))^n

    Degenerate branches: a zero tolerance clamps to 1; a tolerance at or
    past ``1 - mu`` would require the variable to exceed its upper bound,
    so the probability is 0; a boundary mean (0 or 1) forces a
    deterministic variable, so any positive tolerance also yields 0.

    Computed in log space to avoid underflow at large ``n``.
    """
    n = SampleCount(n)
    mu, t = pair.mu_dot, pair.t_dot
    if t <= 0.0:
        return BoundValue(1.0)
    if t >= 1.0 - mu:
        return BoundValue(0.0)
    if mu == 0.0:
        return BoundValue(0.0)
    log_per_draw = (mu + t) * math.log(mu / (mu + t)) + (1.0 - mu - t) * math.log(
        (1.0 - mu) / (1.0 - mu - t)
    )
    return BoundValue(min(1.0, math.exp(n * log_per_draw)))


def shortfall_tight_bound(pair: NormalizedPair, n: int) -> BoundValue:
    """Product-form bound on ``P[mean falls short of mu by at least t]``.

    Reflecting the variable (``x -> 1 - x``) maps a shortfall into the
    canonical upward deviation with mean ``1 - mu``, so the product form
    applies with the reflected mean.
    """
    return tight_bound(NormalizedPair(1.0 - pair.mu_dot, pair.t_dot), n)


def optimal_h(pair: NormalizedPair) -> float:
    """Closed-form minimizer of :func:`a4_rhs` over the free exponent ``h``.

    ``h0 = ln[(1-mu)(mu+t) / ((1-mu-t) mu)]``; zero exactly when ``t`` is zero.
    """
    mu, t = pair.mu_dot, pair.t_dot
    if mu <= 0.0 or mu >= 1.0:
        raise DomainError(
            f"critical point requires a mean strictly inside (0, 1), got {mu}"
        )
    if t >= 1.0 - mu:
        raise DomainError(
            f"tolerance {t} must stay below 1 - mu = {1.0 - mu}; the bound is 0 there"
        )
    return math.log((1.0 - mu) * (mu + t) / ((1.0 - mu - t) * mu))


def a4_rhs(pair: NormalizedPair, n: int, h: float) -> float:
    """Exponent-parameterized upper bound ``(e^(-h(t+mu)) (1 - mu + mu e^h))^n``.

    Valid for any ``h > 0``; minimized at :func:`optimal_h`, where it
    equals :func:`tight_bound`. Evaluated in log space; values too large
    for a float come back as ``inf``.
    """
    n = SampleCount(n)
    if math.isnan(h) or h <= 0.0:
        raise DomainError(f"exponent h must be strictly positive, got {h!r}")
    mu, t = pair.mu_dot, pair.t_dot
    if mu == 0.0:
        log_mix = 0.0
    elif mu == 1.0:
        log_mix = h
    else:
        log_mix = _logaddexp(math.log(1.0 - mu), math.log(mu) + h)
    log_total = n * (-h * (t + mu) + log_mix)
    try:
        return math.exp(log_total)
    except OverflowError:
        return math.inf


def _logaddexp(x: float, y: float) -> float:
    if x < y:
        x, y = y, x
    return x + math.log1p(math.exp(y - x))


def lemma1_line_bound(x: float, h: float, bounds: Bounds) -> float:
    """Secant line through ``(a, e^(ha))`` and ``(b, e^(hb))`` evaluated at ``x``.

    Convexity of the exponential makes this an upper bound on ``e^(hx)``
    for every ``x`` in ``[a, b]``.
    """
    if math.isnan(x) or not bounds.contains(x):
        raise DomainError(f"point {x!r} outside bounds [{bounds.a}, {bounds.b}]")
    w = bounds.width
    return ((bounds.b - x) / w) * math.exp(h * bounds.a) + (
        (x - bounds.a) / w
    ) * math.exp(h * bounds.b)


def variance_cap(mu: float, bounds: Bounds) -> float:
    """Largest variance a variable bounded by [a, b] with mean mu can have: ``(mu-a)(b-mu)``."""
    if math.isnan(mu) or not bounds.contains(mu):
        raise DomainError(f"mean {mu!r} outside bounds [{bounds.a}, {bounds.b}]")
    return (mu - bounds.a) * (bounds.b - mu)


def geometric_mean(values: Iterable[float]) -> float:
    """Geometric mean of strictly positive values; never exceeds the arithmetic mean."""
    vals = [float(v) for v in values]
    if not vals:
        raise DomainError("geometric mean of an empty sequence")
    if any(math.isnan(v) or v <= 0.0 for v in vals):
        raise DomainError("geometric mean requires strictly positive values")
    return math.exp(math.fsum(math.log(v) for v in vals) / len(vals))
