"""Moment generating functions M(t) = E[exp(tX)] by independent routes.

* density route: integrate ``density(x) * exp(t x)`` over the support;
* tail route: integrate ``1 - G(t, y)`` over y > 0, where
  ``G(t, y) = P(exp(tX) <= y)`` is the CDF of the transformed variable;
* closed form, where a model declares one.

For t > 0, ``G(t, y) = F(log(y)/t)``.  For t < 0 dividing by t flips the
inequality, so ``G(t, y) = 1 - F(log(y)/t -)`` with the left limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .distributions import DensityRequiredError, DistributionModel
from .quadrature import QuadratureConfig, QuadratureError, Status, integrate
from .values import MgfValue, Route

__all__ = [
    "MgfValue",
    "Route",
    "Interval",
    "TransformedCdf",
    "MgfEvaluationError",
    "mgf_via_density",
    "mgf_via_tail",
    "mgf_closed_form",
    "transformed_cdf",
    "mgf",
    "existence_scan",
]


class MgfEvaluationError(ValueError):
    """An MGF evaluation failed; carries the offending ``t``."""

    def __init__(self, t: float, cause: Exception):
        self.t = t
        self.cause = cause
        super().__init__(f"M(t) evaluation failed at t={t!r}: {cause}")


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got ({self.a}, {self.b})")

    def __contains__(self, t: float) -> bool:
        return self.a < t < self.b

    def interior_grid(self, count: int = 9) -> tuple[float, ...]:
        """``count`` equispaced points strictly inside (a, b)."""
        step = (self.b - self.a) / (count + 1)
        # 12 significant digits strips representation noise such as -0.3999999999999999
        return tuple(float(f"{self.a + step * (i + 1):.12g}") for i in range(count))


@dataclass(frozen=True)
class TransformedCdf:
    """x -> P(exp(t X) <= x) for a fixed base model and t != 0."""

    base: DistributionModel
    t: float

    def __post_init__(self):
        if self.t == 0:
            raise ValueError("transformed CDF is undefined at t = 0")

    def __call__(self, x):
        return transformed_cdf(self.base, self.t, x)

    def survival(self, x):
        """1 - G(t, x), computed without cancellation."""
        x = np.asarray(x, dtype=float)
        out = np.ones_like(x)
        pos = x > 0
        y = np.log(x[pos]) / self.t
        if self.t > 0:
            out[pos] = self.base.sf(y)
        else:
            out[pos] = self.base.cdf_left(y)
        return float(out) if np.ndim(x) == 0 else out


def transformed_cdf(model: DistributionModel, t: float, x):
    """G(t, x) = P(exp(t X) <= x); zero for x <= 0."""
    if t == 0:
        raise ValueError("transformed CDF is undefined at t = 0")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    y = np.log(x[pos]) / t
    if t > 0:
        out[pos] = model.cdf(y)
    else:
        out[pos] = 1.0 - np.asarray(model.cdf_left(y))
    return float(out) if np.ndim(x) == 0 else out


_BULK_LEVELS = (1e-3, 1e-2, 0.1, 0.5, 0.9, 0.99, 0.999)


def _anchor_points(model: DistributionModel) -> list[float]:
    """Breakpoints plus a few quantiles, so adaptive panels see the bulk."""
    points = list(model.breakpoints)
    if model.has_quantile:
        points.extend(float(q) for q in model.quantile(np.array(_BULK_LEVELS)))
    return [p for p in points if math.isfinite(p)]


def _from_outcome(outcome, route: Route) -> MgfValue:
    return MgfValue(outcome.status, outcome.value, outcome.error_estimate, route,
                    outcome.diagnostics)


def mgf_via_density(model: DistributionModel, t: float,
                    cfg: QuadratureConfig | None = None) -> MgfValue:
    """Integrate density(x) exp(t x) over the support of ``model``."""
    if not model.has_density:
        raise DensityRequiredError(f"density required: {model.model_id} has none")
    t = float(t)

    def integrand(x):
        with np.errstate(over="ignore"):
            return np.exp(model.logpdf(x) + t * x)

    points = [p for p in _anchor_points(model) if model.support_lo < p < model.support_hi]
    out = integrate(integrand, model.support_lo, model.support_hi, cfg, points)
    return _from_outcome(out, Route.DENSITY)


def _exp_clip(v: float) -> float:
    if v > 709.0:
        return math.inf
    return math.exp(v)


def mgf_via_tail(model: DistributionModel, t: float,
                 cfg: QuadratureConfig | None = None) -> MgfValue:
    """M(t) = integral over y > 0 of (1 - G(t, y)).

    Y = exp(tX) lives in [y_lo, y_hi] (the image of the support), so the
    integrand is exactly 1 below y_lo and 0 above y_hi.  For t < 0 and a
    support inside [0, inf) this confines the work to (0, 1].
    """
    t = float(t)
    if t == 0:
        raise ValueError("tail route needs t != 0 (M(0) = 1)")
    ends = sorted((_exp_clip(t * model.support_lo), _exp_clip(t * model.support_hi)))
    y_lo, y_hi = ends
    survival = TransformedCdf(model, t).survival
    points = []
    for p in _anchor_points(model):
        y = _exp_clip(t * p)
        if y_lo < y < y_hi:
            points.append(y)
    if y_lo == y_hi:
        return MgfValue(Status.FINITE, y_lo, 0.0, Route.TAIL, "degenerate transformed law")
    out = integrate(survival, y_lo, y_hi, cfg, points)
    if out.is_finite:
        return MgfValue(Status.FINITE, y_lo + out.value, out.error_estimate, Route.TAIL,
                        out.diagnostics)
    return _from_outcome(out, Route.TAIL)


def mgf_closed_form(model: DistributionModel, t: float) -> MgfValue:
    try:
        value = model.closed_form_mgf(float(t))
    except OverflowError:
        # finite, but beyond double range; inf stands in as a lower bound
        return MgfValue(Status.INCONCLUSIVE, math.inf, math.inf, Route.CLOSED_FORM,
                        "M(t) is finite but overflows double precision")
    if value is None:
        raise ValueError(f"{model.model_id} has no closed-form MGF")
    if math.isinf(value):
        return MgfValue.divergent(Route.CLOSED_FORM)
    return MgfValue(Status.FINITE, float(value), 0.0, Route.CLOSED_FORM)


def _default_route(model: DistributionModel) -> Route:
    if model.has_density:
        return Route.DENSITY
    if model.closed_form_mgf(0.0) is not None:
        return Route.CLOSED_FORM
    return Route.TAIL


def mgf(model: DistributionModel, t: float, cfg: QuadratureConfig | None = None,
        route: Route | str | None = None) -> MgfValue:
    """Evaluate M(t) by ``route`` (density, else closed form, else tail).

    M(0) is answered as exactly 1 without integrating.
    """
    route = Route(route) if route is not None else _default_route(model)
    t = float(t)
    if t == 0:
        return MgfValue(Status.FINITE, 1.0, 0.0, route, "M(0) = 1")
    try:
        if route is Route.DENSITY:
            return mgf_via_density(model, t, cfg)
        if route is Route.TAIL:
            return mgf_via_tail(model, t, cfg)
        if route is Route.CLOSED_FORM:
            return mgf_closed_form(model, t)
    except (QuadratureError, DensityRequiredError) as exc:
        raise MgfEvaluationError(t, exc) from exc
    raise ValueError(f"route {route} is not available through mgf(); "
                     "use montecarlo.empirical_mgf")


def existence_scan(model: DistributionModel, t_grid: Iterable[float],
                   cfg: QuadratureConfig | None = None) -> dict[float, Status]:
    """Classify M(t) as finite / divergent / inconclusive on each grid point.

    Uses the density route when the model has one, else the tail route.
    """
    grid = [float(t) for t in t_grid]
    if not grid:
        raise ValueError("t_grid must be nonempty")
    route = Route.DENSITY if model.has_density else Route.TAIL
    return {t: mgf(model, t, cfg, route).status for t in grid}
