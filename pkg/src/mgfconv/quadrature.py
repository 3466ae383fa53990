"""Improper-integral quadrature with explicit divergence classification.

Finite pieces are handled by a globally adaptive Gauss-Kronrod (7/15)
rule.  Semi-infinite ranges are handled by progressive truncation: panels
``[T_k, T_{k+1}]`` with geometrically growing edges are integrated one at a
time, and the running partial sum is declared

* ``FINITE`` once panel contributions decay and a geometric tail bound
  falls below tolerance,
* ``DIVERGENT`` once the partial sum exceeds ``divergence_threshold``, the
  integrand overflows, or contributions refuse to shrink for many rounds,
* ``INCONCLUSIVE`` when neither happens within the budget.

Integrands must be vectorized: they receive a 1-d float array and return an
array of the same shape.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

import numpy as np

__all__ = [
    "Status",
    "QuadratureConfig",
    "IntegralOutcome",
    "QuadratureError",
    "integrate",
    "detect_divergence",
]

Integrand = Callable[[np.ndarray], np.ndarray]

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[[13, 11, 9]] = _WG[:3]
_GW[7] = _WG[3]

_EPS = np.finfo(float).eps
_MAX_EDGE = 1e300
# consecutive non-shrinking panels before a tail is called divergent
_GROWTH_ROUNDS_PER_STAGNATION = 10


class Status(str, Enum):
    FINITE = "finite"
    DIVERGENT = "divergent"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    truncation_growth_factor: float = 2.0
    divergence_threshold: float = 1e12
    stagnation_rounds: int = 3

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.truncation_growth_factor > 1:
            raise ValueError("truncation_growth_factor must exceed 1")
        if not self.divergence_threshold > 1:
            raise ValueError("divergence_threshold must exceed 1")
        if self.stagnation_rounds < 1:
            raise ValueError("stagnation_rounds must be >= 1")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegralOutcome:
    status: Status
    value: float = math.nan
    error_estimate: float = math.nan
    diagnostics: str = ""

    @property
    def is_finite(self) -> bool:
        return self.status is Status.FINITE


class QuadratureError(ValueError):
    """Integrand returned a non-finite value at an interior abscissa."""

    def __init__(self, abscissa: float, value: float):
        self.abscissa = float(abscissa)
        self.value = float(value)
        super().__init__(f"integrand is {value!r} at interior point x={abscissa!r}")


def _gk15(f: Integrand, a: float, b: float) -> tuple[float, float]:
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center + half * _NODES
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        i = int(np.flatnonzero(~np.isfinite(fx))[0])
        raise QuadratureError(x[i], fx[i])
    kronrod = float(np.dot(_KW, fx))
    gauss = float(np.dot(_GW, fx))
    resabs = float(np.dot(_KW, np.abs(fx)))
    mean = 0.5 * kronrod
    resasc = float(np.dot(_KW, np.abs(fx - mean)))
    err = abs((kronrod - gauss) * half)
    resasc *= abs(half)
    resabs *= abs(half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    if resabs > np.finfo(float).tiny / (50 * _EPS):
        err = max(50 * _EPS * resabs, err)
    return kronrod * half, float(err)


def _adaptive(f: Integrand, a: float, b: float, tol_abs: float, tol_rel: float,
              budget: int) -> tuple[float, float, int, bool]:
    """Globally adaptive GK15 on a finite interval.

    Returns (value, error, subdivisions used, converged).
    """
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val, err)]
    total, total_err = val, err
    used = 0
    while total_err > max(tol_abs, tol_rel * abs(total)):
        if used >= budget:
            return total, total_err, used, False
        _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            # interval exhausted at machine resolution
            heapq.heappush(heap, (0.0, lo, hi, v, e))
            return total, total_err, used, False
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        used += 1
        # re-sum to avoid drift from repeated subtraction
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(item[4] for item in heap)
    return total, total_err, used, True


def _geometric_edges(a: float, b: float) -> list[float]:
    """Edges splitting a very wide [a, b] geometrically from both ends, so
    mass concentrated near either end is resolved."""
    scale = max(1.0, min(abs(a), abs(b)))
    if b - a <= 64 * scale:
        return []
    mid = 0.5 * (a + b)
    edges = []
    step = scale
    while a + step < mid:
        edges.extend((a + step, b - step))
        step *= 2.0
    return edges


def _finite(f: Integrand, lo: float, hi: float, cfg: QuadratureConfig,
            points: Iterable[float]) -> IntegralOutcome:
    cuts = sorted(p for p in set(points) if lo < p < hi)
    edges = [lo]
    for b in cuts + [hi]:
        edges.extend(sorted(_geometric_edges(edges[-1], b)))
        edges.append(b)
    budget = cfg.max_subdivisions
    values, errors = [], []
    converged = True
    share = 1.0 / (len(edges) - 1)
    for a, b in zip(edges[:-1], edges[1:]):
        v, e, used, ok = _adaptive(f, a, b, cfg.abs_tol * share, 0.5 * cfg.rel_tol, budget)
        budget = max(budget - used, 0)
        converged &= ok
        values.append(v)
        errors.append(e)
    value, err = math.fsum(values), math.fsum(errors)
    if converged and err <= cfg.tolerance(value):
        return IntegralOutcome(Status.FINITE, value, err, f"{len(edges) - 1} piece(s)")
    return IntegralOutcome(Status.INCONCLUSIVE, value, err,
                           "tolerance not met within max_subdivisions")


def _upper_tail(f: Integrand, lo: float, cfg: QuadratureConfig) -> IntegralOutcome:
    """Progressive truncation over [lo, inf)."""
    scale = max(1.0, abs(lo))
    g = cfg.truncation_growth_factor
    budget = cfg.max_subdivisions
    partial, partial_err = 0.0, 0.0
    contributions: list[float] = []
    growth_run = 0
    growth_limit = _GROWTH_ROUNDS_PER_STAGNATION * cfg.stagnation_rounds
    left = lo
    k = 0
    while True:
        right = lo + scale * g ** k
        if not math.isfinite(right) or right > _MAX_EDGE:
            return IntegralOutcome(Status.INCONCLUSIVE, partial, partial_err,
                                   f"truncation reached {left:.3g} without stabilizing")
        tol_abs = cfg.abs_tol * 2.0 ** -(k + 2)
        try:
            v, e, used, ok = _adaptive(f, left, right, tol_abs, 0.25 * cfg.rel_tol, budget)
        except QuadratureError as exc:
            if math.isinf(exc.value) and exc.abscissa > lo:
                return IntegralOutcome(Status.DIVERGENT, math.inf, math.inf,
                                       f"integrand overflows at x={exc.abscissa:.6g}")
            raise
        budget = max(budget - used, 0)
        partial = partial + v
        partial_err += e
        if not math.isfinite(partial) or abs(partial) > cfg.divergence_threshold:
            return IntegralOutcome(Status.DIVERGENT, partial, math.inf,
                                   f"partial integral {partial:.4g} exceeds threshold "
                                   f"at truncation T={right:.6g}")
        if not ok:
            return IntegralOutcome(Status.INCONCLUSIVE, partial, partial_err,
                                   f"subdivision budget exhausted at T={right:.6g}")
        c = abs(v)
        if contributions and c > 0 and c >= contributions[-1] * (1 - 1e-3):
            growth_run += 1
        else:
            growth_run = 0
        contributions.append(c)
        if growth_run >= growth_limit:
            return IntegralOutcome(Status.DIVERGENT, partial, math.inf,
                                   f"panel contributions did not shrink over {growth_run} "
                                   f"rounds (T={right:.6g})")
        m = cfg.stagnation_rounds
        if len(contributions) > m:
            recent = contributions[-(m + 1):]
            shrinking = all(b <= a for a, b in zip(recent[:-1], recent[1:]))
            if shrinking:
                prev, last = recent[-2], recent[-1]
                ratio = 0.0 if prev == 0 else last / prev
                if ratio < 1:
                    # doubled geometric-series bound keeps the estimate conservative
                    tail = 2.0 * last * ratio / (1 - ratio)
                    err = partial_err + tail
                    if tail <= 0.25 * cfg.tolerance(partial) and err <= cfg.tolerance(partial):
                        return IntegralOutcome(Status.FINITE, partial, err,
                                               f"{k + 1} truncation panels, T={right:.6g}")
        left = right
        k += 1


def _combine(parts: list[IntegralOutcome], cfg: QuadratureConfig) -> IntegralOutcome:
    diag = "; ".join(p.diagnostics for p in parts if p.diagnostics)
    if any(p.status is Status.DIVERGENT for p in parts):
        return IntegralOutcome(Status.DIVERGENT, math.inf, math.inf, diag)
    value = math.fsum(p.value for p in parts)
    err = math.fsum(p.error_estimate for p in parts)
    if all(p.is_finite for p in parts) and err <= cfg.tolerance(value):
        return IntegralOutcome(Status.FINITE, value, err, diag)
    return IntegralOutcome(Status.INCONCLUSIVE, value, err, diag)


def integrate(f: Integrand, lo: float, hi: float, cfg: QuadratureConfig | None = None,
              points: Iterable[float] = ()) -> IntegralOutcome:
    """Integrate ``f`` over ``(lo, hi)``; either end may be infinite.

    ``points`` are interior breakpoints (kinks, jumps) to split at.  The
    integrand is never evaluated at a finite endpoint, so integrable endpoint
    singularities are allowed.

    Raises :class:`QuadratureError` when ``f`` returns NaN (or overflows on a
    finite range) at an interior point.
    """
    cfg = cfg or QuadratureConfig()
    lo, hi = float(lo), float(hi)
    points = [float(p) for p in points]
    if math.isnan(lo) or math.isnan(hi):
        raise ValueError("integration limits must not be NaN")
    if lo == hi:
        return IntegralOutcome(Status.FINITE, 0.0, 0.0, "empty interval")
    if lo > hi:
        out = integrate(f, hi, lo, cfg, points)
        return IntegralOutcome(out.status, -out.value, out.error_estimate, out.diagnostics)

    if math.isfinite(lo) and math.isfinite(hi):
        return _finite(f, lo, hi, cfg, points)

    if math.isinf(lo) and math.isinf(hi):
        split = 0.0
        return _combine([integrate(f, lo, split, cfg, points),
                         integrate(f, split, hi, cfg, points)], cfg)

    if math.isinf(lo):
        # mirror onto (-hi, inf)
        def mirrored(y):
            return f(-y)
        return integrate(mirrored, -hi, math.inf, cfg, [-p for p in points])

    # [lo, inf): exact pieces up to the last breakpoint, then truncation
    inner = [p for p in points if p > lo]
    if inner:
        base = max(inner)
        try:
            head = _finite(f, lo, base, cfg, inner)
        except QuadratureError as exc:
            # same rule as inside a truncation panel: overflow away from lo
            if exc.value == math.inf and exc.abscissa > lo:
                return IntegralOutcome(Status.DIVERGENT, math.inf, math.inf,
                                       f"integrand overflows at x={exc.abscissa:.6g}")
            raise
        return _combine([head, _upper_tail(f, base, cfg)], cfg)
    return _upper_tail(f, lo, cfg)


def detect_divergence(f: Integrand, lo: float, cfg: QuadratureConfig | None = None) -> Status:
    """Return ``Status.DIVERGENT`` or ``Status.FINITE`` ("finite so far")
    for the integral of ``f`` over ``(lo, inf)``."""
    out = integrate(f, lo, math.inf, cfg)
    return Status.DIVERGENT if out.status is Status.DIVERGENT else Status.FINITE
