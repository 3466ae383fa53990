"""Numerical evidence for MGF convergence along a distribution family.

For a family F_n with candidate limit F and an interval (a, b) of t values,
MGF convergence M_n(t) -> M(t) on (a, b) holds exactly when

(a) sup_n M_n(t) is finite for every t in (a, b), and
(b) F_n converges weakly to F and M(t) exists on (a, b).

This module grades both conditions and the convergence itself on finite
grids and cross-checks them.  Every verdict is evidence over a finite set of
indices, never a proof.

Weak convergence is measured by the sup-distance between CDFs; for a
continuous limit, weak convergence is equivalent to uniform convergence, so
the sup-distance must go to zero.
"""

from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .distributions import Continuity, DistributionFamily, DistributionModel
from .mgf import Interval, existence_scan, mgf, mgf_via_density, mgf_via_tail, transformed_cdf
from .quadrature import QuadratureConfig, Status
from .values import MgfValue, Route

__all__ = [
    "Verdict",
    "Consistency",
    "GridPolicy",
    "LabConfig",
    "SupDistance",
    "ConditionVerdict",
    "ConvergenceReport",
    "Theorem2Row",
    "Theorem2Table",
    "cdf_grid",
    "sup_distance",
    "check_condition_a",
    "check_condition_b",
    "theorem1_report",
    "theorem2_demo",
]

FINITE_EVIDENCE = "evidence over a finite index set, not a proof"


class Verdict(str, Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


class Consistency(str, Enum):
    CONSISTENT = "consistent"
    CONTRADICTION = "contradiction_flagged"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GridPolicy:
    """Evaluation grid for sup-distances: a geometric grid over the joint
    support (per sign), plus quantiles at k/quantile_levels of each model,
    plus support edges and breakpoints."""

    geometric_points: int = 2000
    quantile_levels: int = 200
    smallest_magnitude: float = 1e-6
    fallback_extent: float = 1e6
    tail_probability: float = 1e-12


@dataclass(frozen=True)
class LabConfig:
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    mgf_tol: float = 1e-2
    weak_tol: float = 1e-2
    # Satisfied boundedness: last value <= median * growth_margin
    growth_margin: float = 2.0
    # Violated boundedness: last > growth_factor * first, rising over last three
    growth_factor: float = 10.0
    unbounded_threshold: float = 1e12
    # allowed relative uptick when checking that distances decrease
    slack: float = 0.10
    grid: GridPolicy = field(default_factory=GridPolicy)
    probe_points: tuple[float, ...] = (-1.0, 0.0, 1.0)
    max_workers: int | None = None

    def __post_init__(self):
        if not (self.mgf_tol > 0 and self.weak_tol > 0 and self.slack >= 0):
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class SupDistance:
    value: float
    arg_x: float


@dataclass(frozen=True)
class ConditionVerdict:
    status: Verdict
    evidence: tuple[dict, ...]
    note: str

    def __post_init__(self):
        if self.status is not Verdict.INCONCLUSIVE and not self.evidence:
            raise ValueError("satisfied/violated verdicts need an evidence table")

    def to_dict(self) -> dict:
        return {"status": self.status.value, "evidence": [dict(r) for r in self.evidence],
                "note": self.note}


def _extent(models: Sequence[DistributionModel], policy: GridPolicy) -> tuple[float, float]:
    los, his = [], []
    for m in models:
        lo, hi = m.support_lo, m.support_hi
        if math.isinf(lo):
            lo = (float(m.quantile(policy.tail_probability)) if m.has_quantile
                  else -policy.fallback_extent)
        if math.isinf(hi):
            hi = (float(m.quantile(1 - policy.tail_probability)) if m.has_quantile
                  else policy.fallback_extent)
        los.append(lo)
        his.append(hi)
    return min(los), max(his)


def cdf_grid(models: Sequence[DistributionModel], policy: GridPolicy | None = None) -> np.ndarray:
    """Sorted evaluation grid shared by ``models`` (order-independent)."""
    policy = policy or GridPolicy()
    lo, hi = _extent(models, policy)
    n = policy.geometric_points
    parts = []
    if hi > 0:
        start = lo if lo > 0 else min(policy.smallest_magnitude, hi * policy.smallest_magnitude)
        parts.append(np.geomspace(start, hi, n))
    if lo < 0:
        stop = -hi if hi < 0 else min(policy.smallest_magnitude, -lo * policy.smallest_magnitude)
        parts.append(-np.geomspace(stop, -lo, n))
    if lo <= 0 <= hi:
        parts.append(np.array([0.0]))
    special = []
    for m in models:
        for p in (m.support_lo, m.support_hi, *m.breakpoints):
            if math.isfinite(p):
                special.extend((np.nextafter(p, -np.inf), p, np.nextafter(p, np.inf)))
        if m.has_quantile and policy.quantile_levels > 1:
            k = np.arange(1, policy.quantile_levels)
            special.extend(np.asarray(m.quantile(k / policy.quantile_levels), dtype=float))
    parts.append(np.asarray(special, dtype=float))
    grid = np.unique(np.concatenate(parts))
    return grid[np.isfinite(grid)]


def sup_distance(model_a: DistributionModel, model_b: DistributionModel,
                 grid_policy: GridPolicy | None = None) -> SupDistance:
    """max |F_a - F_b| over the merged grid, including left limits."""
    x = cdf_grid([model_a, model_b], grid_policy)
    right = np.abs(np.asarray(model_a.cdf(x)) - np.asarray(model_b.cdf(x)))
    left = np.abs(np.asarray(model_a.cdf_left(x)) - np.asarray(model_b.cdf_left(x)))
    gap = np.maximum(right, left)
    i = int(np.argmax(gap))
    return SupDistance(float(gap[i]), float(x[i]))


def _decreasing(values: Sequence[float], slack: float, allowance: Sequence[float] = ()) -> bool:
    allowance = list(allowance) or [0.0] * len(values)
    return all(b <= a * (1 + slack) + 1e-12 + e
               for a, b, e in zip(values[:-1], values[1:], allowance[1:]))


def _grade_boundedness(values: Sequence[MgfValue], cfg: LabConfig) -> tuple[Verdict, str]:
    if any(v.status is Status.DIVERGENT for v in values):
        return Verdict.VIOLATED, "M_n(t) is infinite for some n"
    finite = [v.value for v in values if v.is_finite]
    # inconclusive values are lower bounds (partial sums, overflow), so they count here
    if any(v.value > cfg.unbounded_threshold for v in values):
        return Verdict.VIOLATED, f"M_n(t) exceeds {cfg.unbounded_threshold:g}"
    if len(finite) < len(values):
        return Verdict.INCONCLUSIVE, "some M_n(t) could not be classified"
    if (len(finite) >= 3 and finite[-1] > cfg.growth_factor * finite[0]
            and finite[-3] < finite[-2] < finite[-1]):
        return Verdict.VIOLATED, "M_n(t) grows along the index set"
    if finite[-1] <= statistics.median(finite) * cfg.growth_margin:
        return Verdict.SATISFIED, "M_n(t) finite with no growth trend"
    return Verdict.INCONCLUSIVE, "M_n(t) finite but the trend is unclear"


def _mgf_cells(family: DistributionFamily, n_set: Sequence[int], t_grid: Sequence[float],
               cfg: LabConfig) -> dict[tuple[int, float], MgfValue]:
    keys = [(n, t) for n in n_set for t in t_grid]

    def cell(key):
        n, t = key
        return mgf(family.member(n), t, cfg.quadrature, family.mgf_route)

    if cfg.max_workers and cfg.max_workers > 1:
        with ThreadPoolExecutor(cfg.max_workers) as pool:
            results = list(pool.map(cell, keys))
    else:
        results = [cell(k) for k in keys]
    return dict(zip(keys, results))


def _n_set(family: DistributionFamily, n_set: Iterable[int] | None) -> tuple[int, ...]:
    ns = tuple(sorted(set(int(n) for n in (n_set or family.index_set))))
    if not ns or ns[0] < 1:
        raise ValueError("n_set must be a nonempty set of positive integers")
    return ns


def _row(n: int, t: float, v: MgfValue) -> dict:
    return {"n": n, "t": t, "status": v.status.value, "value": v.value,
            "error_estimate": v.error_estimate}


def check_condition_a(family: DistributionFamily, t: float, n_set: Iterable[int] | None = None,
                      cfg: LabConfig | None = None) -> ConditionVerdict:
    """Grade boundedness of M_n(t) over ``n_set`` at one ``t``."""
    cfg = cfg or LabConfig()
    ns = _n_set(family, n_set)
    cells = _mgf_cells(family, ns, [float(t)], cfg)
    values = [cells[(n, float(t))] for n in ns]
    status, why = _grade_boundedness(values, cfg)
    evidence = tuple(_row(n, float(t), v) for n, v in zip(ns, values))
    return ConditionVerdict(status, evidence, f"{why}; {FINITE_EVIDENCE}")


def _escape_note(family: DistributionFamily, ns: Sequence[int], probes) -> tuple[tuple, str]:
    rows = []
    for n in ns:
        member = family.member(n)
        for x in probes:
            rows.append({"n": n, "x": float(x), "F_n": float(member.cdf(x))})
    last = [r["F_n"] for r in rows if r["n"] == ns[-1]]
    if all(v >= 1 - 1e-12 for v in last):
        note = "no proper weak limit: F_n(x) -> 1 at every probe, mass escapes to -infinity"
    elif all(v <= 1e-12 for v in last):
        note = "no proper weak limit: F_n(x) -> 0 at every probe, mass escapes to +infinity"
    else:
        note = "no declared weak limit"
    return tuple(rows), note


def _weak_verdict(family: DistributionFamily, interval: Interval, ns: Sequence[int],
                  tol: float, cfg: LabConfig,
                  distances: dict[int, SupDistance]) -> ConditionVerdict:
    if family.declared_limit is None:
        rows, note = _escape_note(family, ns, cfg.probe_points)
        return ConditionVerdict(Verdict.VIOLATED, rows, f"{note}; {FINITE_EVIDENCE}")
    d = [distances[n].value for n in ns]
    rows = [{"n": n, "sup_distance": distances[n].value, "arg_x": distances[n].arg_x}
            for n in ns]
    scan = existence_scan(family.declared_limit, interval.interior_grid(9), cfg.quadrature)
    for t, s in scan.items():
        rows.append({"t": t, "limit_mgf_status": s.value})
    rows = tuple(rows)
    if any(s is Status.DIVERGENT for s in scan.values()):
        return ConditionVerdict(Verdict.VIOLATED, rows,
                                f"limit MGF is infinite inside the interval; {FINITE_EVIDENCE}")
    shrinking = _decreasing(d, cfg.slack)
    small = d[-1] < tol
    if not (shrinking and small):
        why = []
        if not shrinking:
            why.append("sup-distance does not decrease")
        if not small:
            why.append(f"sup-distance {d[-1]:.3g} >= {tol:g} at n={ns[-1]}")
        return ConditionVerdict(Verdict.VIOLATED, rows, "; ".join(why) + f"; {FINITE_EVIDENCE}")
    if any(s is not Status.FINITE for s in scan.values()):
        return ConditionVerdict(Verdict.INCONCLUSIVE, rows,
                                "limit MGF could not be classified on the whole interval")
    return ConditionVerdict(Verdict.SATISFIED, rows,
                            f"sup-distance decreases to {d[-1]:.3g} < {tol:g} and the limit "
                            f"MGF is finite on the interval; {FINITE_EVIDENCE}")


def _distances(family: DistributionFamily, ns: Sequence[int],
               cfg: LabConfig) -> dict[int, SupDistance]:
    if family.declared_limit is None:
        return {}
    return {n: sup_distance(family.member(n), family.declared_limit, cfg.grid) for n in ns}


def check_condition_b(family: DistributionFamily, interval: Interval | tuple[float, float],
                      tol: float | None = None, cfg: LabConfig | None = None,
                      n_set: Iterable[int] | None = None) -> ConditionVerdict:
    """Grade weak convergence to the declared limit and existence of its MGF."""
    cfg = cfg or LabConfig()
    interval = interval if isinstance(interval, Interval) else Interval(*interval)
    tol = cfg.weak_tol if tol is None else tol
    ns = _n_set(family, n_set)
    return _weak_verdict(family, interval, ns, tol, cfg, _distances(family, ns, cfg))


@dataclass(frozen=True)
class ConvergenceReport:
    family: str
    interval: Interval
    t_grid: tuple[float, ...]
    n_set: tuple[int, ...]
    mgf_table: dict[tuple[int, float], MgfValue] = field(repr=False)
    limit_mgf: dict[float, MgfValue] = field(repr=False)
    sup_distance_by_n: dict[int, SupDistance]
    condition_a: ConditionVerdict
    condition_b: ConditionVerdict
    mgf_convergence: ConditionVerdict
    consistency: Consistency
    notes: tuple[str, ...] = ()

    def mgf_rows(self) -> list[dict]:
        rows = [{"family": self.family, **_row(n, t, self.mgf_table[(n, t)])}
                for n, t in sorted(self.mgf_table)]
        return rows

    def to_dict(self) -> dict:
        return _clean({
            "family": self.family,
            "interval": [self.interval.a, self.interval.b],
            "t_grid": list(self.t_grid),
            "n_set": list(self.n_set),
            "mgf_table": self.mgf_rows(),
            "limit_mgf": [{"t": t, "status": v.status.value, "value": v.value,
                           "error_estimate": v.error_estimate, "route": v.route.value}
                          for t, v in sorted(self.limit_mgf.items())],
            "sup_distance_by_n": [{"n": n, "sup_distance": d.value, "arg_x": d.arg_x}
                                  for n, d in sorted(self.sup_distance_by_n.items())],
            "condition_a": self.condition_a.to_dict(),
            "condition_b": self.condition_b.to_dict(),
            "mgf_convergence": self.mgf_convergence.to_dict(),
            "consistency": self.consistency.value,
            "notes": list(self.notes),
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings, numpy scalars plain."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _aggregate_a(cells, ns, t_grid, cfg) -> ConditionVerdict:
    rows, grades = [], []
    for t in t_grid:
        values = [cells[(n, t)] for n in ns]
        status, why = _grade_boundedness(values, cfg)
        grades.append(status)
        finite = [v.value for v in values if v.is_finite]
        rows.append({"t": t, "status": status.value, "reason": why,
                     "max_value": max(finite) if len(finite) == len(values) else math.inf,
                     "last_value": values[-1].value})
    if Verdict.VIOLATED in grades:
        status = Verdict.VIOLATED
    elif all(g is Verdict.SATISFIED for g in grades):
        status = Verdict.SATISFIED
    else:
        status = Verdict.INCONCLUSIVE
    return ConditionVerdict(status, tuple(rows), f"sup over n of M_n(t) checked per t; "
                                                 f"{FINITE_EVIDENCE}")


def _limit_values(family: DistributionFamily, t_grid, cfg) -> dict[float, MgfValue]:
    limit = family.declared_limit
    if limit is None:
        return {}
    route = family.mgf_route
    if route is Route.CLOSED_FORM and limit.closed_form_mgf(0.0) is None:
        route = None
    return {t: mgf(limit, t, cfg.quadrature, route) for t in t_grid}


def _grade_convergence(cells, limit_vals, ns, t_grid, cfg) -> ConditionVerdict:
    values = list(cells.values())
    if any(v.status is Status.DIVERGENT for v in values):
        bad = sorted({n for (n, t), v in cells.items() if v.status is Status.DIVERGENT})
        rows = tuple({"n": n, "status": "divergent"} for n in bad)
        return ConditionVerdict(Verdict.VIOLATED, rows,
                                f"M_n(t) does not exist for some (n, t); {FINITE_EVIDENCE}")
    if not limit_vals:
        grades = [_grade_boundedness([cells[(n, t)] for n in ns], cfg)[0] for t in t_grid]
        rows = tuple({"t": t, "last_value": cells[(ns[-1], t)].value, "boundedness": g.value}
                     for t, g in zip(t_grid, grades))
        if Verdict.VIOLATED in grades:
            return ConditionVerdict(Verdict.VIOLATED, rows,
                                    f"M_n(t) is unbounded in n, so it cannot converge; "
                                    f"{FINITE_EVIDENCE}")
        return ConditionVerdict(Verdict.INCONCLUSIVE, rows, "no declared limit to compare with")
    if any(v.status is Status.DIVERGENT for v in limit_vals.values()):
        rows = tuple({"t": t, "limit_status": v.status.value} for t, v in limit_vals.items())
        return ConditionVerdict(Verdict.VIOLATED, rows, "limit MGF is infinite on the grid")
    if (any(not v.is_finite for v in values)
            or any(not v.is_finite for v in limit_vals.values())):
        return ConditionVerdict(Verdict.INCONCLUSIVE, (), "some MGF values are inconclusive")
    gaps, errs, rows = [], [], []
    for n in ns:
        diffs = [(abs(cells[(n, t)].value - limit_vals[t].value),
                  cells[(n, t)].error_estimate + limit_vals[t].error_estimate, t) for t in t_grid]
        gap, err, arg_t = max(diffs)
        gaps.append(gap)
        errs.append(err)
        rows.append({"n": n, "max_gap": gap, "arg_t": arg_t, "error_bound": err})
    rows = tuple(rows)
    shrinking = _decreasing(gaps, cfg.slack, errs)
    if shrinking and gaps[-1] < cfg.mgf_tol:
        return ConditionVerdict(Verdict.SATISFIED, rows,
                                f"max_t |M_n(t) - M(t)| decreases to {gaps[-1]:.3g} "
                                f"< {cfg.mgf_tol:g}; {FINITE_EVIDENCE}")
    if shrinking:
        return ConditionVerdict(Verdict.INCONCLUSIVE, rows,
                                f"gap decreasing but still {gaps[-1]:.3g} >= {cfg.mgf_tol:g}")
    return ConditionVerdict(Verdict.VIOLATED, rows,
                            f"max_t |M_n(t) - M(t)| does not decrease; {FINITE_EVIDENCE}")


def _consistency(a: ConditionVerdict, b: ConditionVerdict, conv: ConditionVerdict) -> Consistency:
    both = a.status is Verdict.SATISFIED and b.status is Verdict.SATISFIED
    if both and conv.status is Verdict.VIOLATED:
        return Consistency.CONTRADICTION
    if conv.status is Verdict.SATISFIED and Verdict.VIOLATED in (a.status, b.status):
        return Consistency.CONTRADICTION
    return Consistency.CONSISTENT


def theorem1_report(family: DistributionFamily, interval: Interval | tuple[float, float],
                    t_grid: Iterable[float] | None = None, n_set: Iterable[int] | None = None,
                    cfg: LabConfig | None = None) -> ConvergenceReport:
    """Tabulate M_n(t), grade conditions (a), (b) and MGF convergence, and
    flag any disagreement between the two sides of the equivalence."""
    cfg = cfg or LabConfig()
    interval = interval if isinstance(interval, Interval) else Interval(*interval)
    grid = tuple(sorted(float(t) for t in (t_grid if t_grid is not None
                                           else interval.interior_grid(9))))
    if not grid:
        raise ValueError("t_grid must be nonempty")
    outside = [t for t in grid if t not in interval]
    if outside:
        raise ValueError(f"t_grid points {outside} lie outside ({interval.a}, {interval.b})")
    ns = _n_set(family, n_set)

    cells = _mgf_cells(family, ns, grid, cfg)
    limit_vals = _limit_values(family, grid, cfg)
    distances = _distances(family, ns, cfg)

    cond_a = _aggregate_a(cells, ns, grid, cfg)
    cond_b = _weak_verdict(family, interval, ns, cfg.weak_tol, cfg, distances)
    conv = _grade_convergence(cells, limit_vals, ns, grid, cfg)
    return ConvergenceReport(
        family=family.family_id,
        interval=interval,
        t_grid=grid,
        n_set=ns,
        mgf_table=cells,
        limit_mgf=limit_vals,
        sup_distance_by_n=distances,
        condition_a=cond_a,
        condition_b=cond_b,
        mgf_convergence=conv,
        consistency=_consistency(cond_a, cond_b, conv),
        notes=family.notes,
    )


@dataclass(frozen=True)
class Theorem2Row:
    n: int
    sup_distance: float
    arg_x: float
    tail_mgf: MgfValue
    density_mgf: MgfValue | None

    @property
    def route_gap(self) -> float:
        if self.density_mgf is None or not (self.tail_mgf.is_finite
                                            and self.density_mgf.is_finite):
            return math.nan
        return abs(self.tail_mgf.value - self.density_mgf.value)

    def to_dict(self) -> dict:
        d = self.density_mgf
        return {"n": self.n, "sup_distance": self.sup_distance, "arg_x": self.arg_x,
                "tail_status": self.tail_mgf.status.value, "tail_mgf": self.tail_mgf.value,
                "tail_error": self.tail_mgf.error_estimate,
                "density_mgf": d.value if d is not None else math.nan,
                "density_error": d.error_estimate if d is not None else math.nan,
                "route_gap": self.route_gap}


@dataclass(frozen=True)
class Theorem2Table:
    family: str
    t: float
    rows: tuple[Theorem2Row, ...]
    limit_tail_mgf: MgfValue

    def to_dict(self) -> dict:
        return _clean({"family": self.family, "t": self.t,
                       "rows": [r.to_dict() for r in self.rows],
                       "limit_tail_mgf": {"status": self.limit_tail_mgf.status.value,
                                          "value": self.limit_tail_mgf.value,
                                          "error_estimate": self.limit_tail_mgf.error_estimate}})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def theorem2_demo(family: DistributionFamily, t: float, n_set: Iterable[int] | None = None,
                  x_grid_policy: GridPolicy | None = None,
                  cfg: LabConfig | None = None) -> Theorem2Table:
    """Uniform convergence of G_n(t, .) to G(t, .) and the tail formula.

    For each n: sup over x of |G_n(t, x) - G(t, x)| with G_n(t, x) =
    P(exp(t X_n) <= x), the tail integral of 1 - G_n(t, .), and the density
    route for comparison.
    """
    cfg = cfg or LabConfig()
    t = float(t)
    if t == 0:
        raise ValueError("t must be nonzero")
    limit = family.declared_limit
    if limit is None or limit.continuity is not Continuity.CONTINUOUS:
        raise ValueError("uniform-convergence demo needs a continuous declared limit")
    ns = _n_set(family, n_set)
    policy = x_grid_policy or cfg.grid
    rows = []
    for n in ns:
        member = family.member(n)
        if member.continuity is not Continuity.CONTINUOUS:
            raise ValueError(f"member n={n} ({member.model_id}) is not continuous; "
                             "uniform convergence of G_n needs continuous distributions")
        with np.errstate(over="ignore"):
            x = np.exp(t * cdf_grid([member, limit], policy))
        x = np.unique(x[np.isfinite(x) & (x > 0)])
        gap = np.abs(np.asarray(transformed_cdf(member, t, x))
                     - np.asarray(transformed_cdf(limit, t, x)))
        i = int(np.argmax(gap))
        tail = mgf_via_tail(member, t, cfg.quadrature)
        dens = mgf_via_density(member, t, cfg.quadrature) if member.has_density else None
        rows.append(Theorem2Row(n, float(gap[i]), float(x[i]), tail, dens))
    return Theorem2Table(family.family_id, t, tuple(rows),
                         mgf_via_tail(limit, t, cfg.quadrature))
