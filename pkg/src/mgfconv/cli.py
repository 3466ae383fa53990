"""Command-line front end.

    mgfconv mgf --model frechet --t -1
    mgfconv scan --model lognormal --t-grid -1:1:5
    mgfconv converge --family pareto_to_frechet --t-grid -0.9:-0.1:3 --n-set 10,100,1000
    mgfconv theorem1 --family pareto_to_frechet --interval -1,0
    mgfconv theorem2 --family pareto_to_frechet --t -1 --n-set 10,100,1000
    mgfconv mc --model frechet --count 1000000 --seed 7 --t -1

Reports go to ``--output``, else to ``$MGFCONV_OUTPUT_DIR/<command>.<ext>``
when that variable is set, else to stdout.  Exit status: 0 success,
1 evaluation or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .convergence import (
    LabConfig,
    _clean,
    sup_distance,
    theorem1_report,
    theorem2_demo,
)
from .distributions import (
    DistributionFamily,
    NoQuantileError,
    TabulatedCdfError,
    make_family,
    parse_model,
)
from .mgf import Interval, MgfEvaluationError, mgf
from .montecarlo import empirical_cdf_distance, empirical_mgf, sample
from .quadrature import QuadratureConfig, QuadratureError

__all__ = ["main", "run", "parse_grid", "parse_n_set", "format_number"]

OUTPUT_DIR_ENV = "MGFCONV_OUTPUT_DIR"
DEFAULT_SEED = 20070101

_VALUE_FLAGS = {"--t", "--t-grid", "--interval", "--n-set", "--seed", "--model", "--limit"}


class UsageError(Exception):
    pass


def format_number(v) -> str:
    """Shortest round-tripping text; integral floats drop the ``.0``."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    text = repr(v)
    if text.endswith(".0"):
        text = text[:-2]
    return text


def parse_grid(text: str) -> list[float]:
    """``lo:hi:count`` (inclusive, equispaced) or a comma list of numbers."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
            if count < 1 or not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError
            if count == 1:
                return [lo]
            if hi < lo:
                raise ValueError
            return [float(f"{v:.12g}") for v in np.linspace(lo, hi, count)]
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed grid {text!r}: expected lo:hi:count or a comma list") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise UsageError(f"malformed grid {text!r}: expected lo:hi:count or a comma list")
    return sorted(set(values))


def parse_n_set(text: str) -> list[int]:
    """Comma list of positive integers or ``logspace:lo:hi:count``."""
    try:
        if text.startswith("logspace:"):
            _, lo, hi, count = text.split(":")
            lo, hi, count = float(lo), float(hi), int(count)
            if lo <= 0 or hi < lo or count < 1:
                raise ValueError
            values = [int(round(v)) for v in np.geomspace(lo, hi, count)]
        else:
            values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed n-set {text!r}: expected comma list or "
                         "logspace:lo:hi:count") from None
    if not values or min(values) < 1:
        raise UsageError(f"malformed n-set {text!r}: indices must be positive integers")
    return sorted(set(values))


def _parse_interval(text: str) -> Interval:
    try:
        a, b = (float(v) for v in text.split(","))
        return Interval(a, b)
    except ValueError:
        raise UsageError(f"malformed interval {text!r}: expected a,b with a < b") from None


def _model(text: str):
    try:
        return parse_model(text)
    except TabulatedCdfError as exc:
        raise UsageError(f"cannot load tabulated model: {exc}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _family(args) -> DistributionFamily:
    params = {}
    if args.n_set:
        params["index_set"] = parse_n_set(args.n_set)
    if args.limit:
        params["declared_limit"] = _model(args.limit)
    name = args.family
    if name.startswith("constant:"):
        params["model"] = _model(name.partition(":")[2])
        name = "constant"
    try:
        return make_family(name, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([c if isinstance(c, str) else format_number(c) for c in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _cfg(args) -> LabConfig:
    try:
        quad = QuadratureConfig(abs_tol=args.abs_tol, rel_tol=args.rel_tol)
        return LabConfig(quadrature=quad, mgf_tol=args.mgf_tol, weak_tol=args.weak_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_mgf(args, cfg):
    model = _model(args.model)
    v = mgf(model, args.t, cfg.quadrature, args.route)
    if args.format == "json":
        return _json({"model": args.model, "t": args.t, "status": v.status.value,
                      "value": v.value, "error_estimate": v.error_estimate,
                      "route": v.route.value})
    return _csv(["model", "t", "status", "value", "error_estimate"],
                [[args.model, args.t, v.status.value, v.value, v.error_estimate]])


def _cmd_scan(args, cfg):
    model = _model(args.model)
    grid = parse_grid(args.t_grid)
    rows = []
    for t in grid:
        v = mgf(model, t, cfg.quadrature, args.route)
        rows.append([args.model, t, v.status.value, v.value, v.error_estimate])
    if args.format == "json":
        keys = ["model", "t", "status", "value", "error_estimate"]
        return _json([dict(zip(keys, r)) for r in rows])
    return _csv(["model", "t", "status", "value", "error_estimate"], rows)


def _cmd_converge(args, cfg):
    family = _family(args)
    grid = parse_grid(args.t_grid)
    ns = family.index_set
    mgf_rows = []
    for n in ns:
        member = family.member(n)
        for t in grid:
            v = mgf(member, t, cfg.quadrature, family.mgf_route)
            mgf_rows.append([family.family_id, n, t, v.status.value, v.value, v.error_estimate])
    dist_rows = []
    if family.declared_limit is not None:
        for n in ns:
            d = sup_distance(family.member(n), family.declared_limit, cfg.grid)
            dist_rows.append([n, d.value, d.arg_x])
    if args.format == "json":
        keys = ["family", "n", "t", "status", "value", "error_estimate"]
        return _json({"mgf_table": [dict(zip(keys, r)) for r in mgf_rows],
                      "sup_distance": [dict(zip(["n", "sup_distance", "arg_x"], r))
                                       for r in dist_rows]})
    if args.table == "distance":
        return _csv(["n", "sup_distance", "arg_x"], dist_rows)
    return _csv(["family", "n", "t", "status", "value", "error_estimate"], mgf_rows)


def _cmd_theorem1(args, cfg):
    family = _family(args)
    interval = _parse_interval(args.interval)
    grid = parse_grid(args.t_grid) if args.t_grid else None
    if grid is not None and any(t not in interval for t in grid):
        raise UsageError("t-grid must lie strictly inside the interval")
    report = theorem1_report(family, interval, grid, None, cfg)
    if args.format == "csv":
        rows = [[r["family"], r["n"], r["t"], r["status"], r["value"], r["error_estimate"]]
                for r in report.mgf_rows()]
        return _csv(["family", "n", "t", "status", "value", "error_estimate"], rows)
    return report.to_json()


def _cmd_theorem2(args, cfg):
    family = _family(args)
    try:
        table = theorem2_demo(family, args.t, None, None, cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        return table.to_json()
    rows = [[r.n, r.sup_distance, r.arg_x, r.tail_mgf.status.value, r.tail_mgf.value,
             r.density_mgf.value if r.density_mgf else math.nan, r.route_gap]
            for r in table.rows]
    return _csv(["n", "sup_distance", "arg_x", "tail_status", "tail_mgf", "density_mgf",
                 "route_gap"], rows)


def _cmd_mc(args, cfg):
    model = _model(args.model)
    batch = sample(model, args.count, args.seed)
    if batch.count == 0:
        raise UsageError("--count must be positive")
    ks = empirical_cdf_distance(batch, model)
    grid = parse_grid(args.t_grid) if args.t_grid else [args.t]
    rows = []
    for t in grid:
        v = empirical_mgf(batch, t)
        rows.append([args.model, args.seed, batch.count, t, v.status.value, v.value,
                     v.error_estimate, ks])
    header = ["model", "seed", "count", "t", "status", "estimate", "std_error", "ks_distance"]
    if args.format == "json":
        return _json([dict(zip(header, r)) for r in rows])
    return _csv(header, rows)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgfconv",
                                     description="One-sided MGF evaluation and convergence checks")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="report path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--abs-tol", type=float, default=1e-10)
    common.add_argument("--rel-tol", type=float, default=1e-8)
    common.add_argument("--mgf-tol", type=float, default=1e-2)
    common.add_argument("--weak-tol", type=float, default=1e-2)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mgf", parents=[common], help="evaluate M(t) for one model")
    p.add_argument("--model", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--route", choices=["density", "tail", "closed_form"])

    p = sub.add_parser("scan", parents=[common], help="classify M(t) over a t-grid")
    p.add_argument("--model", required=True)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--route", choices=["density", "tail", "closed_form"])

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", required=True,
                     help="pareto_to_frechet, degenerate_drift, clt_exponential, constant:<model>")
    fam.add_argument("--n-set")
    fam.add_argument("--limit", help="override the declared limit model")

    p = sub.add_parser("converge", parents=[common, fam], help="tabulate M_n(t) over a family")
    p.add_argument("--t-grid", required=True)
    p.add_argument("--table", choices=["mgf", "distance"], default="mgf")

    p = sub.add_parser("theorem1", parents=[common, fam],
                       help="conditions (a), (b) and MGF convergence report")
    p.add_argument("--interval", required=True)
    p.add_argument("--t-grid")

    p = sub.add_parser("theorem2", parents=[common, fam],
                       help="uniform convergence of G_n and the tail formula")
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("mc", parents=[common], help="seeded Monte Carlo oracle")
    p.add_argument("--model", required=True)
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--t-grid")
    return parser


_COMMANDS = {
    "mgf": (_cmd_mgf, "csv"),
    "scan": (_cmd_scan, "csv"),
    "converge": (_cmd_converge, "csv"),
    "theorem1": (_cmd_theorem1, "json"),
    "theorem2": (_cmd_theorem2, "csv"),
    "mc": (_cmd_mc, "csv"),
}


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Let ``--interval -1,0`` and ``--t-grid -1:1:5`` through argparse,
    which otherwise reads the value as an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = _build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler, default_format = _COMMANDS[args.command]
    args.format = args.format or default_format
    try:
        cfg = _cfg(args)
        text = handler(args, cfg)
    except UsageError as exc:
        print(f"mgfconv {args.command}: usage error: {exc}", file=stderr)
        return 2
    except (MgfEvaluationError, QuadratureError, NoQuantileError, ValueError) as exc:
        print(f"mgfconv {args.command}: evaluation failed: {exc}", file=stderr)
        return 1

    target = args.output
    if target is None and os.environ.get(OUTPUT_DIR_ENV):
        target = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{args.command}.{args.format}")
    if target is None:
        stdout.write(text)
        return 0
    try:
        Path(target).write_text(text)
    except OSError as exc:
        print(f"mgfconv {args.command}: cannot write output {target!r}: {exc}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
