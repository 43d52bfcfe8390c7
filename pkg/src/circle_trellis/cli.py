"""Command-line front end for circle arrangement areas and coverage sweeps.

Exit codes: 0 success, 2 invalid input, 3 internal consistency failure
(or monotonicity violations in a coverage sweep).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np
from scipy.stats import norm

from . import __version__
from .coverage import RadioParams, sweep
from .geometry import GeometryError
from .oracles import bounding_box, mc_area_table, plan_samples
from .report import AreaReportDocument, CircleSetDocument, ParseError, tolerance_from
from .trellis import TrellisError, compute_all

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONSISTENCY = 3

log = logging.getLogger("circle_trellis")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        Path(path).write_text(text + "\n")


def _mc_annotation(table, epsilon, confidence, seed, min_fraction, max_points):
    box = bounding_box(table.circles)
    box_area = (box[2] - box[0]) * (box[3] - box[1])
    smallest = min(table.exclusive.values()) / box_area if table.exclusive else min_fraction
    p = min(max(smallest, min_fraction), 0.5)
    plan = plan_samples(p, epsilon, confidence)
    n_points = min(plan.n_points, max_points)
    mc = mc_area_table(table.circles, n_points, seed=seed, box=box)
    z = float(norm.isf((1.0 - confidence) / 2.0))
    regions = {}
    failures = 0
    for mask in sorted(set(table.exclusive) | set(mc.exclusive)):
        exact = table.exclusive_area(mask)
        est = mc.estimate(mask)
        diff = abs(est.area_mean - exact)
        ok = diff <= epsilon * exact or diff <= z * max(est.stderr, box_area / n_points)
        failures += not ok
        regions[str(mask)] = {"exact": exact, "estimate": est.area_mean,
                              "stderr": est.stderr, "pass": bool(ok)}
    return {"epsilon": epsilon, "confidence": confidence, "seed": seed,
            "planned_points": plan.n_points, "n_points": n_points, "plan_fraction": p,
            "box": list(box), "union_estimate": mc.union.area_mean,
            "union_stderr": mc.union.stderr, "failures": failures, "regions": regions}


def cmd_areas(args) -> int:
    try:
        doc = CircleSetDocument.from_json(Path(args.input).read_text())
        tol = tolerance_from(doc.tolerance)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        table = compute_all(doc.circles, tol, cap=args.max_circles)
    except (GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TrellisError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    meta = {"version": __version__}
    if args.timing:
        meta["elapsed_s"] = time.perf_counter() - t0
    report = AreaReportDocument.from_table(table, args.exclusive_only, meta)
    if args.mc_check:
        try:
            report.mc_check = _mc_annotation(table, args.epsilon, args.confidence, args.seed,
                                             args.min_fraction, args.max_points)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    problems = report.check(tol.area_rel_tol)
    _write(report.to_json(), args.output)
    if problems:
        for p in problems:
            print(f"consistency failure: {p}", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


def cmd_plan_samples(args) -> int:
    try:
        plan = plan_samples(args.p, args.epsilon, args.confidence)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps({"p": plan.p, "epsilon": plan.epsilon,
                      "confidence": plan.confidence, "n_points": plan.n_points}))
    return EXIT_OK


def _grid(spec, log_scale: bool):
    start, stop, num = spec
    num = int(num)
    if num < 1 or not (start > 0 and stop > 0) or stop < start:
        raise ValueError(f"invalid range {spec}")
    if log_scale:
        return np.logspace(math.log10(start), math.log10(stop), num)
    return np.linspace(start, stop, num)


def cmd_coverage(args) -> int:
    try:
        params = RadioParams()
        if args.params:
            params = RadioParams.from_dict(json.loads(Path(args.params).read_text()))
        pm = _grid(args.pm_range, log_scale=not args.pm_linear)
        ls = _grid(args.l_range, log_scale=False)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        res = sweep(params, pm, ls, args.mu, args.eta, tol=args.mono_tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TrellisError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    out = Path(args.output)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["P_M", "L", "success_prob", "g"])
        for row in res.rows():
            w.writerow([repr(v) for v in row])
    a, b = res.argmax
    manifest = {"version": __version__, "params": params.to_dict(),
                "pm_values": pm.tolist(), "l_values": ls.tolist(),
                "mu": args.mu, "eta": args.eta, "seed": None,
                "monotonicity_tolerance": args.mono_tol,
                "violations": res.violations,
                "argmax": {"P_M": float(pm[a]), "L": float(ls[b]),
                           "interior": bool(0 < a < pm.size - 1 and 0 < b < ls.size - 1)},
                "elapsed_s": time.perf_counter() - t0}
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    for v in res.violations:
        print(f"monotonicity violation: {v}", file=sys.stderr)
    return EXIT_CONSISTENCY if res.violations else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="circle-trellis", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("areas", help="exclusive and non-exclusive areas of a circle set")
    p.add_argument("input", help="JSON circle set")
    p.add_argument("-o", "--output", default="-", help="report path (default stdout)")
    p.add_argument("--exclusive-only", action="store_true")
    p.add_argument("--mc-check", action="store_true",
                   help="annotate every exclusive area with a Monte-Carlo estimate")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--confidence", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-fraction", type=float, default=0.01,
                   help="smallest box fraction the sample plan is sized for")
    p.add_argument("--max-points", type=int, default=2_000_000)
    p.add_argument("--max-circles", type=int, default=30)
    p.add_argument("--timing", action="store_true", help="record elapsed time in metadata")
    p.set_defaults(func=cmd_areas)

    p = sub.add_parser("plan-samples", help="Monte-Carlo sample size")
    p.add_argument("--p", type=float, required=True, help="region fraction of the box")
    p.add_argument("--epsilon", type=float, required=True, help="relative error")
    p.add_argument("--confidence", type=float, required=True)
    p.set_defaults(func=cmd_plan_samples)

    p = sub.add_parser("coverage", help="outage / objective sweep over (P_M, L)")
    p.add_argument("--params", help="JSON radio parameters (default: reference values)")
    p.add_argument("--pm-range", type=float, nargs=3, metavar=("START", "STOP", "NUM"),
                   default=[10 ** -3.5, 10 ** -2.5, 10], help="transmit power in W (log-spaced)")
    p.add_argument("--pm-linear", action="store_true", help="space powers linearly")
    p.add_argument("--l-range", type=float, nargs=3, metavar=("START", "STOP", "NUM"),
                   default=[60.0, 130.0, 10], help="lattice spacing in m")
    p.add_argument("--mu", type=float, default=1.0, help="power weight (1/W)")
    p.add_argument("--eta", type=float, default=30.0, help="density weight (m^2)")
    p.add_argument("--mono-tol", type=float, default=1e-3)
    p.add_argument("-o", "--output", required=True, help="CSV path")
    p.set_defaults(func=cmd_coverage)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
