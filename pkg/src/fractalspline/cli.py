"""Command-line interface.

Subcommands: ``bounds``, ``build``, ``sample``, ``verify``, ``plot``,
``scenario``. Exit status is 0 on success, 1 when a constraint violation (or
scenario expectation failure) is witnessed, and 2 for usage or file errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, constraints, io, scenarios
from .data import estimate_derivatives_amm
from .errors import ExpectationFailed, FractalSplineError, UnknownScenario
from .model import (
    DEFAULT_MAX_POINTS,
    build_model,
    sample_attractor,
    IfsParams,
)
from .plotting import save_curve_svg

OUTDIR_ENV = "FRACTALSPLINE_OUTDIR"


def _floats(text: str) -> list[float]:
    try:
        return [float(c) for c in text.split(",") if c.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


def _add_constraint_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--positivity", action="store_true", help="graph stays non-negative")
    g.add_argument("--rect", nargs=2, type=float, metavar=("LO", "HI"),
                   help="graph stays inside the band [LO, HI]")
    g.add_argument("--above-line", nargs=2, type=float, metavar=("M", "K"),
                   help="graph stays above y = M*x + K")
    g.add_argument("--below-line", nargs=2, type=float, metavar=("M", "K"),
                   help="graph stays below y = M*x + K")


def _constraint_from(args) -> constraints.Constraint | None:
    if args.positivity:
        return constraints.Positivity()
    if args.rect is not None:
        return constraints.Rectangle(args.rect[0], args.rect[1])
    if args.above_line is not None:
        return constraints.AboveLine(args.above_line[0], args.above_line[1])
    if args.below_line is not None:
        return constraints.BelowLine(args.below_line[0], args.below_line[1])
    return None


def _load_data(args):
    data = io.read_dataset(args.data)
    if not data.has_derivatives and getattr(args, "estimate_derivatives", False):
        data = data.with_derivatives(estimate_derivatives_amm(data))
    return data


def _bounds_for(data, constraint, u):
    if isinstance(constraint, constraints.Positivity):
        return constraints.positivity_bounds(data, u)
    if isinstance(constraint, constraints.Rectangle):
        return constraints.rectangle_bounds(data, constraint.lower, constraint.upper, u)
    if isinstance(constraint, constraints.AboveLine):
        return constraints.above_line_bounds(data, constraint.slope, constraint.intercept, u)
    return constraints.below_line_bounds(data, constraint.slope, constraint.intercept, u)


def _cmd_bounds(args) -> int:
    data = _load_data(args)
    constraint = _constraint_from(args)
    if constraint is None:
        raise FractalSplineError("bounds needs a constraint flag")
    report = _bounds_for(data, constraint, args.u)
    print(io.dump_json(report.to_dict(alphas=args.alpha)), end="")
    return 0


def _cmd_build(args) -> int:
    data = _load_data(args)
    if args.auto is not None:
        constraint = _constraint_from(args)
        if constraint is None:
            raise FractalSplineError("--auto needs a constraint flag")
        policy = constraints.SelectionPolicy(rho=args.auto)
        params = constraints.auto_select(data, constraint, policy)
    else:
        if args.alpha is None or args.u is None or args.v is None:
            raise FractalSplineError("build needs --alpha, --u and --v (or --auto)")
        params = IfsParams(
            np.asarray(args.alpha), np.asarray(args.u), np.asarray(args.v), args.kappa
        )
    model = build_model(data, params)
    io.write_model(model, args.out)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _sample_depth(model, args) -> int:
    if args.tol is not None:
        # finest depth whose coarsest tile is at most tol wide
        a_max = float(np.max(model.partition.a))
        span = model.partition.span
        if args.tol >= span:
            return 0
        return max(0, math.ceil(math.log(args.tol / span) / math.log(a_max)))
    return args.depth


def _cmd_sample(args) -> int:
    model = io.read_model(args.model)
    samples = sample_attractor(model, _sample_depth(model, args), args.max_points)
    io.write_samples_csv(samples, args.out)
    print(f"wrote {args.out} ({samples.size} rows)", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    model = io.read_model(args.model)
    constraint = _constraint_from(args)
    if constraint is None:
        raise FractalSplineError("verify needs a constraint flag")
    margin = analysis.empirical_margin(model, constraint, args.depth, args.max_points)
    print(io.dump_json(margin.to_dict()), end="")
    return 0 if margin.satisfied else 1


def _cmd_plot(args) -> int:
    model = io.read_model(args.model)
    samples = sample_attractor(model, args.depth, args.max_points)
    save_curve_svg(args.out, model, samples, _constraint_from(args), title=args.title)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def _cmd_scenario(args) -> int:
    base = Path(os.environ.get(OUTDIR_ENV, args.out))
    names = list(scenarios.SCENARIO_NAMES) if args.name == "all" else [args.name]
    failures = 0
    for name in names:
        try:
            bundle = scenarios.run_scenario(name, base / name, depth=args.depth)
        except ExpectationFailed as e:
            failures += 1
            print(f"{name}: EXPECTATION FAILED: {e}", file=sys.stderr)
            continue
        m = bundle["margin"]
        print(
            f"{name}: margin {m.margin:+.3e} at x = {m.at_x:.6g} "
            f"({'satisfied' if bundle['satisfied'] else 'violated'}) -> {base / name}",
            file=sys.stderr,
        )
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fractalspline",
        description="Shape-constrained self-referential rational cubic interpolation.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="admissible scale ranges and tension thresholds")
    b.add_argument("data", help="data file (.csv or .json)")
    _add_constraint_flags(b)
    b.add_argument("--u", type=_floats, help="per-interval u values (enables thresholds)")
    b.add_argument("--alpha", type=_floats, help="scales at which to evaluate thresholds")
    b.add_argument("--estimate-derivatives", action="store_true",
                   help="fill missing slopes with the weighted-mean estimate")
    b.set_defaults(fn=_cmd_bounds)

    c = sub.add_parser("build", help="assemble and save a model")
    c.add_argument("data")
    _add_constraint_flags(c)
    c.add_argument("--alpha", type=_floats)
    c.add_argument("--u", type=_floats)
    c.add_argument("--v", type=_floats)
    c.add_argument("--kappa", type=float, default=IfsParams.__dataclass_fields__["kappa"].default)
    c.add_argument("--auto", nargs="?", const=0.9, type=float, metavar="RHO",
                   help="pick parameters automatically for the given constraint")
    c.add_argument("--estimate-derivatives", action="store_true")
    c.add_argument("--out", required=True, help="output model JSON path")
    c.set_defaults(fn=_cmd_build)

    s = sub.add_parser("sample", help="sample the interpolant onto CSV")
    s.add_argument("model")
    s.add_argument("--depth", type=int, default=scenarios.DEFAULT_DEPTH)
    s.add_argument("--tol", type=float, help="target mesh width (overrides --depth)")
    s.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_sample)

    v = sub.add_parser("verify", help="check a constraint on attractor samples")
    v.add_argument("model")
    _add_constraint_flags(v)
    v.add_argument("--depth", type=int, default=scenarios.DEFAULT_DEPTH)
    v.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    v.set_defaults(fn=_cmd_verify)

    g = sub.add_parser("plot", help="render the sampled curve to SVG")
    g.add_argument("model")
    _add_constraint_flags(g)
    g.add_argument("--depth", type=int, default=scenarios.DEFAULT_DEPTH)
    g.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    g.add_argument("--title")
    g.add_argument("--out", required=True)
    g.set_defaults(fn=_cmd_plot)

    r = sub.add_parser("scenario", help="run a bundled scenario (or 'all')")
    r.add_argument("name", choices=list(scenarios.SCENARIO_NAMES) + ["all"])
    r.add_argument("--depth", type=int, default=scenarios.DEFAULT_DEPTH)
    r.add_argument("--out", default="out",
                   help=f"base output directory (env {OUTDIR_ENV} overrides)")
    r.set_defaults(fn=_cmd_scenario)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UnknownScenario as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (FractalSplineError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
