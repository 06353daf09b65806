"""Command-line front end: simulate, validate, generate, populate, query, render.

Machine-readable JSON goes to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 internal error, 2 invalid input.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from . import __version__
from .dual import DualOrderQuery, dual_debug_dump
from .errors import DesignError, GridMixerError, InvalidDesignError, NoPathError
from .flow import flow_debug_dump
from .generate import (
    DEFAULT_DEDUP_THRESHOLD,
    DesignLibrary,
    GeneratorParams,
    InletSpec,
    populate_library,
    query_library,
    random_grid,
)
from .model import parse_design, serialize_design, validate
from .payload import dump_json, simulate_payload
from .render import render_design_svg

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2


def _read_design(path: str):
    with open(path) as fh:
        return parse_design(fh.read())


def cmd_simulate(args) -> int:
    design = _read_design(args.design)
    payload, result = simulate_payload(design, args.profiles)
    if args.debug_flow:
        with open(args.debug_flow, "w") as fh:
            fh.write(dump_json(flow_debug_dump(result.design, result.flow)))
    if args.debug_dual:
        query = DualOrderQuery(result.grid)
        with open(args.debug_dual, "w") as fh:
            fh.write(dump_json(dual_debug_dump(result.grid, query.dual)))
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_design_svg(result.design, result.report, result.exit_profiles))
    sys.stdout.write(dump_json(payload))
    return EXIT_OK


def cmd_validate(args) -> int:
    design = _read_design(args.design)
    report = validate(design)
    sys.stdout.write(dump_json(report.as_dict()))
    return EXIT_INVALID if report.errors else EXIT_OK


def _params_from_args(args) -> GeneratorParams:
    concentrations = [float(x) for x in args.concentrations.split(",")]
    velocities = [float(x) for x in args.velocities.split(",")] if args.velocities else []
    if velocities and len(velocities) != len(concentrations):
        raise DesignError("--velocities length must match --concentrations")
    if not velocities:
        velocities = [1.0] * len(concentrations)
    inlet_cols = (
        [int(x) for x in args.inlet_cols.split(",")] if args.inlet_cols else None
    )
    if inlet_cols and len(inlet_cols) != len(concentrations):
        raise DesignError("--inlet-cols length must match --concentrations")
    inlets = tuple(
        InletSpec(c, v, inlet_cols[i] if inlet_cols else None)
        for i, (c, v) in enumerate(zip(concentrations, velocities))
    )
    outlet_cols = (
        tuple(int(x) for x in args.outlet_cols.split(",")) if args.outlet_cols else None
    )
    return GeneratorParams(
        rows=args.rows,
        cols=args.cols,
        density=args.density,
        inlets=inlets,
        n_outlets=args.outlets,
        outlet_cols=outlet_cols,
        seed=args.seed,
    )


def cmd_generate(args) -> int:
    if args.count < 1:
        raise DesignError("--count must be at least 1")
    params = _params_from_args(args)
    for index in range(args.count):
        design = random_grid(replace(params, seed=params.seed + index))
        text = serialize_design(design)
        if args.out_dir:
            os.makedirs(args.out_dir, exist_ok=True)
            path = os.path.join(args.out_dir, f"design_{params.seed + index:06d}.json")
            with open(path, "w") as fh:
                fh.write(text)
            print(path, file=sys.stderr)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_populate(args) -> int:
    params = _params_from_args(args)
    jobs = args.jobs or int(os.environ.get("GRIDMIXER_JOBS", "1"))
    library = populate_library(params, args.count, threshold=args.epsilon, jobs=jobs)
    library.save(args.out)
    print(
        f"library: {len(library.entries)} entries from {args.count} designs -> {args.out}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_query(args) -> int:
    library = DesignLibrary.load(args.library)
    try:
        target = tuple(float(x) for x in args.target.split(","))
    except ValueError as exc:
        raise DesignError(f"--target must be comma-separated numbers: {exc}") from exc
    results = query_library(library, target, args.k)
    payload = {
        "target": list(target),
        "results": [
            {"distance": dist, **entry.as_dict()} for dist, entry in results
        ],
    }
    sys.stdout.write(dump_json(payload))
    return EXIT_OK


def cmd_render(args) -> int:
    design = _read_design(args.design)
    report = None
    profiles = None
    if not args.plain:
        _, result = simulate_payload(design, include_profiles=False)
        design = result.design
        report = result.report
        profiles = result.exit_profiles
    svg = render_design_svg(design, report, profiles)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridmixer",
        description="Simulate, generate, and catalogue flow-based microfluidic grid mixers.",
    )
    parser.add_argument("--version", action="version", version=f"gridmixer {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="predict outlet concentrations for a design file")
    p.add_argument("design")
    p.add_argument("--profiles", action="store_true", help="include per-edge profile trace")
    p.add_argument("--svg", metavar="PATH", help="also render the design to an SVG file")
    p.add_argument("--debug-flow", metavar="PATH", help="dump solved pressures/velocities")
    p.add_argument("--debug-dual", metavar="PATH", help="dump regions and dual edges")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="report design problems as JSON")
    p.add_argument("design")
    p.set_defaults(func=cmd_validate)

    for name, description in (
        ("generate", "write random valid designs"),
        ("populate", "build a concentration library from random designs"),
    ):
        p = sub.add_parser(name, help=description)
        p.add_argument("--rows", type=int, default=12)
        p.add_argument("--cols", type=int, default=12)
        p.add_argument("--density", type=float, default=0.65)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--concentrations", default="1,0", help="inlet concentrations, comma separated"
        )
        p.add_argument("--velocities", default="", help="inlet velocities (default all 1)")
        p.add_argument("--inlet-cols", default="", help="fix inlet columns")
        p.add_argument("--outlet-cols", default="", help="fix outlet columns")
        p.add_argument("--outlets", type=int, default=3, help="outlet count when not fixed")
        if name == "generate":
            p.add_argument("--count", type=int, default=1)
            p.add_argument("--out-dir", help="write design files here instead of stdout")
            p.set_defaults(func=cmd_generate)
        else:
            p.add_argument("--count", type=int, required=True, help="designs to examine")
            p.add_argument("--epsilon", type=float, default=DEFAULT_DEDUP_THRESHOLD)
            p.add_argument(
                "--jobs", type=int, default=0,
                help="parallel workers (default $GRIDMIXER_JOBS or 1)",
            )
            p.add_argument("--out", required=True, help="library file (JSON lines)")
            p.set_defaults(func=cmd_populate)

    p = sub.add_parser("query", help="find library entries near a concentration target")
    p.add_argument("library")
    p.add_argument("--target", required=True, help="comma-separated concentrations")
    p.add_argument("-k", type=int, default=5)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("render", help="draw a design as SVG")
    p.add_argument("design")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--plain", action="store_true", help="skip simulation; no outlet labels")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidDesignError as exc:
        for issue in exc.report.errors:
            print(f"error [{issue.location}]: {issue.message}", file=sys.stderr)
        return EXIT_INVALID
    except (DesignError, NoPathError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GridMixerError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
