"""Command-line entry point: ``run``, ``reference`` and ``converge``.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .config import OUTPUT_ENV, ConfigError, load_config
from .driver import convergence_study, run
from .eos import DomainError
from .io import write_profile
from .muscl import NumericalError
from .refsol import solve_1d, solve_radial

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

log = logging.getLogger("curlfree")


def _on_off(text: str) -> bool:
    v = text.lower()
    if v not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return v == "on"


def _meshes(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad mesh list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curlfree",
                                     description="Curl-free staggered two-phase flow solver")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured simulation")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")

    p_ref = sub.add_parser("reference", help="1D reference solution written as CSV")
    p_ref.add_argument("--radial", type=_on_off, default=False, metavar="on|off")
    p_ref.add_argument("--n", type=int, required=True)
    p_ref.add_argument("--t-end", type=float, default=None)
    p_ref.add_argument("--cfl", type=float, default=0.5)
    p_ref.add_argument("--output", default=None, help="CSV path (default in the output dir)")

    p_conv = sub.add_parser("converge", help="vortex mesh-refinement study")
    p_conv.add_argument("--config", required=True)
    p_conv.add_argument("--meshes", type=_meshes, required=True)
    p_conv.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    return parser


def _cmd_run(args) -> int:
    cfg = load_config(args.config, args.override)
    result = run(cfg)
    if result.status == EXIT_OK:
        sim = result.simulation
        print(f"finished t={sim.t:.6g} after {sim.step_count} steps; output in {result.output_dir}")
    else:
        print(f"numerical failure: {result.message}; last valid state in {result.output_dir}",
              file=sys.stderr)
    return result.status


def _cmd_reference(args) -> int:
    if args.n < 4:
        raise ConfigError("--n must be at least 4")
    if args.radial:
        prof = solve_radial("explosion", args.n, args.t_end, cfl=args.cfl)
        default = f"reference_radial_{args.n}.csv"
    else:
        prof = solve_1d("rp1d", args.n, args.t_end, cfl=args.cfl)
        default = f"reference_1d_{args.n}.csv"
    if args.output:
        path = Path(args.output)
    else:
        path = Path(os.environ.get(OUTPUT_ENV, "output")) / default
    path.parent.mkdir(parents=True, exist_ok=True)
    write_profile(path, prof.columns())
    print(f"reference at t={prof.t:.6g} ({prof.steps} steps) written to {path}")
    return EXIT_OK


def _cmd_converge(args) -> int:
    cfg = load_config(args.config, args.override)
    if len(args.meshes) < 2:
        raise ConfigError("--meshes needs at least two entries")
    try:
        table = convergence_study(cfg, args.meshes)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    table.to_csv(out / "convergence.csv")
    print(table.format())
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"run": _cmd_run, "reference": _cmd_reference, "converge": _cmd_converge}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FloatingPointError, DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
