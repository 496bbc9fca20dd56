"""Command line interface: `planarqb run <config>` and `planarqb sweep <spec>`.

Exit codes: 0 success, 2 configuration error, 3 integration failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .bath import DISSIPATOR_MODES
from .config import ConfigError, RunSetup, load_setup, setup_from_dict, setup_to_dict
from .dynamics import IntegrationError
from .runner import run_single
from .sweeps import (DEFAULT_BAND, DEFAULT_COLUMN, load_sweep_spec, run_sweep)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3


def _apply_overrides(setup: RunSetup, args) -> RunSetup:
    if args.cutoff is None and args.dissipator is None:
        return setup
    cfg = setup_to_dict(setup)
    cfg["evolution"]["dt"] = setup.evolution.dt
    if args.cutoff is not None:
        cfg["system"]["cutoff"] = args.cutoff
    if args.dissipator is not None:
        cfg["bath"]["mode"] = args.dissipator
    return setup_from_dict(cfg)


def _cmd_run(args) -> int:
    try:
        setup = load_setup(args.config)
        setup = _apply_overrides(setup, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out_dir)
    try:
        traj = run_single(setup, out_dir)
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        print(f"partial output retained in {out_dir}", file=sys.stderr)
        return EXIT_INTEGRATION
    print(f"wrote {out_dir / 'trajectory.csv'} "
          f"({len(traj.times)} samples, max trace drift {traj.max_trace_drift:.2e})")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        spec = load_sweep_spec(args.spec)
        if args.cutoff is not None:
            spec.base.setdefault("system", {})["cutoff"] = args.cutoff
        if args.dissipator is not None:
            spec.base.setdefault("bath", {})["mode"] = args.dissipator
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows = run_sweep(spec, Path(args.out_dir), workers=args.workers,
                         band=args.stabilization_band, column=args.column)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    n_failed = sum(1 for r in rows if r["status"] != "ok")
    print(f"wrote {len(rows)} sweep points to {args.out_dir} "
          f"({n_failed} failed)")
    return EXIT_INTEGRATION if n_failed == len(rows) and rows else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarqb",
        description="Driven-dissipative charging simulations of a planar "
                    "quantum-battery array.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single configuration")
    p_run.add_argument("config", help="JSON config file (or a run manifest)")
    p_run.add_argument("--out-dir", default="out", help="output directory")
    p_run.add_argument("--cutoff", type=int, default=None,
                       help="override the Fock cutoff")
    p_run.add_argument("--dissipator", choices=DISSIPATOR_MODES, default=None,
                       help="override the dissipator mode")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    p_sweep.add_argument("spec", help="JSON sweep spec (preset or custom)")
    p_sweep.add_argument("--out-dir", default="out", help="output directory")
    p_sweep.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                         help="parallel worker processes "
                              "(default: hardware threads)")
    p_sweep.add_argument("--stabilization-band", type=float, default=DEFAULT_BAND,
                         help="band (fraction of the final value) defining "
                              "stabilization")
    p_sweep.add_argument("--column", default=DEFAULT_COLUMN,
                         help="trajectory column the summary metrics use")
    p_sweep.add_argument("--cutoff", type=int, default=None,
                         help="override the Fock cutoff")
    p_sweep.add_argument("--dissipator", choices=DISSIPATOR_MODES, default=None,
                         help="override the dissipator mode")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
