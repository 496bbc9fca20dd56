"""planarqb-plot: figures from simulator sweep directories or CSV files."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .reader import SchemaError
from .render import DEFAULT_COLUMN, PlotSpec, render_sweep, sweep_plot_spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planarqb-plot",
        description="Render ergotropy-vs-time figures from sweep output.")
    parser.add_argument("inputs", nargs="+",
                        help="a sweep directory, or one or more trajectory CSVs")
    parser.add_argument("--column", default=DEFAULT_COLUMN,
                        help="trajectory column to plot (e.g. ergotropy_global)")
    parser.add_argument("--out", default=None,
                        help="output image path; format follows the extension "
                             "(.png, .svg, .pdf); default <sweep>/<column>.png")
    parser.add_argument("--allow-failed", action="store_true",
                        help="plot CSVs carrying a failure marker")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        first = Path(args.inputs[0])
        if len(args.inputs) == 1 and first.is_dir():
            spec = sweep_plot_spec(first, out_path=args.out, column=args.column,
                                   allow_failed=args.allow_failed)
        else:
            paths = tuple(Path(p) for p in args.inputs)
            out = Path(args.out) if args.out else Path(f"{args.column}.png")
            spec = PlotSpec(csv_paths=paths,
                            labels=tuple(p.stem for p in paths),
                            out_path=out, column=args.column,
                            allow_failed=args.allow_failed)
        result = render_sweep(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.out_path} ({result.curve_count} curves)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
