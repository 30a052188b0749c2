"""Command-line figure rendering from the CSV trial export.

    plots <kind> --in results.csv --out fig.png [--filter key=value ...]

Exit codes: 0 figure written, 1 bad request (unknown kind, bad filter,
missing column, nothing to plot), 2 I/O failure (e.g. missing input file).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import KINDS, PlotSpec, render
from .records import MissingColumn


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render figures from a trial-export CSV.")
    parser.add_argument("kind",
                        help=f"figure kind to render: {', '.join(sorted(KINDS))}")
    parser.add_argument("--in", dest="input", required=True, type=Path,
                        metavar="CSV", help="trial-export CSV to read")
    parser.add_argument("--out", dest="output", required=True, type=Path,
                        metavar="IMAGE", help="image file to write")
    parser.add_argument("--filter", action="append", default=[],
                        metavar="KEY=VALUE",
                        help="keep only rows whose column equals the value; "
                             "repeatable")
    return parser


def parse_filters(pairs: list[str]) -> dict[str, str]:
    filters = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ValueError(f"filter {pair!r} is not KEY=VALUE")
        filters[key] = value
    return filters


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        filters = parse_filters(args.filter)
        spec = PlotSpec(input=args.input, kind=args.kind,
                        output=args.output, filters=filters)
    except ValueError as exc:
        print(f"plots: {exc}", file=sys.stderr)
        return 1
    try:
        render(spec)
    except OSError as exc:
        print(f"plots: {exc}", file=sys.stderr)
        return 2
    except (MissingColumn, ValueError) as exc:
        print(f"plots: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


def entry() -> None:
    sys.exit(main())
