"""CLI: wiretap-plots plot <figure-kind> <csv> -o <image>."""
from __future__ import annotations

import argparse
import sys

from .figures import (
    FIGURE_KINDS,
    EmptyCsvError,
    MissingColumnError,
    PlotSpec,
    render,
)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wiretap-plots",
        description="render figures from wiretapgame sweep CSVs")
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("plot", help="render one figure")
    p.add_argument("kind", choices=FIGURE_KINDS, help="figure kind")
    p.add_argument("csv", help="input CSV path")
    p.add_argument("-o", "--out", required=True, help="output image path")
    p.add_argument("--title", default=None)
    p.add_argument("--x-label", default=None)
    p.add_argument("--y-label", default=None)
    args = parser.parse_args(argv)

    spec = PlotSpec(csv_path=args.csv, kind=args.kind, out_path=args.out,
                    title=args.title, x_label=args.x_label,
                    y_label=args.y_label)
    try:
        series = render(spec)
    except (MissingColumnError, EmptyCsvError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {args.out} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
