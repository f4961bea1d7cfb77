"""Command line front end: one subcommand per figure kind.

Positional arguments are input CSV paths from the ugwspectra tool; --out
names the image (written as both PNG and SVG). Single threaded by design.
"""

import argparse
import sys

from .density_overlay import plot_density_overlay
from .io import FigplotsError
from .locus import plot_locus
from .log_histogram import plot_log_histogram


def build_parser():
    ap = argparse.ArgumentParser(
        prog="figplots",
        description="Figures from ugwspectra CSV outputs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("log-histogram",
                       help="log-scale count histogram, 1 or 2 spectra")
    p.add_argument("eigs_csv", nargs="+",
                   help="spectrum CSV path(s); two paths plot side by side")
    p.add_argument("--bins", type=int, default=81)
    p.add_argument("--out", default="log_histogram")

    p = sub.add_parser("locus", help="q(c) branches with the branch point")
    p.add_argument("locus_csv")
    p.add_argument("--out", default="locus")

    p = sub.add_parser("density-overlay",
                       help="normalized histogram under the limiting curve")
    p.add_argument("eigs_csv")
    p.add_argument("km_csv", help="kmcurve CSV carrying the curve and degree")
    p.add_argument("--bins", type=int, default=61)
    p.add_argument("--out", default="density_overlay")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "log-histogram":
            res = plot_log_histogram(args.eigs_csv, bins=args.bins,
                                     out=args.out)
        elif args.command == "locus":
            res = plot_locus(args.locus_csv, out=args.out)
        else:
            res = plot_density_overlay(args.eigs_csv, args.km_csv,
                                       bins=args.bins, out=args.out)
    except FigplotsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in res.written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
