"""Command-line entry points for post-processing sweep outputs."""

from __future__ import annotations

import argparse
import os
import sys

from .compare import compare
from .loading import ResultsError, load_results
from .plots import plot_daily
from .summarize import summarize, to_markdown_table, verify_against_cells_csv


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="storesim-analysis",
                                     description="Summaries, tests, and figures for storesim sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    sum_p = sub.add_parser("summarize", help="per-cell mean/SD tables")
    sum_p.add_argument("--results", required=True, help="sweep output directory")
    sum_p.add_argument("--out", default=None, help="write summary.csv (+ summary.md) here")
    sum_p.add_argument("--measures", nargs="*", default=None)
    sum_p.add_argument("--verify", action="store_true", help="cross-check against cells.csv")

    cmp_p = sub.add_parser("compare", help="Welch t / one-way ANOVA with eta-squared")
    cmp_p.add_argument("--results", required=True)
    cmp_p.add_argument("--factor", default="cell")
    cmp_p.add_argument("--measures", nargs="*", default=None)
    cmp_p.add_argument("--levene", action="store_true")
    cmp_p.add_argument("--tukey", action="store_true")
    cmp_p.add_argument("--bonferroni", action="store_true")
    cmp_p.add_argument("--out", default=None, help="write comparison.csv here")

    plot_p = sub.add_parser("plot", help="daily time-series figures")
    plot_p.add_argument("--results", required=True)
    plot_p.add_argument("--measures", nargs="+", required=True)
    plot_p.add_argument("--out", required=True)
    plot_p.add_argument("--fmt", choices=["png", "svg"], default="png")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "summarize":
            results = load_results(args.results)
            table = summarize(results, args.measures)
            if args.verify:
                bad = verify_against_cells_csv(results, args.results)
                if not bad.empty:
                    print("cells.csv disagrees with recomputed summaries:", file=sys.stderr)
                    print(bad.to_string(index=False), file=sys.stderr)
                    return 1
                print("cells.csv verified against per-replication files")
            if args.out:
                os.makedirs(args.out, exist_ok=True)
                table.to_csv(os.path.join(args.out, "summary.csv"), index=False)
                with open(os.path.join(args.out, "summary.md"), "w", encoding="utf-8") as fh:
                    fh.write(to_markdown_table(table, args.measures))
                print(f"wrote {args.out}/summary.csv and summary.md")
            else:
                print(table.to_string(index=False))
        elif args.command == "compare":
            results = load_results(args.results)
            report = compare(results, factor=args.factor, measures=args.measures,
                             levene=args.levene, tukey=args.tukey, bonferroni=args.bonferroni)
            if args.out:
                os.makedirs(args.out, exist_ok=True)
                report.to_csv(os.path.join(args.out, "comparison.csv"), index=False)
                print(f"wrote {args.out}/comparison.csv")
            else:
                print(report.to_string(index=False))
        else:
            results = load_results(args.results, with_daily=True)
            written = plot_daily(results, args.measures, args.out, fmt=args.fmt)
            for path in written:
                print(f"wrote {path}")
    except (ResultsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
