"""Command-line interface.

Subcommands: run (single scenario), sweep (experiment plan), validate
(scenario check), presets (list built-ins). Exit codes: 0 success,
1 validation or usage error, 2 I/O error, 3 at least one sweep cell failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import Simulation
from .harness import ExperimentPlan, load_plan, run_replications
from .metrics import emit_outputs
from .scenario import MODE_NOISE_REDUCTION, MODE_NORMAL, PRESETS, ScenarioError, load_scenario, validate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_CELL_FAILED = 3


class _Parser(argparse.ArgumentParser):
    # bad usage prints the usage text and exits 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="storesim", description="Retail department simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run_p = sub.add_parser("run", help="run a single scenario")
    run_p.add_argument("--scenario", required=True, help="preset name or scenario JSON file")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--weeks", type=int, default=None)
    run_p.add_argument("--mode", choices=["normal", "noise-reduction"], default=None)
    run_p.add_argument("--quiet", action="store_true")

    sweep_p = sub.add_parser("sweep", help="run an experiment plan")
    sweep_p.add_argument("--plan", required=True, help="plan JSON file")
    sweep_p.add_argument("--out", required=True, help="output directory")
    sweep_p.add_argument("--seed", type=int, default=None, help="override the plan's master seed")
    sweep_p.add_argument("--replications", type=int, default=None)
    sweep_p.add_argument("--weeks", type=int, default=None)
    sweep_p.add_argument("--mode", choices=["normal", "noise-reduction"], default=None)
    sweep_p.add_argument("--workers", type=int, default=None, help="worker processes (default: cpu count)")
    sweep_p.add_argument("--quiet", action="store_true")

    val_p = sub.add_parser("validate", help="check a scenario file")
    val_p.add_argument("--scenario", required=True)

    sub.add_parser("presets", help="list built-in scenario presets")
    return parser


def _mode_value(flag: str | None) -> str | None:
    if flag is None:
        return None
    return MODE_NOISE_REDUCTION if flag == "noise-reduction" else MODE_NORMAL


def _cmd_run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        if args.seed is not None:
            scenario.seed = args.seed
        if args.weeks is not None:
            scenario.weeks = args.weeks
        mode = _mode_value(args.mode)
        if mode is not None:
            scenario.mode = mode
        validate(scenario)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    simulation = Simulation(scenario)
    summary = simulation.run()
    try:
        emit_outputs(summary, simulation.scenario_snapshot(), args.out)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if not args.quiet:
        totals = summary.totals()
        status = f"terminated early on day {summary.last_day}" if summary.terminated else "completed"
        print(f"{scenario.name}: {summary.days_run} days {status}; "
              f"{totals['entered']} visits, {totals['transactions']} transactions")
        print(f"outputs written to {args.out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        plan = load_plan(args.plan)
        if args.seed is not None:
            plan.master_seed = args.seed
        if args.replications is not None:
            plan.replications = args.replications
        if args.weeks is not None:
            plan.weeks = args.weeks
        mode = _mode_value(args.mode)
        if mode is not None:
            plan.mode = mode
    except ScenarioError as exc:
        print(f"plan error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        result = run_replications(plan, out_dir=args.out, workers=args.workers)
    except ScenarioError as exc:
        print(f"plan error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if not args.quiet:
        n_cells = len(result.cells)
        print(f"{n_cells} cell(s) x {plan.replications} replication(s); outputs in {args.out}")
        for cell_id in result.failed_cells:
            print(f"FAILED {cell_id}: {result.failures[cell_id][0]}", file=sys.stderr)
    return EXIT_CELL_FAILED if result.failures else EXIT_OK


def _cmd_validate(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"ok: scenario {scenario.name!r} "
          f"(pool {scenario.main_pool_size}, {scenario.customers_per_day} customers/day, mode {scenario.mode})")
    return EXIT_OK


def _cmd_presets(_args) -> int:
    for name in sorted(PRESETS):
        sc = PRESETS[name]()
        print(f"{name}: pool {sc.main_pool_size}, {sc.customers_per_day} customers/day, "
              f"{json.dumps(sc.customer_split)}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "validate": _cmd_validate,
        "presets": _cmd_presets,
    }[args.command]
    return command(args)


if __name__ == "__main__":
    sys.exit(main())
