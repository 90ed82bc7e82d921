"""Command-line entry point: single runs, sweeps, and report rendering.

Defaults reproduce the shipped experiment setup (300 steps, epsilon 0.1,
built-in three-path topology, the standard agent grid), so a bare
`mpsim sweep` regenerates the full summary table. The seed defaults to
a fixed value; no code path reads the clock or OS entropy.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import EngineParams, SimConfig, run, timeseries_csv
from .experiment import (
    DEFAULT_AGENT_COUNTS,
    SweepSpec,
    emit_epsilon,
    emit_summary,
    parse_summary_csv,
    sweep_agents,
    sweep_epsilon,
)
from .metrics import score
from .strategy import STRATEGY_NAMES, StrategyKind
from .topology import TopologyError, default_topology, parse_topology


def _load_topology(path: str | None):
    if path is None:
        return default_topology()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return parse_topology(handle.read())
    except OSError as exc:
        raise TopologyError(f"cannot read topology file: {exc}") from None


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(part) for part in raw.split(",") if part.strip())


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(part) for part in raw.split(",") if part.strip())


def cmd_run(args) -> int:
    topology = _load_topology(args.topology)
    kind = StrategyKind(args.strategy, epsilon=args.epsilon)
    config = SimConfig(
        topology=topology,
        strategy=kind,
        num_agents=args.agents,
        engine=EngineParams(steps=args.steps),
        seed=args.seed,
    )
    telemetry = run(config)
    scores = score(telemetry)
    doc = {
        "strategy": kind.name,
        "agents": args.agents,
        "steps": args.steps,
        "seed": args.seed,
        "topology": topology.name,
        "scores": {
            "oscillation": scores.oscillation,
            "loss": scores.loss,
            "fairness": scores.fairness,
            "efficiency": scores.efficiency,
            "goodput": scores.goodput,
            "stability": scores.stability,
            "loss_avoidance": scores.loss_avoidance,
        },
    }
    if kind.name == "epsilon_greedy":
        doc["epsilon"] = args.epsilon
    _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    if args.timeseries:
        _write_output(timeseries_csv(telemetry), args.timeseries)
    return 0


def cmd_sweep(args) -> int:
    topology = _load_topology(args.topology)
    if args.epsilon_grid is not None:
        if not args.epsilon_grid:
            print("error: empty epsilon grid", file=sys.stderr)
            return 2
        points = sweep_epsilon(args.epsilon_grid, args.agents, topology,
                               steps=args.steps, seed=args.seed)
        _write_output(emit_epsilon(points, raw=args.raw), args.out)
        return 0

    if args.strategies is not None:
        names = args.strategies
    else:
        names = STRATEGY_NAMES
    bad = [n for n in names if n not in STRATEGY_NAMES]
    if bad:
        print(f"error: unknown strategy {bad[0]!r}; valid names: "
              f"{', '.join(STRATEGY_NAMES)}", file=sys.stderr)
        return 2
    counts = args.agents_list if args.agents_list is not None else DEFAULT_AGENT_COUNTS
    if not names or not counts:
        print("error: empty sweep grid", file=sys.stderr)
        return 2
    strategies = tuple(StrategyKind(name, epsilon=args.epsilon) for name in names)
    spec = SweepSpec(topology=topology, strategies=strategies,
                     agent_counts=tuple(counts), steps=args.steps, seed=args.seed)
    rows = sweep_agents(spec)
    _write_output(emit_summary(rows, fmt=args.format, raw=args.raw), args.out)
    return 0


def cmd_report(args) -> int:
    try:
        with open(args.infile, "r", encoding="utf-8") as handle:
            rows = parse_summary_csv(handle.read())
    except OSError as exc:
        print(f"error: cannot read results file: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _write_output(emit_summary(rows, fmt=args.format, raw=args.raw), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpsim",
        description="Deterministic multipath path-selection simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="simulate one configuration and score it")
    run_p.add_argument("--strategy", required=True, choices=STRATEGY_NAMES)
    run_p.add_argument("--agents", type=int, default=100)
    run_p.add_argument("--steps", type=int, default=300)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--epsilon", type=float, default=0.1,
                       help="exploration probability for epsilon_greedy")
    run_p.add_argument("--topology", help="topology JSON file (default: built-in)")
    run_p.add_argument("--out", help="output file for the score summary (default: stdout)")
    run_p.add_argument("--timeseries", help="also write per-step per-path CSV here")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep", help="run an experiment grid")
    sweep_p.add_argument("--all-strategies", action="store_true",
                         help="sweep every strategy (the default)")
    sweep_p.add_argument("--strategies", type=lambda s: tuple(s.split(",")),
                         help="comma-separated strategy names")
    sweep_p.add_argument("--agents-list", type=_int_list,
                         help="comma-separated agent counts "
                              f"(default {','.join(map(str, DEFAULT_AGENT_COUNTS))})")
    sweep_p.add_argument("--epsilon-grid", type=_float_list,
                         help="comma-separated epsilons: run the sensitivity sweep instead")
    sweep_p.add_argument("--agents", type=int, default=500,
                         help="agent count for --epsilon-grid mode")
    sweep_p.add_argument("--steps", type=int, default=300)
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("--epsilon", type=float, default=0.1)
    sweep_p.add_argument("--topology")
    sweep_p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    sweep_p.add_argument("--raw", action="store_true",
                         help="full-precision CSV instead of 2 decimal places")
    sweep_p.add_argument("--out")
    sweep_p.set_defaults(func=cmd_sweep)

    report_p = sub.add_parser("report", help="re-render stored sweep results")
    report_p.add_argument("--in", dest="infile", required=True)
    report_p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    report_p.add_argument("--raw", action="store_true")
    report_p.add_argument("--out")
    report_p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TopologyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    raise SystemExit(main())
