"""Experiment grids and report rendering.

sweep_agents runs a (strategy x agent-count) grid and summarizes each
cell into one row; sweep_epsilon runs the exploration-factor
sensitivity line at a fixed agent count. Cells derive independent seeds
from (sweep seed, strategy, agents), so results do not depend on grid
shape or execution order. MPSIM_THREADS > 1 runs cells in worker
processes; assembly order stays deterministic either way.
"""

from __future__ import annotations

import csv
import hashlib
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .engine import EngineParams, SimConfig, run
from .metrics import score
from .strategy import STRATEGY_NAMES, StrategyKind
from .topology import Topology

DEFAULT_AGENT_COUNTS = (10, 25, 50, 100, 150, 250, 500)

SUMMARY_HEADER = ("strategy", "agents", "oscillation", "loss", "fairness",
                  "efficiency", "stability", "loss_avoidance")
EPSILON_HEADER = ("epsilon", "efficiency", "loss")


@dataclass(frozen=True)
class SweepSpec:
    topology: Topology
    strategies: tuple[StrategyKind, ...]
    agent_counts: tuple[int, ...] = DEFAULT_AGENT_COUNTS
    steps: int = 300
    seed: int = 0

    def __post_init__(self):
        if not self.strategies:
            raise ValueError("sweep needs at least one strategy")
        if not self.agent_counts:
            raise ValueError("sweep needs at least one agent count")


@dataclass(frozen=True)
class SummaryRow:
    strategy: str
    agents: int
    oscillation: float
    loss: float
    fairness: float
    efficiency: float
    stability: float
    loss_avoidance: float


@dataclass(frozen=True)
class EpsilonPoint:
    epsilon: float
    efficiency: float
    loss: float


def all_strategies() -> tuple[StrategyKind, ...]:
    """The full strategy set in canonical report order."""
    return tuple(StrategyKind(name) for name in STRATEGY_NAMES)


def cell_seed(seed: int, strategy_label: str, agents: int) -> int:
    """Stable per-cell seed so cells are independent and reorderable."""
    digest = hashlib.sha256(f"{seed}:{strategy_label}:{agents}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _run_cell(args) -> SummaryRow:
    topology, kind, agents, steps, seed = args
    config = SimConfig(
        topology=topology,
        strategy=kind,
        num_agents=agents,
        engine=EngineParams(steps=steps),
        seed=cell_seed(seed, kind.name, agents),
    )
    scores = score(run(config))
    return SummaryRow(
        strategy=kind.name,
        agents=agents,
        oscillation=scores.oscillation,
        loss=scores.loss,
        fairness=scores.fairness,
        efficiency=scores.efficiency,
        stability=scores.stability,
        loss_avoidance=scores.loss_avoidance,
    )


def _worker_count() -> int:
    raw = os.environ.get("MPSIM_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def sweep_agents(spec: SweepSpec) -> list[SummaryRow]:
    """One row per (strategy, agent count), strategy-major, counts ascending."""
    cells = [
        (spec.topology, kind, agents, spec.steps, spec.seed)
        for kind in spec.strategies
        for agents in sorted(spec.agent_counts)
    ]
    workers = _worker_count()
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(cell) for cell in cells]


def sweep_epsilon(epsilons, agents: int, topology: Topology,
                  steps: int = 300, seed: int = 0) -> list[EpsilonPoint]:
    """Efficiency/loss of epsilon-greedy across an exploration grid."""
    points = []
    for eps in epsilons:
        kind = StrategyKind("epsilon_greedy", epsilon=eps)
        config = SimConfig(
            topology=topology,
            strategy=kind,
            num_agents=agents,
            engine=EngineParams(steps=steps),
            seed=cell_seed(seed, f"epsilon_greedy[{eps}]", agents),
        )
        scores = score(run(config))
        points.append(EpsilonPoint(epsilon=eps, efficiency=scores.efficiency,
                                   loss=scores.loss))
    return points


def _format_value(value, raw: bool) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(value) if raw else f"{value:.2f}"


def emit_summary(rows: list[SummaryRow], fmt: str = "csv", raw: bool = False) -> str:
    """Render sweep rows as CSV (2 d.p., or full precision with raw) or markdown."""
    if not rows:
        raise ValueError("no rows to emit")
    cells = [
        [row.strategy, row.agents, row.oscillation, row.loss, row.fairness,
         row.efficiency, row.stability, row.loss_avoidance]
        for row in rows
    ]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for values in cells:
            writer.writerow([values[0]] + [_format_value(v, raw) for v in values[1:]])
        return buffer.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(SUMMARY_HEADER) + " |",
                 "|" + "|".join([" --- "] * len(SUMMARY_HEADER)) + "|"]
        for values in cells:
            rendered = [values[0]] + [_format_value(v, raw=False) for v in values[1:]]
            lines.append("| " + " | ".join(rendered) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'markdown'")


def emit_epsilon(points: list[EpsilonPoint], raw: bool = False) -> str:
    """Render an epsilon sensitivity sweep as CSV."""
    if not points:
        raise ValueError("no rows to emit")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(EPSILON_HEADER)
    for point in points:
        writer.writerow([
            repr(point.epsilon) if raw else f"{point.epsilon:g}",
            _format_value(point.efficiency, raw),
            _format_value(point.loss, raw),
        ])
    return buffer.getvalue()


def parse_summary_csv(text: str) -> list[SummaryRow]:
    """Read back a summary CSV (raw or rounded) for re-rendering."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty results file") from None
    if tuple(header) != SUMMARY_HEADER:
        raise ValueError(f"unexpected header {header!r}")
    rows = []
    for record in reader:
        if not record:
            continue
        if len(record) != len(SUMMARY_HEADER):
            raise ValueError(f"malformed row {record!r}")
        rows.append(SummaryRow(
            strategy=record[0],
            agents=int(record[1]),
            oscillation=float(record[2]),
            loss=float(record[3]),
            fairness=float(record[4]),
            efficiency=float(record[5]),
            stability=float(record[6]),
            loss_avoidance=float(record[7]),
        ))
    if not rows:
        raise ValueError("results file has no data rows")
    return rows
