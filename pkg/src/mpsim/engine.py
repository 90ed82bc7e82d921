"""Discrete-time multipath congestion simulation.

Each step: every agent commits its full window to one selected path,
per-path loads are aggregated, overload is shed proportionally across
the senders on that path, and every agent's congestion window reacts
(multiplicative decrease on loss, RTT-paced additive increase
otherwise). Telemetry records per-step per-path load/overflow/RTT plus
the final windows; the metrics layer consumes nothing else.

Runs are pure functions of their SimConfig: all randomness flows from
the config seed through per-agent streams.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .strategy import (
    PathView,
    StrategyKind,
    StrategyState,
    select_attribute_aware,
    select_blest,
    select_epsilon_greedy,
    select_min_load,
    select_min_rtt,
    select_round_robin,
    select_wrr,
    wrr_schedule,
)
from .topology import HIGH_COST_TAG, Topology

# strategies whose choice is a pure function of the shared view, hence
# identical for every agent within a step
_STATELESS = frozenset({"min_rtt", "min_load", "attribute_aware", "blest"})


@dataclass(frozen=True)
class AimdParams:
    """Congestion controller constants; windows are real-valued packets."""

    initial_cwnd: float = 1.0
    alpha: float = 1.0
    beta: float = 0.5
    cwnd_floor: float = 1.0
    mbps_per_cwnd: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if self.cwnd_floor <= 0:
            raise ValueError("cwnd_floor must be positive")
        if self.mbps_per_cwnd <= 0:
            raise ValueError("mbps_per_cwnd must be positive")


@dataclass(frozen=True)
class EngineParams:
    steps: int = 300
    step_ms: float = 10.0
    queue_scale_ms: float = 10.0

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.step_ms <= 0:
            raise ValueError("step_ms must be positive")
        if self.queue_scale_ms < 0:
            raise ValueError("queue_scale_ms must be >= 0")


@dataclass
class AgentState:
    """One flow's mutable state; owned by exactly one agent."""

    agent_id: int
    cwnd: float
    strategy_state: StrategyState
    chosen_path: int | None = None


@dataclass(frozen=True)
class SimConfig:
    topology: Topology
    strategy: StrategyKind
    num_agents: int
    aimd: AimdParams = AimdParams()
    engine: EngineParams = EngineParams()
    seed: int = 0
    forbidden_tags: frozenset[str] = frozenset({HIGH_COST_TAG})

    def __post_init__(self):
        if self.num_agents < 1:
            raise ValueError("num_agents must be >= 1")


@dataclass(frozen=True)
class StepRecord:
    """Aggregate outcome of one step; overflow_p == max(0, load_p - cap_p)."""

    step: int
    loads: tuple[float, ...]
    overflows: tuple[float, ...]
    inst_rtts: tuple[float, ...]


@dataclass(frozen=True)
class Telemetry:
    records: tuple[StepRecord, ...]
    final_cwnds: tuple[float, ...]
    config: SimConfig


def rtt_instantaneous(base_rtt_ms: float, load_mbps: float, capacity_mbps: float,
                      queue_scale_ms: float) -> float:
    """Base RTT plus a queueing term that activates above capacity."""
    if capacity_mbps <= 0:
        raise ValueError("capacity must be positive")
    if queue_scale_ms < 0:
        raise ValueError("queue scale must be >= 0")
    return base_rtt_ms + max(0.0, queue_scale_ms * (load_mbps / capacity_mbps - 1.0))


def apportion_loss(agent_loads: list[float], capacity_mbps: float) -> tuple[list[float], float]:
    """Split a path's overflow across its senders, pro rata by contribution.

    Returns (per-agent losses, overflow). Losses sum to the overflow
    exactly (within float additive error).
    """
    total = sum(agent_loads)
    overflow = max(0.0, total - capacity_mbps)
    if overflow == 0.0 or total == 0.0:
        return [0.0] * len(agent_loads), overflow
    return [overflow * load / total for load in agent_loads], overflow


def update_cwnd(cwnd: float, lost: bool, path_rtt_ms: float, step_ms: float,
                params: AimdParams) -> float:
    """One AIMD reaction: halve (clamped at the floor) on loss, otherwise
    grow by alpha per path RTT, accrued fractionally each step."""
    if lost:
        return max(params.cwnd_floor, params.beta * cwnd)
    return cwnd + params.alpha * (step_ms / path_rtt_ms)


def _views(topology: Topology, prev: StepRecord | None) -> list[PathView]:
    views = []
    for i, path in enumerate(topology.paths):
        views.append(
            PathView(
                path_id=path.id,
                capacity_mbps=path.capacity_mbps,
                inst_rtt_ms=prev.inst_rtts[i] if prev is not None else path.base_rtt_ms,
                prev_load_mbps=prev.loads[i] if prev is not None else 0.0,
                attributes=path.attributes,
            )
        )
    return views


def _stateless_choice(strategy: StrategyKind, views: list[PathView],
                      forbidden_tags: frozenset[str]) -> int:
    if strategy.name == "min_rtt":
        return select_min_rtt(views)
    if strategy.name == "min_load":
        return select_min_load(views)
    if strategy.name == "attribute_aware":
        return select_attribute_aware(views, forbidden_tags)
    return select_blest(views, strategy.filter_factor)


def step(agents: list[AgentState], topology: Topology, prev_record: StepRecord | None,
         config: SimConfig, schedule: tuple[int, ...] | None = None,
         step_index: int = 0) -> StepRecord:
    """Advance the simulation one step, mutating agents in place."""
    views = _views(topology, prev_record)
    strategy = config.strategy

    if strategy.name in _STATELESS:
        choice = _stateless_choice(strategy, views, config.forbidden_tags)
        for agent in agents:
            agent.chosen_path = choice
    elif strategy.name == "round_robin":
        for agent in agents:
            agent.chosen_path = select_round_robin(agent.strategy_state, topology.path_count)
    elif strategy.name == "weighted_round_robin":
        for agent in agents:
            agent.chosen_path = select_wrr(agent.strategy_state, schedule)
    else:
        for agent in agents:
            agent.chosen_path = select_epsilon_greedy(agent.strategy_state, views,
                                                      strategy.epsilon)

    loads = [0.0] * topology.path_count
    for agent in agents:
        loads[agent.chosen_path - 1] += agent.cwnd * config.aimd.mbps_per_cwnd

    overflows = []
    inst_rtts = []
    for i, path in enumerate(topology.paths):
        overflows.append(max(0.0, loads[i] - path.capacity_mbps))
        # queue delay follows the traffic the path actually carries;
        # shed overload does not keep adding delay
        delivered = min(loads[i], path.capacity_mbps)
        inst_rtts.append(
            rtt_instantaneous(path.base_rtt_ms, delivered, path.capacity_mbps,
                              config.engine.queue_scale_ms)
        )

    # any positive overflow gives every sender on that path a positive
    # pro-rata share, so the loss flag needs no per-agent division
    for agent in agents:
        idx = agent.chosen_path - 1
        agent.cwnd = update_cwnd(agent.cwnd, overflows[idx] > 0.0, inst_rtts[idx],
                                 config.engine.step_ms, config.aimd)

    return StepRecord(step=step_index, loads=tuple(loads), overflows=tuple(overflows),
                      inst_rtts=tuple(inst_rtts))


def run(config: SimConfig) -> Telemetry:
    """Execute a full simulation; same config and seed give identical telemetry."""
    schedule = None
    if config.strategy.name == "weighted_round_robin":
        schedule = wrr_schedule(config.topology.capacities())

    agents = []
    for i in range(config.num_agents):
        state = StrategyState()
        if schedule is not None:
            # stagger start slots so concurrent windows spread over the
            # schedule instead of marching on one path per step
            state.rr_cursor = i % len(schedule)
        if config.strategy.name == "epsilon_greedy":
            state.rng = random.Random(f"{config.seed}:{i}")
        agents.append(AgentState(agent_id=i, cwnd=float(config.aimd.initial_cwnd),
                                 strategy_state=state))

    records: list[StepRecord] = []
    prev: StepRecord | None = None
    for t in range(config.engine.steps):
        prev = step(agents, config.topology, prev, config, schedule, step_index=t)
        records.append(prev)
    return Telemetry(records=tuple(records),
                     final_cwnds=tuple(a.cwnd for a in agents),
                     config=config)


def timeseries_csv(telemetry: Telemetry) -> str:
    """Per-(step, path) load/overflow/RTT rows for plotting."""
    lines = ["step,path_id,load_mbps,overflow_mbps,inst_rtt_ms"]
    for record in telemetry.records:
        for i in range(len(record.loads)):
            lines.append(
                f"{record.step},{i + 1},{record.loads[i]:.6f},"
                f"{record.overflows[i]:.6f},{record.inst_rtts[i]:.6f}"
            )
    return "\n".join(lines) + "\n"
