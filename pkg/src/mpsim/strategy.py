"""Path selection policies.

Every selector is a pure function of the agent's view of the network;
the cyclic policies and epsilon-greedy thread their position/RNG through
a per-agent StrategyState. Ties are always broken toward the lowest
path id so that runs are order-stable and reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

STRATEGY_NAMES = (
    "min_rtt",
    "min_load",
    "attribute_aware",
    "round_robin",
    "weighted_round_robin",
    "epsilon_greedy",
    "blest",
)

DEFAULT_EPSILON = 0.1
DEFAULT_BLEST_FILTER = 1.5


@dataclass(frozen=True)
class PathView:
    """What one agent can observe about one path when deciding.

    inst_rtt_ms and prev_load_mbps describe the previous completed step;
    at step 0 they are the base RTT and zero.
    """

    path_id: int
    capacity_mbps: float
    inst_rtt_ms: float
    prev_load_mbps: float
    attributes: frozenset[str] = frozenset()


@dataclass(frozen=True)
class StrategyKind:
    """A strategy name plus its tunables."""

    name: str
    epsilon: float = DEFAULT_EPSILON
    filter_factor: float = DEFAULT_BLEST_FILTER

    def __post_init__(self):
        if self.name not in STRATEGY_NAMES:
            raise ValueError(
                f"unknown strategy {self.name!r}; valid names: {', '.join(STRATEGY_NAMES)}"
            )
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        if self.filter_factor < 1.0:
            raise ValueError("filter_factor must be >= 1")


@dataclass
class StrategyState:
    """Mutable per-agent strategy state; never shared between agents."""

    rr_cursor: int = 0
    rng: random.Random | None = None


def select_min_rtt(views: Sequence[PathView]) -> int:
    """Greedy: the path with the lowest observed instantaneous RTT."""
    if not views:
        raise ValueError("cannot select from an empty path view")
    return min(views, key=lambda v: (v.inst_rtt_ms, v.path_id)).path_id


def select_min_load(views: Sequence[PathView]) -> int:
    """Cooperative: the path that carried the least load last step."""
    if not views:
        raise ValueError("cannot select from an empty path view")
    return min(views, key=lambda v: (v.prev_load_mbps, v.path_id)).path_id


def select_attribute_aware(views: Sequence[PathView], forbidden_tags: Iterable[str]) -> int:
    """Drop paths carrying any forbidden tag, then pick by min-RTT."""
    forbidden = frozenset(forbidden_tags)
    admissible = [v for v in views if not (v.attributes & forbidden)]
    if not admissible:
        raise ValueError("no admissible path after attribute filtering")
    return select_min_rtt(admissible)


def select_round_robin(state: StrategyState, path_count: int) -> int:
    """Fixed rotation over path ids; advances the cursor by one."""
    if path_count < 1:
        raise ValueError("path_count must be >= 1")
    path_id = 1 + state.rr_cursor % path_count
    state.rr_cursor += 1
    return path_id


def wrr_schedule(capacities_mbps: Sequence[float]) -> tuple[int, ...]:
    """Build the smooth weighted-round-robin slot sequence.

    Capacities are rounded to integers and reduced by their GCD; each
    path then owns weight/gcd slots per period. Slots are interleaved by
    the smooth-WRR rule: every slot each path gains its weight in
    credit, and the path with the most credit (lowest id on ties) is
    scheduled and pays the total weight back.
    """
    if not capacities_mbps:
        raise ValueError("no capacities given")
    weights = [int(round(c)) for c in capacities_mbps]
    if all(w <= 0 for w in weights):
        raise ValueError("all capacities round to zero")
    divisor = math.gcd(*(w for w in weights if w > 0))
    reduced = [w // divisor if w > 0 else 0 for w in weights]
    period = sum(reduced)
    credits = [0] * len(reduced)
    schedule = []
    for _ in range(period):
        for i, weight in enumerate(reduced):
            credits[i] += weight
        chosen = max(range(len(reduced)), key=lambda i: (credits[i], -i))
        credits[chosen] -= period
        schedule.append(chosen + 1)
    return tuple(schedule)


def select_wrr(state: StrategyState, schedule: Sequence[int]) -> int:
    """Walk the precomputed smooth-WRR schedule; advances the cursor."""
    if not schedule:
        raise ValueError("empty schedule")
    path_id = schedule[state.rr_cursor % len(schedule)]
    state.rr_cursor += 1
    return path_id


def select_epsilon_greedy(state: StrategyState, views: Sequence[PathView], epsilon: float) -> int:
    """Explore a uniformly random path with probability epsilon, else exploit min-RTT.

    Exploration may land on the currently best path; both draws come
    from the agent's own seeded stream, so decision sequences are
    reproducible bit for bit.
    """
    if not views:
        raise ValueError("cannot select from an empty path view")
    if state.rng is None:
        raise ValueError("epsilon-greedy needs a seeded rng in StrategyState")
    if state.rng.random() < epsilon:
        return views[state.rng.randrange(len(views))].path_id
    return select_min_rtt(views)


def select_blest(views: Sequence[PathView], filter_factor: float = DEFAULT_BLEST_FILTER) -> int:
    """Keep paths within filter_factor of the best RTT, then pick the fastest.

    Queueing delay is already folded into inst_rtt_ms, so the earliest
    completion estimate reduces to the instantaneous RTT itself.
    """
    if not views:
        raise ValueError("cannot select from an empty path view")
    best = min(v.inst_rtt_ms for v in views)
    candidates = [v for v in views if v.inst_rtt_ms <= filter_factor * best]
    return select_min_rtt(candidates)
