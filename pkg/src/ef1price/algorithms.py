"""EF1 allocation algorithms: plain round-robin, the modified two-agent
round-robin, and three-agent repeated max-matching.

Every run returns the allocation together with a replayable trace; replaying
the trace reconstructs the allocation exactly, which is what the golden tests
and the CLI's trace-replay command lean on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import (
    Allocation,
    BadShape,
    InputError,
    Instance,
    NotNormalized,
    classify_ternary,
    integer_matrix,
    is_normalized,
)
from .matching import ValuationGraph, non_wasteful_max_matching


class NotTwoAgents(InputError):
    pass


class NotThreeAgents(InputError):
    pass


class TraceMismatch(InputError):
    pass


@dataclass(frozen=True)
class PickEvent:
    agent: int
    item: int


@dataclass(frozen=True)
class DumpEvent:
    """The whole remaining pool handed to one agent in a single step."""

    dump_to: int
    items: tuple[int, ...]


@dataclass(frozen=True)
class RemoveEvent:
    agent: int


TraceEvent = Union[PickEvent, DumpEvent, RemoveEvent]


@dataclass(frozen=True)
class TraceRound:
    number: int
    events: tuple[TraceEvent, ...]


@dataclass(frozen=True)
class AlgorithmTrace:
    rounds: tuple[TraceRound, ...]


def trace_to_json(trace: AlgorithmTrace) -> list:
    rounds = []
    for rnd in trace.rounds:
        events = []
        for ev in rnd.events:
            if isinstance(ev, PickEvent):
                events.append({"agent": ev.agent, "item": ev.item})
            elif isinstance(ev, DumpEvent):
                events.append({"dump_to": ev.dump_to, "items": list(ev.items)})
            else:
                events.append({"removed_agent": ev.agent})
        rounds.append({"round": rnd.number, "events": events})
    return rounds


def trace_from_json(data: object) -> AlgorithmTrace:
    if not isinstance(data, list):
        raise BadShape("trace JSON must be a list of rounds")
    rounds = []
    for entry in data:
        if not isinstance(entry, dict) or "round" not in entry or "events" not in entry:
            raise BadShape("each trace round needs 'round' and 'events'")
        events: list[TraceEvent] = []
        for ev in entry["events"]:
            if not isinstance(ev, dict):
                raise BadShape("trace events must be objects")
            if "dump_to" in ev:
                events.append(DumpEvent(dump_to=ev["dump_to"], items=tuple(ev["items"])))
            elif "removed_agent" in ev:
                events.append(RemoveEvent(agent=ev["removed_agent"]))
            elif "agent" in ev and "item" in ev:
                events.append(PickEvent(agent=ev["agent"], item=ev["item"]))
            else:
                raise BadShape(f"unrecognized trace event {ev!r}")
        rounds.append(TraceRound(number=entry["round"], events=tuple(events)))
    return AlgorithmTrace(rounds=tuple(rounds))


def replay_trace(inst: Instance, trace: AlgorithmTrace) -> Allocation:
    """Rebuild the allocation a trace describes, validating it against the
    instance shape. An empty trace replays to all-empty bundles.
    """
    bundles: list[list[int]] = [[] for _ in range(inst.n)]
    taken: set[int] = set()

    def give(agent: int, item: int) -> None:
        if not 0 <= agent < inst.n:
            raise TraceMismatch(f"trace references agent {agent} on an {inst.n}-agent instance")
        if not 0 <= item < inst.m:
            raise TraceMismatch(f"trace references item {item} on an {inst.m}-item instance")
        if item in taken:
            raise TraceMismatch(f"trace allocates item {item} twice")
        taken.add(item)
        bundles[agent].append(item)

    for rnd in trace.rounds:
        for ev in rnd.events:
            if isinstance(ev, PickEvent):
                give(ev.agent, ev.item)
            elif isinstance(ev, DumpEvent):
                for item in ev.items:
                    give(ev.dump_to, item)
            else:
                if not 0 <= ev.agent < inst.n:
                    raise TraceMismatch(f"trace removes unknown agent {ev.agent}")
    return Allocation.from_lists(bundles)


def _rank_fn(tie_order: Sequence[int] | None):
    if tie_order is None:
        return lambda g: g
    return lambda g: tie_order[g]


def round_robin(
    inst: Instance,
    order: Sequence[int] | None = None,
    tie_order: Sequence[int] | None = None,
) -> tuple[Allocation, AlgorithmTrace]:
    """Agents pick their most valuable remaining item in cyclic order until no
    items remain; zero-valued items are picked too. Ties go to the lowest
    item index (or lowest tie_order rank when given).
    """
    if order is None:
        order = tuple(range(inst.n))
    if sorted(order) != list(range(inst.n)):
        raise BadShape(f"order {order!r} is not a permutation of the {inst.n} agents")
    rank = _rank_fn(tie_order)

    remaining = set(range(inst.m))
    bundles: list[list[int]] = [[] for _ in range(inst.n)]
    rounds: list[TraceRound] = []
    number = 0
    while remaining:
        number += 1
        events: list[TraceEvent] = []
        for agent in order:
            if not remaining:
                break
            row = inst.values[agent]
            pick = min(remaining, key=lambda g: (-row[g], rank(g)))
            remaining.remove(pick)
            bundles[agent].append(pick)
            events.append(PickEvent(agent=agent, item=pick))
        rounds.append(TraceRound(number=number, events=tuple(events)))
    return Allocation.from_lists(bundles), AlgorithmTrace(rounds=tuple(rounds))


def m2rr(
    inst: Instance, tie_order: Sequence[int] | None = None
) -> tuple[Allocation, AlgorithmTrace]:
    """Modified two-agent round-robin over a normalized ternary instance.

    The agent holding more top-level values moves first (ties keep input
    order). On each turn the mover takes a remaining item of maximum own
    value, preferring among those an item the other agent values least
    (remaining ties to the lowest index). A mover who values every pooled
    item at zero instead hands the whole pool to the other agent, ending
    the run.
    """
    if inst.n != 2:
        raise NotTwoAgents(f"need exactly 2 agents, got {inst.n}")
    profile = classify_ternary(inst)
    if not is_normalized(inst):
        raise NotNormalized("agents disagree on the total value of all items")
    rank = _rank_fn(tie_order)

    # Integer view: scaling by the common denominator preserves every
    # comparison the algorithm makes.
    vals, scale = integer_matrix(inst)
    a_int = int(profile.a * scale)
    a_counts = [sum(1 for v in vals[i] if v == a_int) for i in range(2)]
    first = 1 if a_counts[1] > a_counts[0] else 0
    turn_order = (first, 1 - first)

    pool = set(range(inst.m))
    bundles: list[list[int]] = [[], []]
    rounds: list[TraceRound] = []
    number = 0
    while pool:
        number += 1
        events: list[TraceEvent] = []
        for mover in turn_order:
            if not pool:
                break
            mine, other = vals[mover], vals[1 - mover]
            if all(mine[g] == 0 for g in pool):
                dumped = tuple(sorted(pool, key=rank))
                bundles[1 - mover].extend(dumped)
                events.append(DumpEvent(dump_to=1 - mover, items=dumped))
                pool.clear()
                break
            pick = min(pool, key=lambda g: (-mine[g], other[g], rank(g)))
            pool.remove(pick)
            bundles[mover].append(pick)
            events.append(PickEvent(agent=mover, item=pick))
        rounds.append(TraceRound(number=number, events=tuple(events)))
    return Allocation.from_lists(bundles), AlgorithmTrace(rounds=tuple(rounds))


def rmm(
    inst: Instance, tie_order: Sequence[int] | None = None
) -> tuple[Allocation, AlgorithmTrace]:
    """Repeated max-matching over a normalized ternary three-agent instance.

    Each round computes a non-wasteful maximum-weight matching on the graph
    of positive values, hands every matched agent her item, removes matched
    items, and drops agents left with no positively-valued item.
    """
    if inst.n != 3:
        raise NotThreeAgents(f"need exactly 3 agents, got {inst.n}")
    classify_ternary(inst)
    if not is_normalized(inst):
        raise NotNormalized("agents disagree on the total value of all items")

    vals, _ = integer_matrix(inst)
    live_agents = [i for i in range(3) if any(vals[i][g] > 0 for g in range(inst.m))]
    live_items = set(range(inst.m))
    bundles: list[list[int]] = [[], [], []]
    rounds: list[TraceRound] = []
    number = 0
    while live_items:
        number += 1
        edges = tuple(
            (i, g, vals[i][g]) for i in live_agents for g in sorted(live_items) if vals[i][g] > 0
        )
        graph = ValuationGraph(
            agents=tuple(live_agents), items=tuple(sorted(live_items)), edges=edges
        )
        matching = non_wasteful_max_matching(graph, tie_order=tie_order)
        events: list[TraceEvent] = []
        for agent, item in matching.pairs:
            bundles[agent].append(item)
            live_items.remove(item)
            events.append(PickEvent(agent=agent, item=item))
        for agent in list(live_agents):
            if not any(vals[agent][g] > 0 for g in live_items):
                live_agents.remove(agent)
                events.append(RemoveEvent(agent=agent))
        rounds.append(TraceRound(number=number, events=tuple(events)))
    return Allocation.from_lists(bundles), AlgorithmTrace(rounds=tuple(rounds))


ALGORITHMS = {
    "round_robin": round_robin,
    "m2rr": m2rr,
    "rmm": rmm,
}


def run_algorithm(inst: Instance, alg: str) -> tuple[Allocation, AlgorithmTrace, Fraction]:
    """Dispatch by name and return (allocation, trace, social welfare)."""
    from .fairness import social_welfare

    if alg not in ALGORITHMS:
        raise BadShape(f"unknown algorithm {alg!r}; expected one of {sorted(ALGORITHMS)}")
    alloc, trace = ALGORITHMS[alg](inst)
    return alloc, trace, social_welfare(inst, alloc)
