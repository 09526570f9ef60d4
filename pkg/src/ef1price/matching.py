"""Maximum-weight bipartite matchings between agents and items, by exhaustive
enumeration, plus the non-wasteful selection rule used by repeated-max-matching.

Scoped to graphs with at most 3 live agents: a maximum-weight matching then
touches at most 3 items, so exact enumeration is cheap and the tie-break is
exact, which matters more here than asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import BadShape, InputError, Instance

MAX_LIVE_AGENTS = 3


class TooManyAgents(InputError):
    def __init__(self, count: int):
        super().__init__(f"matching enumeration supports at most {MAX_LIVE_AGENTS} live agents, got {count}")


class EmptyGraph(InputError):
    pass


@dataclass(frozen=True)
class ValuationGraph:
    """Bipartite agent-item graph; an edge exists iff the value is positive.

    Weights are exact numbers (Fraction or int; ints are exact too and faster
    in inner loops).
    """

    agents: tuple[int, ...]
    items: tuple[int, ...]
    edges: tuple[tuple[int, int, Fraction | int], ...]  # (agent, item, weight > 0)
    _weights: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        agents = set(self.agents)
        items = set(self.items)
        weights = {}
        for agent, item, w in self.edges:
            if agent not in agents or item not in items:
                raise BadShape(f"edge ({agent}, {item}) not within declared nodes")
            if w <= 0:
                raise BadShape(f"edge ({agent}, {item}) has non-positive weight {w}")
            weights[(agent, item)] = w
        for agent in self.agents:
            if not any(a == agent for a, _, _ in self.edges):
                raise BadShape(f"live agent {agent} has no incident edge")
        object.__setattr__(self, "_weights", weights)

    @staticmethod
    def from_weights(weights: dict) -> "ValuationGraph":
        """Build from a {(agent, item): weight} mapping; zero weights are dropped."""
        edges = tuple(sorted((a, g, w) for (a, g), w in weights.items() if w > 0))
        agents = tuple(sorted({a for a, _, _ in edges}))
        items = tuple(sorted({g for (a, g), w in weights.items()}))
        return ValuationGraph(agents=agents, items=items, edges=edges)

    @staticmethod
    def from_instance(inst: Instance) -> "ValuationGraph":
        """Graph over all items with every positively-valuing agent live."""
        edges = tuple(
            (i, g, inst.values[i][g])
            for i in range(inst.n)
            for g in range(inst.m)
            if inst.values[i][g] > 0
        )
        agents = tuple(sorted({i for i, _, _ in edges}))
        return ValuationGraph(agents=agents, items=tuple(range(inst.m)), edges=edges)

    def weight(self, agent: int, item: int) -> Fraction:
        return self._weights.get((agent, item), Fraction(0))

    def items_of(self, agent: int) -> list[int]:
        return sorted(g for (a, g) in self._weights if a == agent)


@dataclass(frozen=True)
class Matching:
    """A set of agent-item pairs, each agent and item used at most once."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))
        agents = [a for a, _ in self.pairs]
        items = [g for _, g in self.pairs]
        if len(set(agents)) != len(agents) or len(set(items)) != len(items):
            raise BadShape("matching reuses an agent or an item")

    def item_of(self, agent: int) -> int | None:
        for a, g in self.pairs:
            if a == agent:
                return g
        return None

    def total_weight(self, graph: ValuationGraph) -> Fraction:
        return sum((graph.weight(a, g) for a, g in self.pairs), Fraction(0))


def enumerate_max_weight_matchings(graph: ValuationGraph) -> list[Matching]:
    """All matchings of maximum total weight, sorted by their pair lists.

    Enumerates every partial injection of live agents into items along edges;
    exact and fast for <= 3 agents.
    """
    if len(graph.agents) > MAX_LIVE_AGENTS:
        raise TooManyAgents(len(graph.agents))
    agent_items = {a: graph.items_of(a) for a in graph.agents}

    best: list[tuple[tuple[int, int], ...]] = []
    best_weight: Fraction | None = None

    def extend(idx: int, used: set[int], pairs: list[tuple[int, int]], weight: Fraction):
        nonlocal best, best_weight
        if idx == len(graph.agents):
            if best_weight is None or weight > best_weight:
                best_weight = weight
                best = [tuple(pairs)]
            elif weight == best_weight:
                best.append(tuple(pairs))
            return
        agent = graph.agents[idx]
        extend(idx + 1, used, pairs, weight)  # leave this agent unmatched
        for g in agent_items[agent]:
            if g in used:
                continue
            used.add(g)
            pairs.append((agent, g))
            extend(idx + 1, used, pairs, weight + graph.weight(agent, g))
            pairs.pop()
            used.remove(g)

    extend(0, set(), [], Fraction(0))
    matchings = sorted({pairs for pairs in best})
    return [Matching(pairs=p) for p in matchings]


def pair_penalty(graph: ValuationGraph, agent: int, item: int) -> Fraction:
    """How much the other live agents value this item (max over them)."""
    return max(
        (graph.weight(other, item) for other in graph.agents if other != agent),
        default=Fraction(0),
    )


def _penalty_key(graph: ValuationGraph, matching: Matching) -> tuple:
    penalties = sorted((pair_penalty(graph, a, g) for a, g in matching.pairs), reverse=True)
    return tuple(penalties)


def non_wasteful_max_matching(
    graph: ValuationGraph, tie_order: Sequence[int] | None = None
) -> Matching:
    """Pick, among maximum-weight matchings, one whose matched items are least
    valued by the non-receiving agents.

    Penalty vectors (one penalty per matched pair, sorted descending) are
    compared lexicographically; remaining ties fall to the smallest
    (agent, item-rank) pair list, where rank defaults to the item index.
    """
    if not graph.edges:
        raise EmptyGraph("graph has no edges")
    candidates = enumerate_max_weight_matchings(graph)

    def rank(item: int) -> int:
        return tie_order[item] if tie_order is not None else item

    def key(matching: Matching):
        ranked_pairs = sorted((a, rank(g)) for a, g in matching.pairs)
        return (_penalty_key(graph, matching), ranked_pairs)

    return min(candidates, key=key)


def satisfies_exchange_property(graph: ValuationGraph, matching: Matching) -> bool:
    """No matched pair (i, g) may be swappable for an unmatched item q that i
    values equally but that carries a strictly smaller penalty.
    """
    matched_items = {g for _, g in matching.pairs}
    for agent, g in matching.pairs:
        w = graph.weight(agent, g)
        for q in graph.items_of(agent):
            if q in matched_items:
                continue
            if graph.weight(agent, q) == w and pair_penalty(graph, agent, q) < pair_penalty(
                graph, agent, g
            ):
                return False
    return True
