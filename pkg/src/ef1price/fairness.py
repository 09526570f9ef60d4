"""Fairness predicates (envy-freeness, EF1) and exact social welfare.

All predicates accept incomplete allocations: unallocated items simply sit
in no bundle, which makes the checks usable for mid-algorithm diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Allocation, Instance, ShapeMismatch


@dataclass(frozen=True)
class Ef1Report:
    """Outcome of an EF1 check.

    violations lists ordered pairs (i, j) where agent i envies agent j and no
    single-item removal from j's bundle repairs it. witnesses records, for
    each envious-but-repairable pair, the repairing item of maximum value to
    the envious agent (ties to the lowest item index).
    """

    holds: bool
    violations: tuple[tuple[int, int], ...]
    witnesses: tuple[tuple[int, int, int], ...]

    def witness_for(self, envious: int, envied: int) -> int | None:
        for i, j, g in self.witnesses:
            if (i, j) == (envious, envied):
                return g
        return None


def _check_shape(inst: Instance, alloc: Allocation) -> None:
    if len(alloc.bundles) != inst.n:
        raise ShapeMismatch(
            f"allocation has {len(alloc.bundles)} bundles, instance has {inst.n} agents"
        )
    for bundle in alloc.bundles:
        for g in bundle:
            if g >= inst.m:
                raise ShapeMismatch(f"item {g} out of range for m={inst.m}")


def social_welfare(inst: Instance, alloc: Allocation) -> Fraction:
    """Sum over agents of each agent's value for her own bundle."""
    _check_shape(inst, alloc)
    total = Fraction(0)
    for i, bundle in enumerate(alloc.bundles):
        row = inst.values[i]
        for g in bundle:
            total += row[g]
    return total


def is_envy_free(inst: Instance, alloc: Allocation) -> bool:
    """True iff no agent values another agent's bundle above her own."""
    _check_shape(inst, alloc)
    own = [sum((inst.values[i][g] for g in alloc.bundles[i]), Fraction(0)) for i in range(inst.n)]
    for i in range(inst.n):
        row = inst.values[i]
        for j in range(inst.n):
            if i == j:
                continue
            if own[i] < sum((row[g] for g in alloc.bundles[j]), Fraction(0)):
                return False
    return True


def is_ef1(inst: Instance, alloc: Allocation) -> Ef1Report:
    """Check envy-freeness up to one item for every ordered agent pair.

    Agent i is satisfied with respect to a nonempty bundle A_j if some item
    g in A_j has value(i, A_i) >= value(i, A_j) - value(i, g); envy toward an
    empty bundle cannot occur (its value is 0).
    """
    _check_shape(inst, alloc)
    own = [sum((inst.values[i][g] for g in alloc.bundles[i]), Fraction(0)) for i in range(inst.n)]
    violations: list[tuple[int, int]] = []
    witnesses: list[tuple[int, int, int]] = []
    for i in range(inst.n):
        row = inst.values[i]
        for j in range(inst.n):
            if i == j or not alloc.bundles[j]:
                continue
            other = sum((row[g] for g in alloc.bundles[j]), Fraction(0))
            if own[i] >= other:
                continue
            # Envy exists; the best single removal is the item i values most.
            best = min(alloc.bundles[j], key=lambda g: (-row[g], g))
            if own[i] >= other - row[best]:
                witnesses.append((i, j, best))
            else:
                violations.append((i, j))
    return Ef1Report(
        holds=not violations,
        violations=tuple(sorted(violations)),
        witnesses=tuple(sorted(witnesses)),
    )
