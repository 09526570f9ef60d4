"""Exact-rational data model for indivisible-goods allocation instances.

All values are `fractions.Fraction`; no floating point enters any welfare
computation. Instances are n x m matrices (agent i's value for item g),
allocations are ordered tuples of disjoint item bundles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]


class InputError(Exception):
    """Invalid instance, allocation, or parameter data."""


class BadShape(InputError):
    pass


class NegativeValue(InputError):
    def __init__(self, agent: int, item: int):
        self.agent = agent
        self.item = item
        super().__init__(f"agent {agent} values item {item} negatively")


class WorthlessItem(InputError):
    def __init__(self, item: int):
        self.item = item
        super().__init__(f"no agent values item {item} positively")


class NotTernary(InputError):
    def __init__(self, distinct_positive_count: int):
        self.distinct_positive_count = distinct_positive_count
        super().__init__(
            f"expected exactly 2 distinct positive value levels, found {distinct_positive_count}"
        )


class NotNormalized(InputError):
    pass


class IndexOutOfRange(InputError):
    pass


class ShapeMismatch(InputError):
    pass


def parse_rational(text: RationalLike) -> Fraction:
    """Parse "p/q" (or a bare integer / int / Fraction) into an exact Fraction.

    Floats are rejected: they would silently corrupt exact comparisons.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise BadShape(f"not a rational value: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise BadShape(f"not a rational value: {text!r}") from exc
    raise BadShape(f"not a rational value: {text!r}")


def format_rational(value: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    return str(value)


@dataclass(frozen=True)
class Instance:
    """A validated n-agent, m-item valuation matrix.

    values[i][g] is agent i's (nonnegative, exact) value for item g.
    Construct through validate_instance for untrusted input.
    """

    n: int
    m: int
    values: tuple[tuple[Fraction, ...], ...]

    def value(self, agent: int, item: int) -> Fraction:
        return self.values[agent][item]

    def row_sum(self, agent: int) -> Fraction:
        return sum(self.values[agent], Fraction(0))


@dataclass(frozen=True)
class TernaryProfile:
    """The two positive value levels of a ternary instance, a > b > 0."""

    a: Fraction
    b: Fraction


@dataclass(frozen=True)
class Allocation:
    """Disjoint item bundles, one per agent, in acquisition order.

    Bundles are tuples so traces replay to an identical object; set
    semantics (disjointness, no duplicates) are enforced on construction.
    """

    bundles: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for bundle in self.bundles:
            for item in bundle:
                if not isinstance(item, int) or item < 0:
                    raise ShapeMismatch(f"bad item index {item!r}")
                if item in seen:
                    raise ShapeMismatch(f"item {item} appears in more than one bundle")
                seen.add(item)

    @staticmethod
    def from_lists(bundles: Iterable[Iterable[int]]) -> "Allocation":
        return Allocation(tuple(tuple(b) for b in bundles))

    def items_allocated(self) -> frozenset[int]:
        return frozenset(g for bundle in self.bundles for g in bundle)

    def is_complete(self, m: int) -> bool:
        return self.items_allocated() == frozenset(range(m))

    def as_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(b) for b in self.bundles)


def validate_instance(raw: Sequence[Sequence[RationalLike]]) -> Instance:
    """Validate a raw matrix: >=2 agents, >=2 items, rectangular, nonnegative,
    every item valued positively by at least one agent.
    """
    rows = [tuple(parse_rational(v) for v in row) for row in raw]
    n = len(rows)
    if n < 2:
        raise BadShape(f"need at least 2 agents, got {n}")
    m = len(rows[0])
    if m < 2:
        raise BadShape(f"need at least 2 items, got {m}")
    for i, row in enumerate(rows):
        if len(row) != m:
            raise BadShape(f"row {i} has {len(row)} entries, expected {m}")
        for g, v in enumerate(row):
            if v < 0:
                raise NegativeValue(i, g)
    for g in range(m):
        if all(rows[i][g] == 0 for i in range(n)):
            raise WorthlessItem(g)
    return Instance(n=n, m=m, values=tuple(rows))


def is_normalized(inst: Instance) -> bool:
    """True iff all agents assign the same total value to the full item set."""
    first = inst.row_sum(0)
    return all(inst.row_sum(i) == first for i in range(1, inst.n))


def classify_ternary(inst: Instance) -> TernaryProfile:
    """Return the (a, b) levels of a ternary instance, a > b > 0.

    Requires exactly two distinct positive values in the matrix; instances
    with one positive level (or three or more) raise NotTernary.
    """
    positives = {v for row in inst.values for v in row if v > 0}
    if len(positives) != 2:
        raise NotTernary(len(positives))
    b, a = sorted(positives)
    return TernaryProfile(a=a, b=b)


def bundle_value(inst: Instance, agent: int, items: Iterable[int]) -> Fraction:
    """Agent's additive value for a set of items; the empty set is worth 0."""
    if not 0 <= agent < inst.n:
        raise IndexOutOfRange(f"agent {agent} out of range for n={inst.n}")
    row = inst.values[agent]
    total = Fraction(0)
    for g in items:
        if not 0 <= g < inst.m:
            raise IndexOutOfRange(f"item {g} out of range for m={inst.m}")
        total += row[g]
    return total


def canonical_scaling(inst: Instance) -> Instance:
    """Scale every value by the least positive rational making all entries
    integers. Keeps welfare ratios and all fairness comparisons intact while
    bounding integer sizes for exhaustive search.
    """
    den_lcm = 1
    num_gcd = 0
    for row in inst.values:
        for v in row:
            if v != 0:
                den_lcm = lcm(den_lcm, v.denominator)
                num_gcd = gcd(num_gcd, v.numerator)
    scale = Fraction(den_lcm, num_gcd)
    return Instance(
        n=inst.n,
        m=inst.m,
        values=tuple(tuple(v * scale for v in row) for row in inst.values),
    )


def integer_matrix(inst: Instance) -> tuple[list[list[int]], int]:
    """Return (matrix, s) with matrix[i][g] = s * values[i][g], all ints.

    s is the lcm of the denominators, so dividing by s recovers exact values.
    """
    s = 1
    for row in inst.values:
        for v in row:
            s = lcm(s, v.denominator)
    ints = [[int(v * s) for v in row] for row in inst.values]
    return ints, s


# ---------------------------------------------------------------------------
# JSON wire formats.
# Instance: {"agents": n, "items": m, "values": [["p/q", ...], ...]}
# Allocation: {"bundles": [[item indices], ...]}
# ---------------------------------------------------------------------------


def instance_to_json(inst: Instance) -> dict:
    return {
        "agents": inst.n,
        "items": inst.m,
        "values": [[format_rational(v) for v in row] for row in inst.values],
    }


def instance_from_json(data: object) -> Instance:
    if not isinstance(data, dict) or "values" not in data:
        raise BadShape("instance JSON must be an object with a 'values' matrix")
    values = data["values"]
    if not isinstance(values, list) or not all(isinstance(r, list) for r in values):
        raise BadShape("'values' must be a list of rows")
    inst = validate_instance(values)
    if "agents" in data and data["agents"] != inst.n:
        raise BadShape(f"'agents' says {data['agents']} but matrix has {inst.n} rows")
    if "items" in data and data["items"] != inst.m:
        raise BadShape(f"'items' says {data['items']} but matrix has {inst.m} columns")
    return inst


def allocation_to_json(alloc: Allocation) -> dict:
    return {"bundles": [list(bundle) for bundle in alloc.bundles]}


def allocation_from_json(data: object) -> Allocation:
    if not isinstance(data, dict) or "bundles" not in data:
        raise BadShape("allocation JSON must be an object with a 'bundles' list")
    bundles = data["bundles"]
    if not isinstance(bundles, list) or not all(isinstance(b, list) for b in bundles):
        raise BadShape("'bundles' must be a list of lists")
    for bundle in bundles:
        for item in bundle:
            if not isinstance(item, int) or isinstance(item, bool):
                raise BadShape(f"bad item index {item!r}")
    return Allocation.from_lists(bundles)
