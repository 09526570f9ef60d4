"""Instance constructors: the lower-bound families and an exhaustive,
canonically-ordered enumerator of small normalized ternary instances.

The enumerator quotients by item-column permutation (welfare oracles are
column-permutation invariant) but never by agent rows: the two-agent
algorithm's ordering rule is row-sensitive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import isqrt
from typing import Iterator

from .core import (
    BadShape,
    InputError,
    Instance,
    RationalLike,
    canonical_scaling,
    parse_rational,
    validate_instance,
)


class NotPerfectSquare(InputError):
    def __init__(self, n: int):
        super().__init__(f"agent count {n} is not a perfect square >= 4")


@dataclass(frozen=True)
class EnumerationParams:
    """Bounds for the exhaustive sweep: n agents, items from 2 to m_max,
    integer level pairs a > b >= 1.
    """

    n: int
    m_max: int
    level_pairs: tuple[tuple[int, int], ...]
    require_normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "level_pairs", tuple(tuple(p) for p in self.level_pairs))
        if self.n not in (2, 3):
            raise BadShape(f"enumeration supports n in (2, 3), got {self.n}")
        if not 2 <= self.m_max <= 8:
            raise BadShape(f"m_max must be between 2 and 8, got {self.m_max}")
        for a, b in self.level_pairs:
            if not (isinstance(a, int) and isinstance(b, int) and a > b >= 1):
                raise BadShape(f"level pair ({a}, {b}) must be integers with a > b >= 1")


def gen_sqrt_n_instance(n: int, b: RationalLike = 1) -> Instance:
    """The n-agent, n-item family whose EF1 price grows with sqrt(n).

    sqrt(n) specialist agents (listed first) each value a distinct block of
    sqrt(n) items at a = b*sqrt(n); the remaining agents value every item at
    b, so the instance is normalized and ternary.
    """
    root = isqrt(n)
    if n < 4 or root * root != n:
        raise NotPerfectSquare(n)
    b = parse_rational(b)
    if b <= 0:
        raise BadShape(f"level b must be positive, got {b}")
    a = b * root
    rows: list[list[Fraction]] = []
    for s in range(root):
        block = range(s * root, (s + 1) * root)
        rows.append([a if g in block else Fraction(0) for g in range(n)])
    for _ in range(n - root):
        rows.append([b] * n)
    return validate_instance(rows)


def gen_two_agent_tight() -> Instance:
    """The 2x4 instance whose best EF1 welfare is an 11/12 slice of optimal."""
    return validate_instance(
        [
            [Fraction(3, 2), Fraction(3, 2), Fraction(3, 2), Fraction(0)],
            [Fraction(1), Fraction(1), Fraction(1), Fraction(3, 2)],
        ]
    )


def gen_three_agent_tight() -> Instance:
    """The 3x6 instance whose best EF1 welfare is a 5/6 slice of optimal."""
    return validate_instance(
        [
            [2, 2, 2, 0, 0, 0],
            [0, 0, 0, 2, 2, 2],
            [1, 1, 1, 1, 1, 1],
        ]
    )


def gen_intro_example() -> Instance:
    """A 2x3 four-valued instance (not ternary); exercises the oracles and
    fairness predicates only.
    """
    return validate_instance(
        [
            [Fraction(1, 2), Fraction(1, 2), Fraction(0)],
            [Fraction(49, 100), Fraction(13, 50), Fraction(1, 4)],
        ]
    )


def sort_columns(inst: Instance) -> Instance:
    """Sort item columns ascending by their value vectors."""
    cols = sorted(tuple(inst.values[i][g] for i in range(inst.n)) for g in range(inst.m))
    return Instance(
        n=inst.n,
        m=inst.m,
        values=tuple(tuple(col[i] for col in cols) for i in range(inst.n)),
    )


def canonicalize(inst: Instance) -> Instance:
    """Canonical representative: least integer scaling, then sorted columns.

    Enumerated instances come out in exactly this form, so membership checks
    against the stream go through here.
    """
    return sort_columns(canonical_scaling(inst))


def _column_types(n: int, a: int, b: int) -> list[tuple[int, ...]]:
    # Every per-item value vector except all-zero (worthless items are invalid).
    return sorted(c for c in product((0, b, a), repeat=n) if any(c))


def enumerate_ternary_instances(params: EnumerationParams) -> Iterator[Instance]:
    """Yield every normalized ternary instance in canonical column order.

    For each item count and level pair, streams all column multisets whose
    matrix uses both levels (so ternary classification succeeds), has no
    worthless item, and, when required, gives every agent the same total.
    The stream is deterministic: m ascending, level pairs in given order,
    columns lexicographic.
    """
    n = params.n
    for m in range(2, params.m_max + 1):
        for a, b in params.level_pairs:
            col_types = _column_types(n, a, b)
            has_a = [a in c for c in col_types]
            has_b = [b in c for c in col_types]
            index = {c: k for k, c in enumerate(col_types)}
            for cols in combinations_with_replacement(col_types, m):
                row_sums = [0] * n
                for col in cols:
                    for i in range(n):
                        row_sums[i] += col[i]
                if params.require_normalized and any(s != row_sums[0] for s in row_sums):
                    continue
                if not any(has_a[index[c]] for c in cols):
                    continue
                if not any(has_b[index[c]] for c in cols):
                    continue
                yield Instance(
                    n=n,
                    m=m,
                    values=tuple(
                        tuple(Fraction(col[i]) for col in cols) for i in range(n)
                    ),
                )
