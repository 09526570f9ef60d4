from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ef1price import (
    Allocation,
    gen_intro_example,
    gen_sqrt_n_instance,
    gen_three_agent_tight,
    gen_two_agent_tight,
    validate_instance,
)


def alloc(*bundles):
    return Allocation.from_lists(bundles)


@pytest.fixture
def two_tight():
    return gen_two_agent_tight()


@pytest.fixture
def two_tight_scaled():
    return validate_instance([[3, 3, 3, 0], [2, 2, 2, 3]])


@pytest.fixture
def three_tight():
    return gen_three_agent_tight()


@pytest.fixture
def intro():
    return gen_intro_example()


@pytest.fixture
def sqrt4():
    return gen_sqrt_n_instance(4, 1)


def small_instances(n_values=(2, 3), m_max=4, levels=(0, 1, 2, 3)):
    """Strategy for small valid instances (every item valued by someone)."""

    def build(n):
        column = st.lists(
            st.sampled_from(levels), min_size=n, max_size=n
        ).filter(lambda c: any(c))
        return st.lists(column, min_size=2, max_size=m_max).map(
            lambda cols: validate_instance(
                [[Fraction(col[i]) for col in cols] for i in range(n)]
            )
        )

    return st.sampled_from(n_values).flatmap(build)


def allocations_for(inst):
    """Strategy for complete allocations of an instance."""
    return st.lists(
        st.integers(0, inst.n - 1), min_size=inst.m, max_size=inst.m
    ).map(
        lambda assign: Allocation.from_lists(
            [[g for g in range(inst.m) if assign[g] == j] for j in range(inst.n)]
        )
    )
