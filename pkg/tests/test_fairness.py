from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ef1price.core import Allocation, Instance, ShapeMismatch, validate_instance
from ef1price.fairness import is_ef1, is_envy_free, social_welfare

from conftest import alloc, allocations_for, small_instances


def naive_ef1(values, bundles):
    """Direct transcription of the EF1 definition, independent of the library:
    for all ordered pairs (i, j) with a nonempty envied bundle, some item of
    that bundle can be removed to kill the envy.
    """
    n = len(values)
    for i in range(n):
        own = sum(values[i][g] for g in bundles[i])
        for j in range(n):
            if i == j or not bundles[j]:
                continue
            ok = False
            for g in bundles[j]:
                rest = sum(values[i][h] for h in bundles[j] if h != g)
                if own >= rest:
                    ok = True
                    break
            if not ok:
                return False
    return True


class TestSocialWelfare:
    def test_three_tight(self, three_tight):
        assert social_welfare(three_tight, alloc([0, 1, 2], [3, 4, 5], [])) == 12

    def test_two_tight_scaled(self, two_tight_scaled):
        assert social_welfare(two_tight_scaled, alloc([0, 1], [2, 3])) == 11

    def test_all_empty(self, two_tight):
        assert social_welfare(two_tight, alloc([], [])) == 0

    def test_shape_mismatch(self, two_tight):
        with pytest.raises(ShapeMismatch):
            social_welfare(two_tight, alloc([0], [1], [2]))
        with pytest.raises(ShapeMismatch):
            social_welfare(two_tight, alloc([9], []))


class TestEnvyFree:
    def test_identity_split(self):
        inst = validate_instance([[1, 0], [0, 1]])
        assert is_envy_free(inst, alloc([0], [1]))

    def test_two_tight_scaled_hoard(self, two_tight_scaled):
        assert not is_envy_free(two_tight_scaled, alloc([0, 1, 2], [3]))

    def test_single_valued_item(self):
        # One item both agents want; whoever misses it envies.
        inst = Instance(n=2, m=1, values=((Fraction(1),), (Fraction(1),)))
        assert not is_envy_free(inst, alloc([0], []))


class TestEf1:
    def test_intro_counterexample(self, intro):
        report = is_ef1(intro, alloc([0, 1], [2]))
        assert not report.holds
        assert report.violations == ((1, 0),)

    def test_two_tight_scaled_hoard_fails(self, two_tight_scaled):
        assert not is_ef1(two_tight_scaled, alloc([0, 1, 2], [3])).holds

    def test_two_tight_scaled_split_holds(self, two_tight_scaled):
        assert is_ef1(two_tight_scaled, alloc([0, 1], [2, 3])).holds

    def test_witness_is_max_value_lowest_index(self):
        inst = validate_instance([[4, 4, 5], [1, 1, 1]])
        report = is_ef1(inst, alloc([0, 1], [2]))
        assert report.holds
        assert report.witnesses == ((1, 0, 0),)

    def test_single_item_either_way(self):
        inst = Instance(n=2, m=1, values=((Fraction(1),), (Fraction(1),)))
        assert is_ef1(inst, alloc([0], [])).holds
        assert is_ef1(inst, alloc([], [0])).holds

    def test_incomplete_allocations_accepted(self, three_tight):
        assert is_ef1(three_tight, alloc([], [], [])).holds

    @given(small_instances(), st.data())
    @settings(max_examples=80)
    def test_ef_implies_ef1(self, inst, data):
        allocation = data.draw(allocations_for(inst))
        if is_envy_free(inst, allocation):
            assert is_ef1(inst, allocation).holds

    @given(
        small_instances(),
        st.data(),
        st.fractions(min_value="1/5", max_value=7, max_denominator=5).filter(lambda c: c > 0),
    )
    @settings(max_examples=80)
    def test_single_agent_scaling_invariance(self, inst, data, c):
        allocation = data.draw(allocations_for(inst))
        agent = data.draw(st.integers(0, inst.n - 1))
        rows = [
            tuple(v * c for v in row) if i == agent else row
            for i, row in enumerate(inst.values)
        ]
        scaled = Instance(n=inst.n, m=inst.m, values=tuple(rows))
        assert is_ef1(inst, allocation).holds == is_ef1(scaled, allocation).holds

    @given(small_instances(), st.data())
    @settings(max_examples=100)
    def test_agrees_with_naive_definition(self, inst, data):
        allocation = data.draw(allocations_for(inst))
        report = is_ef1(inst, allocation)
        assert report.holds == naive_ef1(inst.values, allocation.bundles)
        for i, j, g in report.witnesses:
            assert g in allocation.bundles[j]
            own = sum(inst.values[i][h] for h in allocation.bundles[i])
            rest = sum(inst.values[i][h] for h in allocation.bundles[j] if h != g)
            assert own >= rest
        for i, j in report.violations:
            own = sum(inst.values[i][h] for h in allocation.bundles[i])
            for g in allocation.bundles[j]:
                rest = sum(inst.values[i][h] for h in allocation.bundles[j] if h != g)
                assert own < rest


def _all_matrices(n, m, levels=(0, 1, 2)):
    columns = [c for c in product(levels, repeat=n) if any(c)]
    for cols in product(columns, repeat=m):
        yield tuple(tuple(Fraction(col[i]) for col in cols) for i in range(n))


def _all_assignments(n, m):
    return product(range(n), repeat=m)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2)])
def test_exhaustive_agreement_with_naive(n, m):
    # Every valid {0,1,2} matrix of this shape, every complete allocation.
    for values in _all_matrices(n, m):
        inst = Instance(n=n, m=m, values=values)
        for assign in _all_assignments(n, m):
            bundles = tuple(
                tuple(g for g in range(m) if assign[g] == j) for j in range(n)
            )
            report = is_ef1(inst, Allocation(bundles))
            assert report.holds == naive_ef1(values, bundles)
            assert report.holds == (not report.violations)


@pytest.mark.parametrize("n,m,stride", [(3, 3, 37), (2, 4, 7), (3, 4, 997)])
def test_strided_agreement_with_naive(n, m, stride):
    # Larger shapes: a deterministic stride through the same space.
    for k, values in enumerate(_all_matrices(n, m)):
        if k % stride:
            continue
        inst = Instance(n=n, m=m, values=values)
        for assign in _all_assignments(n, m):
            bundles = tuple(
                tuple(g for g in range(m) if assign[g] == j) for j in range(n)
            )
            assert is_ef1(inst, Allocation(bundles)).holds == naive_ef1(values, bundles)
