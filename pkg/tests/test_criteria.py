"""Tests for the coset-freeness and generated-subgroup matchability criteria."""

import itertools

import pytest

from matchkit import (
    CyclicGroup,
    GroupValidationError,
    ProductGroup,
    Subgroup,
    SubsetPair,
    counterexample_pair,
    coset,
    enumerate_subgroups,
    find_matching,
    hall_violator,
    is_coset_free,
    prop_1_4_condition,
)

from conftest import brute_force_matchings


class TestIsCosetFree:
    def test_coset_inside_a_detected(self):
        g = CyclicGroup(6)
        ok, witness = is_coset_free(g, [1, 4])
        assert not ok
        assert witness.subgroup.members == (0, 3)
        assert witness.translate == 1
        assert witness.side == "left"
        assert sorted(witness.coset) == [1, 4]

    def test_prime_order_group_always_free(self):
        g = CyclicGroup(7)
        for size in range(1, 7):
            for A in itertools.combinations(range(7), size):
                ok, witness = is_coset_free(g, A)
                assert ok
                assert witness is None

    def test_adjacent_pair_is_free(self):
        g = CyclicGroup(6)
        ok, witness = is_coset_free(g, [1, 2])
        assert ok and witness is None

    def test_witness_coset_contained_in_a(self):
        g = ProductGroup([2, 4])
        for size in range(2, 5):
            for A in itertools.combinations(range(g.order), size):
                ok, witness = is_coset_free(g, A)
                if ok:
                    continue
                assert not witness.subgroup.is_trivial
                assert not witness.subgroup.is_full
                assert set(witness.coset) <= set(A)

    def test_full_group_is_not_free(self):
        g = CyclicGroup(6)
        ok, witness = is_coset_free(g, list(range(6)))
        assert not ok

    def test_nonabelian_sides(self, s3):
        # In S3 a right coset of an order-2 subgroup need not be a left one;
        # sets containing only a right coset must still be flagged.
        sub = next(s for s in enumerate_subgroups(s3) if s.order == 2)
        x = next(e for e in s3.elements() if e not in sub)
        right = coset(s3, x, sub, "right")
        ok, witness = is_coset_free(s3, right)
        assert not ok
        assert set(witness.coset) <= set(right)


class TestCounterexamplePair:
    def test_structure(self):
        g = CyclicGroup(6)
        sub = Subgroup(g, [0, 3])
        pair = counterexample_pair(g, sub, 1, 2)
        assert sorted(pair.A) == [1, 4]
        assert sorted(pair.B) == [2, 3]

    def test_no_matching_and_violator_verified(self):
        g = CyclicGroup(6)
        sub = Subgroup(g, [0, 3])
        pair = counterexample_pair(g, sub, 1, 2)
        assert find_matching(pair) is None
        violator = hall_violator(pair)
        assert len(violator) >= 1

    def test_rejects_trivial_or_full_subgroup(self):
        g = CyclicGroup(6)
        with pytest.raises(GroupValidationError):
            counterexample_pair(g, Subgroup(g, [0]), 1, 2)
        with pytest.raises(GroupValidationError):
            counterexample_pair(g, Subgroup(g, list(range(6))), 1, 2)

    def test_rejects_outside_element_in_subgroup(self):
        g = CyclicGroup(6)
        sub = Subgroup(g, [0, 3])
        with pytest.raises(GroupValidationError):
            counterexample_pair(g, sub, 1, 3)

    def test_always_unmatchable_small_sweep(self):
        for g in (CyclicGroup(4), CyclicGroup(6), ProductGroup([2, 2])):
            for sub in enumerate_subgroups(g):
                if sub.is_trivial or sub.is_full:
                    continue
                for x in g.elements():
                    for outside in g.elements():
                        if outside in sub:
                            continue
                        pair = counterexample_pair(g, sub, x, outside)
                        assert find_matching(pair) is None
                        assert not brute_force_matchings(g, pair.A, pair.B)

    def test_nonabelian_counterexample(self, s3):
        sub = next(s for s in enumerate_subgroups(s3) if s.order == 3)
        outside = next(e for e in s3.elements() if e not in sub)
        pair = counterexample_pair(s3, sub, outside, outside)
        assert find_matching(pair) is None


class TestProp14Condition:
    def test_witness_found(self):
        g = CyclicGroup(6)
        ok, witness = prop_1_4_condition(g, [1, 4], [3, 2])
        assert not ok
        assert witness.b == 3
        assert sorted(witness.coset) == [1, 4]

    def test_holds_on_free_pair(self):
        g = CyclicGroup(6)
        ok, witness = prop_1_4_condition(g, [1, 2], [3, 2])
        assert ok and witness is None

    def test_prime_order_any_pair(self):
        g = CyclicGroup(7)
        ok, witness = prop_1_4_condition(g, [1, 2, 4], [1, 2, 4])
        assert ok and witness is None

    def test_implies_matching_small_sweep(self):
        g = CyclicGroup(8)
        for A in itertools.combinations(range(8), 2):
            for B in itertools.combinations(range(1, 8), 2):
                ok, _ = prop_1_4_condition(g, A, B)
                if ok:
                    assert find_matching(SubsetPair(g, A, B)) is not None

    def test_weaker_than_coset_freeness(self):
        # A = {0,2,4} is itself a coset of <2>, so coset-freeness fails, but
        # no element of B = {1,3,5} generates a subgroup with a coset inside
        # A, so the pairwise criterion still certifies this partner.
        g = CyclicGroup(6)
        A = [0, 2, 4]
        ok_free, _ = is_coset_free(g, A)
        assert not ok_free
        ok_pair, witness = prop_1_4_condition(g, A, [1, 3, 5])
        assert ok_pair and witness is None
        assert find_matching(SubsetPair(g, A, [1, 3, 5])) is not None

    def test_rejects_nonabelian(self, s3):
        with pytest.raises(GroupValidationError):
            prop_1_4_condition(s3, ["012", "120"], ["120", "201"])

    def test_rejects_size_mismatch(self):
        g = CyclicGroup(6)
        with pytest.raises(GroupValidationError):
            prop_1_4_condition(g, [1, 2], [3])
