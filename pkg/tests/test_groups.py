"""Group kinds, subgroups, cosets, and homomorphisms."""

import pytest

from matchkit import (CyclicGroup, FreeAbelianGroup, GroupTooLargeError,
                      GroupValidationError, Homomorphism, InfiniteClosureError,
                      ProductGroup, Subgroup, TableGroup, WindowOverflowError,
                      coset, enumerate_subgroups, generated_subgroup,
                      group_from_json)
from conftest import brute_force_subgroups, s3_group


class TestCyclicGroup:
    def test_basics(self):
        g = CyclicGroup(6)
        assert g.order == 6
        assert g.identity == 0
        assert g.is_abelian
        assert g.op(4, 5) == 3
        assert g.inv(2) == 4
        assert list(g.elements()) == [0, 1, 2, 3, 4, 5]

    def test_canon_rejects_junk(self):
        g = CyclicGroup(5)
        assert g.canon(4) == 4
        with pytest.raises(GroupValidationError):
            g.canon(7)
        with pytest.raises(GroupValidationError):
            g.canon(-1)
        with pytest.raises(GroupValidationError):
            g.canon("x")
        with pytest.raises(GroupValidationError):
            g.canon(True)

    def test_bad_modulus(self):
        with pytest.raises(GroupValidationError):
            CyclicGroup(0)


class TestProductGroup:
    def test_encode_decode_roundtrip(self):
        g = ProductGroup([2, 4])
        assert g.order == 8
        for i in range(8):
            assert g.encode(g.decode(i)) == i

    def test_componentwise_op(self):
        g = ProductGroup([2, 4])
        x = g.canon((1, 3))
        y = g.canon((1, 2))
        assert g.decode(g.op(x, y)) == (0, 1)
        assert g.decode(g.inv(g.canon((1, 1)))) == (1, 3)

    def test_format(self):
        g = ProductGroup([2, 4])
        assert g.format_element(g.canon((1, 2))) == "(1,2)"


class TestTableGroup:
    def test_s3_is_a_valid_nonabelian_group(self):
        g = s3_group()
        assert g.order == 6
        assert not g.is_abelian
        e = g.identity
        for x in g.elements():
            assert g.op(x, g.inv(x)) == e

    def test_rejects_non_square_table(self):
        with pytest.raises(GroupValidationError):
            TableGroup(["e", "a"], [[0, 1]])

    def test_rejects_broken_associativity(self):
        # A latin square that is not a group table.
        labels = ["e", "a", "b", "c", "d"]
        table = [[0, 1, 2, 3, 4],
                 [1, 0, 3, 4, 2],
                 [2, 4, 0, 1, 3],
                 [3, 2, 4, 0, 1],
                 [4, 3, 1, 2, 0]]
        with pytest.raises(GroupValidationError):
            TableGroup(labels, table)

    def test_canon_accepts_labels(self):
        g = s3_group()
        assert g.canon("012") == 0


class TestFreeAbelianGroup:
    def test_window_overflow_carries_result(self):
        g = FreeAbelianGroup(2, 3)
        assert g.op((1, 2), (1, 1)) == (2, 3)
        with pytest.raises(WindowOverflowError) as exc:
            g.op((2, 3), (2, 1))
        assert exc.value.result == (4, 4)

    def test_no_enumeration(self):
        g = FreeAbelianGroup(1, 5)
        assert g.order is None
        with pytest.raises(GroupTooLargeError):
            list(g.elements())

    def test_infinite_closure(self):
        g = FreeAbelianGroup(1, 5)
        with pytest.raises(InfiniteClosureError):
            generated_subgroup(g, [(1,)])
        assert generated_subgroup(g, [(0,)]).is_trivial

    def test_only_trivial_subgroup_enumerated(self):
        g = FreeAbelianGroup(2, 2)
        subs = enumerate_subgroups(g)
        assert len(subs) == 1 and subs[0].is_trivial


class TestSubgroup:
    def test_validation(self):
        g = CyclicGroup(6)
        with pytest.raises(GroupValidationError):
            Subgroup(g, [1, 2])
        with pytest.raises(GroupValidationError):
            Subgroup(g, [0, 2])

    def test_generated(self):
        g = CyclicGroup(12)
        assert generated_subgroup(g, [4, 6]).members == (0, 2, 4, 6, 8, 10)
        assert generated_subgroup(g, [5]).order == 12

    def test_enumeration_matches_brute_force(self):
        for g in (CyclicGroup(12), ProductGroup([2, 4]), s3_group()):
            ours = [s.members for s in enumerate_subgroups(g)]
            assert ours == brute_force_subgroups(g)

    def test_cyclic_subgroup_count_is_divisor_count(self):
        for n in range(1, 21):
            divisors = sum(1 for d in range(1, n + 1) if n % d == 0)
            assert len(enumerate_subgroups(CyclicGroup(n))) == divisors

    def test_normality(self, s3):
        order3 = next(s for s in enumerate_subgroups(s3) if s.order == 3)
        order2 = next(s for s in enumerate_subgroups(s3) if s.order == 2)
        assert order3.is_normal()
        assert not order2.is_normal()


class TestCoset:
    def test_left_coset(self):
        g = CyclicGroup(6)
        h = Subgroup(g, [0, 3])
        assert coset(g, 1, h, "left") == (1, 4)

    def test_sides_differ_in_s3(self, s3):
        h = next(s for s in enumerate_subgroups(s3) if s.order == 2)
        sides = [(coset(s3, x, h, "left"), coset(s3, x, h, "right"))
                 for x in s3.elements()]
        assert any(left != right for left, right in sides)


class TestHomomorphism:
    def test_mod_map_kernel(self):
        h = Homomorphism.mod_map(6, 3)
        assert h(4) == 1
        assert h.kernel().members == (0, 3)

    def test_rejects_non_divisor(self):
        with pytest.raises(GroupValidationError):
            Homomorphism.mod_map(6, 4)

    def test_rejects_non_homomorphism(self):
        g = CyclicGroup(4)
        with pytest.raises(GroupValidationError):
            Homomorphism(g, g, [0, 1, 3, 2])

    def test_projection(self):
        g = ProductGroup([2, 4])
        h = Homomorphism.projection(g, 1)
        assert h(g.canon((1, 3))) == 3
        assert h.kernel().order == 2

    def test_from_json(self):
        doc = {"source": {"kind": "cyclic", "n": 6},
               "target": {"kind": "cyclic", "n": 3}, "map": "mod_3"}
        h = Homomorphism.from_json(doc)
        assert h(5) == 2
        explicit = {"source": {"kind": "cyclic", "n": 4},
                    "target": {"kind": "cyclic", "n": 2}, "map": [0, 1, 0, 1]}
        assert Homomorphism.from_json(explicit)(3) == 1

    def test_infinite_source_rejected(self):
        g = FreeAbelianGroup(1, 3)
        with pytest.raises(GroupValidationError):
            Homomorphism(g, CyclicGroup(2), [0])


class TestJsonRoundtrip:
    def test_all_kinds(self, s3):
        groups = [CyclicGroup(7), ProductGroup([2, 3, 2]),
                  FreeAbelianGroup(2, 4), s3]
        for g in groups:
            clone = group_from_json(g.to_json())
            assert clone == g

    def test_unknown_kind(self):
        with pytest.raises(GroupValidationError):
            group_from_json({"kind": "quaternion"})
