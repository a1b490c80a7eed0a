"""Tests for prime-family certificates and the acyclic-property scanner."""

import json

import pytest

from matchkit import (
    CyclicGroup,
    PrimePreconditionError,
    SubsetPair,
    acyclic_property_scan,
    check_prop_2_2,
    check_prop_2_3,
    family_table,
    find_acyclic_matching,
    is_prime,
    lemma_2_1_audit,
    multiplicative_order,
    quadratic_residues,
    two_power_subset,
)

from conftest import s3_group


def trial_division(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class TestNumberTheoryHelpers:
    def test_is_prime_agrees_with_trial_division(self):
        for n in range(-5, 1000):
            assert is_prime(n) == trial_division(n)

    def test_quadratic_residues_of_seven(self):
        assert quadratic_residues(7) == (1, 2, 4)

    def test_quadratic_residue_count(self):
        for p in (3, 5, 7, 11, 13, 23):
            assert len(quadratic_residues(p)) == (p - 1) // 2

    def test_multiplicative_order(self):
        assert multiplicative_order(2, 7) == 3
        assert multiplicative_order(3, 7) == 6
        assert multiplicative_order(2, 31) == 5

    def test_two_power_subset(self):
        assert two_power_subset(7) == (1, 2, 4)
        assert two_power_subset(31) == (1, 2, 4, 8, 16)


class TestProp22:
    def test_p7_exhaustive(self):
        verdict = check_prop_2_2(7)
        assert verdict.subset == (1, 2, 4)
        assert verdict.exhaustive
        assert verdict.total_matchings == 2
        assert verdict.acyclic_count == 0
        cert = verdict.certificate
        assert cert["size_odd"]
        assert cert["two_in_subset"]
        assert cert["doubling_closed"]
        assert cert["square_root_of_two"] in (3, 4)

    def test_p23_certificate(self):
        verdict = check_prop_2_2(23, enumeration_cap=1)
        assert not verdict.exhaustive
        assert verdict.certificate["subset_size"] == 11
        assert verdict.certificate["size_odd"]
        assert verdict.certificate["two_in_subset"]

    def test_rejects_wrong_residue_class(self):
        with pytest.raises(PrimePreconditionError):
            check_prop_2_2(5)
        with pytest.raises(PrimePreconditionError):
            check_prop_2_2(17)

    def test_rejects_composite(self):
        with pytest.raises(PrimePreconditionError):
            check_prop_2_2(15)


class TestProp23:
    def test_p7(self):
        verdict = check_prop_2_3(7)
        assert verdict.subset == (1, 2, 4)
        assert verdict.certificate["order_of_two"] == 3
        assert verdict.exhaustive
        assert verdict.acyclic_count == 0

    def test_p31(self):
        verdict = check_prop_2_3(31)
        assert verdict.subset == (1, 2, 4, 8, 16)
        assert verdict.certificate["order_of_two"] == 5
        assert verdict.certificate["doubling_closed"]

    def test_rejects_even_order(self):
        # 2 has order 4 mod 5.
        with pytest.raises(PrimePreconditionError):
            check_prop_2_3(5)

    def test_rejects_composite_or_two(self):
        with pytest.raises(PrimePreconditionError):
            check_prop_2_3(9)
        with pytest.raises(PrimePreconditionError):
            check_prop_2_3(2)


class TestFamilyTable:
    def test_prop22_family_members(self):
        rows = family_table("22", 100)
        assert [v.p for v in rows] == [7, 23, 31, 47, 71, 79]
        for v in rows:
            assert v.p % 8 == 7
            assert v.certificate["size_odd"]
            assert v.certificate["two_in_subset"]

    def test_prop23_family_members(self):
        rows = family_table("23", 100)
        assert [v.p for v in rows] == [7, 23, 31, 47, 71, 73, 79, 89]
        for v in rows:
            assert multiplicative_order(2, v.p) % 2 == 1
            assert v.certificate["size_odd"]
            assert v.certificate["doubling_closed"]

    def test_certificate_only_mode_skips_enumeration(self):
        rows = family_table("22", 100, enumeration_cap=0)
        assert all(not v.exhaustive for v in rows)

    def test_enumeration_mode_on_small_prime(self):
        rows = family_table("23", 7, enumeration_cap=100)
        assert len(rows) == 1
        assert rows[0].exhaustive
        assert rows[0].acyclic_count == 0

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            family_table("24", 100)


class TestLemma21Audit:
    def test_true_on_small_odd_sets(self):
        g = CyclicGroup(7)
        assert lemma_2_1_audit(g, [1, 2, 4])
        assert lemma_2_1_audit(g, [1, 3, 5])
        assert lemma_2_1_audit(g, [3])

    def test_rejects_even_size(self):
        g = CyclicGroup(7)
        with pytest.raises(ValueError):
            lemma_2_1_audit(g, [1, 2])

    def test_rejects_identity_in_a(self):
        g = CyclicGroup(7)
        with pytest.raises(ValueError):
            lemma_2_1_audit(g, [0, 1, 2])

    def test_rejects_nonabelian(self):
        s3 = s3_group()
        labels = [e for e in s3.elements() if e != s3.identity][:3]
        with pytest.raises(ValueError):
            lemma_2_1_audit(s3, labels)


class TestAcyclicPropertyScan:
    def test_exhaustive_small_prime(self):
        report = acyclic_property_scan(3, 1, 1000)
        assert report.mode == "exhaustive"
        assert report.p == 3
        # Every singleton pair over Z/3 admits its unique, hence acyclic,
        # matching or no matching at all; no failure is found.
        assert report.failure is None
        assert report.pairs_examined == 6
        assert not report.budget_exhausted

    def test_log_lines_parse_and_carry_timing(self, tmp_path):
        log = tmp_path / "scan.jsonl"
        report = acyclic_property_scan(5, 2, 1000, seed=3, log_path=str(log))
        lines = [json.loads(line) for line in log.read_text().splitlines()]
        assert len(lines) == report.pairs_examined
        for entry in lines:
            assert entry["p"] == 5
            assert entry["seed"] == 3
            assert entry["status"] in ("found", "absent", "inconclusive")
            assert isinstance(entry["elapsed_ms"], float)
        # The aggregate report carries no timing; timing lives in the log.
        assert "elapsed_ms" not in report.to_json()

    def test_deterministic_given_seed(self):
        first = acyclic_property_scan(11, 3, 400, seed=9)
        second = acyclic_property_scan(11, 3, 400, seed=9)
        assert first.to_json() == second.to_json()
        assert first.mode == "sampled"

    def test_budget_exhaustion(self):
        report = acyclic_property_scan(7, 3, 2)
        assert report.budget_exhausted
        assert report.failure is None
        assert report.work_used <= 4

    def test_finds_failure_witness(self):
        report = acyclic_property_scan(7, 3, 10_000_000)
        assert report.failure is not None
        assert report.failure.status == "absent"
        pair = SubsetPair(CyclicGroup(7), report.failure.A, report.failure.B)
        confirm = find_acyclic_matching(pair)
        assert confirm.status == "absent"

    def test_rejects_bad_inputs(self):
        with pytest.raises(PrimePreconditionError):
            acyclic_property_scan(8, 2, 100)
        with pytest.raises(ValueError):
            acyclic_property_scan(7, 0, 100)
        with pytest.raises(ValueError):
            acyclic_property_scan(7, 7, 100)
