"""Tests for the brute-force and randomized-search oracles."""

import numpy as np
import pytest

from symwit import abssep, oracle
from symwit import witness as wt


class TestPsdCheck:
    def test_identity(self):
        assert oracle.psd_check(np.eye(3)).ok

    def test_within_band(self):
        assert oracle.psd_check(np.diag([1.0, -1e-12])).ok

    def test_clear_violation(self):
        check = oracle.psd_check(np.diag([1.0, -1e-3]))
        assert not check.ok
        assert np.isclose(check.min_eigenvalue, -1e-3)

    def test_non_hermitian(self):
        with pytest.raises(ValueError):
            oracle.psd_check(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestBruteMinPermutation:
    def test_example(self):
        assert np.isclose(
            oracle.brute_min_permutation([0.5, 0.3, 0.2], [1.0, 0.0, -1.0]), -0.3)

    def test_constant(self):
        assert np.isclose(oracle.brute_min_permutation([0.4, 0.6], [2.0, 2.0]), 2.0)

    def test_matches_rearrangement_pairing(self):
        rng = np.random.default_rng(0)
        for n in range(2, 8):
            for _ in range(10):
                lam = np.sort(rng.standard_normal(n))[::-1]
                mu = np.sort(rng.standard_normal(n))[::-1]
                assert np.isclose(oracle.brute_min_permutation(lam, mu),
                                  abssep.min_witness_pairing(lam, mu))

    def test_guard(self):
        with pytest.raises(ValueError):
            oracle.brute_min_permutation(np.zeros(9), np.zeros(9))


class TestPptScan:
    def test_uniform_spectrum_never_violates(self):
        report = oracle.random_unitary_ppt_scan([1 / 3] * 3, 2, 500, seed=0)
        assert report.min_eigenvalue >= -1e-8
        assert report.violating_unitary is None

    def test_violating_spectrum_is_caught(self):
        report = oracle.random_unitary_ppt_scan([0.6, 0.2, 0.2], 2, 2_000, seed=0)
        assert report.min_eigenvalue < -1e-6
        assert report.violating_unitary is not None
        # soundness: a found violation forces a failing matricization verdict
        assert not abssep.is_abs_sym_ppt([0.6, 0.2, 0.2], 2, mode="full").holds

    def test_length_guard(self):
        with pytest.raises(ValueError):
            oracle.random_unitary_ppt_scan([0.5, 0.5], 2, 10, seed=0)


class TestSearch:
    def test_d2_quickly_reaches_one(self):
        report = oracle.search_neg_eigs(2, "complex_full", 2_000, seed=7)
        assert report.best_count == 1
        assert report.best_vector is not None

    def test_d3_reaches_three(self):
        report = oracle.search_neg_eigs(3, "complex_full", 2_000, seed=7)
        assert report.best_count == 3

    def test_real_sym_respects_quarter_bound(self):
        for d in (2, 3, 4):
            report = oracle.search_neg_eigs(d, "real_sym", 3_000, seed=1)
            assert report.best_count <= d * d // 4

    def test_general_bound_never_exceeded(self):
        for cls in oracle.VECTOR_CLASSES:
            report = oracle.search_neg_eigs(3, cls, 2_000, seed=2)
            assert report.best_count <= 3
            assert sum(report.histogram.values()) == 2_000

    def test_best_vector_reproduces_count(self):
        report = oracle.search_neg_eigs(3, "complex_full", 2_000, seed=7)
        cand = wt.witness_from_vector(report.best_vector)
        assert wt.count_negative_eigs(cand.matrix) == report.best_count

    def test_resume_is_bitwise_equivalent(self):
        one_shot = oracle.search_neg_eigs(2, "real_full", 6_000, seed=5)
        part = oracle.search_neg_eigs(2, "real_full", 2_500, seed=5)
        resumed = oracle.search_neg_eigs(2, "real_full", 3_500, seed=5, resume=part)
        assert resumed.trials == one_shot.trials
        assert resumed.best_count == one_shot.best_count
        assert resumed.best_trial == one_shot.best_trial
        assert resumed.histogram == one_shot.histogram
        assert np.array_equal(resumed.best_vector, one_shot.best_vector)

    def test_resume_mismatch_rejected(self):
        part = oracle.search_neg_eigs(2, "real_full", 100, seed=5)
        with pytest.raises(ValueError):
            oracle.search_neg_eigs(3, "real_full", 100, seed=5, resume=part)

    def test_report_json_round_trip(self):
        report = oracle.search_neg_eigs(2, "complex_sym", 1_000, seed=9)
        again = oracle.SearchReport.from_json(report.to_json())
        assert again.best_count == report.best_count
        assert again.histogram == report.histogram
        assert np.allclose(again.best_vector, report.best_vector)
        resumed = oracle.search_neg_eigs(2, "complex_sym", 500, seed=9, resume=again)
        direct = oracle.search_neg_eigs(2, "complex_sym", 1_500, seed=9)
        assert resumed.histogram == direct.histogram

    def test_histogram_csv(self):
        report = oracle.search_neg_eigs(2, "complex_full", 500, seed=3)
        text = report.histogram_csv()
        assert text.startswith("count,trials\n")
        total = sum(int(line.split(",")[1]) for line in text.strip().splitlines()[1:])
        assert total == 500

    def test_class_guard(self):
        with pytest.raises(ValueError):
            oracle.search_neg_eigs(2, "quaternionic", 10, seed=0)


class TestParallelSearch:
    def test_deterministic_per_seed_and_workers(self):
        a = oracle.search_neg_eigs_parallel(2, "complex_full", 4_000, seed=3, workers=3)
        b = oracle.search_neg_eigs_parallel(2, "complex_full", 4_000, seed=3, workers=3)
        assert a.histogram == b.histogram
        assert a.best_trial == b.best_trial
        assert a.workers == 3
        assert sum(a.histogram.values()) == 4_000

    def test_worker_count_changes_stream(self):
        a = oracle.search_neg_eigs_parallel(2, "complex_full", 4_000, seed=3, workers=2)
        b = oracle.search_neg_eigs_parallel(2, "complex_full", 4_000, seed=3, workers=4)
        assert a.best_count == b.best_count == 1  # verdicts agree
        assert sum(b.histogram.values()) == 4_000

    def test_merge_rejects_mismatched(self):
        a = oracle.search_neg_eigs(2, "complex_full", 100, seed=0)
        b = oracle.search_neg_eigs(3, "complex_full", 100, seed=0)
        with pytest.raises(ValueError):
            oracle.merge_search_reports([a, b], seed=0, workers=2)
