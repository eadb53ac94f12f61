"""Tests for spectra matricizations, adjoints, and assignment reduction."""

import numpy as np
import pytest

from symwit import matricize as mz
from symwit.matricize import Assignment


# Assignment realizing U = [[x1, x2], [0, x3]] (pairs (1,1),(1,2),(2,2) -> 1,2,3).
A_IDENT_2 = Assignment(d=2, targets=(0, 1, 2))
# Assignment realizing U = [[x1, x3], [0, x2]].
A_SWAP_2 = Assignment(d=2, targets=(0, 2, 1))
# Assignment of the special d=2 matricization [[2x2, x1], [x1, 2x3]].
A_SPECIAL_2 = Assignment(d=2, targets=(1, 0, 2))
# The decisive d=3 matricization [[2l6, l2, l1], [l2, 2l3, l4], [l1, l4, 2l5]].
A_SPECIAL_3 = Assignment(d=3, targets=(5, 1, 0, 2, 3, 4))

X135 = np.array([1.0, 3.0, 5.0])


class TestAssignment:
    def test_must_be_permutation(self):
        with pytest.raises(ValueError):
            Assignment(d=2, targets=(0, 0, 1))

    def test_json_round_trip(self):
        text = A_SPECIAL_3.to_json()
        assert '"d": 3' in text
        assert Assignment.from_json(text) == A_SPECIAL_3


class TestUpperTri:
    def test_display_examples(self):
        assert np.allclose(mz.upper_tri_matricization(X135, A_IDENT_2), [[1, 3], [0, 5]])
        assert np.allclose(mz.upper_tri_matricization(X135, A_SWAP_2), [[1, 5], [0, 3]])

    def test_zero(self):
        assert np.allclose(mz.upper_tri_matricization(np.zeros(3), A_IDENT_2), 0.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            mz.upper_tri_matricization(np.zeros(4), A_IDENT_2)


class TestSymmetric:
    def test_display_example(self):
        assert np.allclose(mz.symmetric_matricization(X135, A_IDENT_2), [[2, 3], [3, 10]])

    def test_d3_decisive_pattern(self):
        lam = np.array([10.0, 20, 30, 40, 50, 60])
        mat = mz.symmetric_matricization(lam, A_SPECIAL_3)
        expected = np.array([
            [2 * lam[5], lam[1], lam[0]],
            [lam[1], 2 * lam[2], lam[3]],
            [lam[0], lam[3], 2 * lam[4]],
        ])
        assert np.allclose(mat, expected)

    def test_constant_is_psd(self):
        for assignment in mz.enumerate_assignments(2):
            mat = mz.symmetric_matricization(np.full(3, 0.7), assignment)
            assert np.linalg.eigvalsh(mat).min() > 0

    def test_equals_upper_plus_transpose(self):
        rng = np.random.default_rng(0)
        for assignment in mz.enumerate_assignments(3)[::97]:
            x = rng.standard_normal(6)
            upper = mz.upper_tri_matricization(x, assignment)
            assert np.allclose(mz.symmetric_matricization(x, assignment), upper + upper.T)

    def test_batched(self):
        rng = np.random.default_rng(1)
        xs = rng.standard_normal((7, 3))
        batch = mz.symmetric_matricization(xs, A_SPECIAL_2)
        for i in range(7):
            assert np.allclose(batch[i], mz.symmetric_matricization(xs[i], A_SPECIAL_2))


class TestAdjoint:
    def test_special_d2_reads_off(self):
        y = np.array([[1.5, -0.25], [-0.25, 4.0]])
        # the factor-2-free adjoint of [[2x2, x1], [x1, 2x3]] is (y12, y11, y22)
        assert np.allclose(mz.adjoint_matricization(y, A_SPECIAL_2), [-0.25, 1.5, 4.0])

    def test_zero(self):
        assert np.allclose(mz.adjoint_matricization(np.zeros((2, 2)), A_IDENT_2), 0.0)

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            mz.adjoint_matricization(np.array([[0.0, 1.0], [0.0, 0.0]]), A_IDENT_2)

    def test_adjoint_identity_with_factor_two(self):
        rng = np.random.default_rng(2)
        for assignment in mz.enumerate_assignments(3)[::53]:
            x = rng.standard_normal(6)
            y = rng.standard_normal((3, 3))
            y = y + y.T
            lhs = np.sum(mz.symmetric_matricization(x, assignment) * y)
            rhs = 2 * np.dot(x, mz.adjoint_matricization(y, assignment))
            assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))


class TestPartialSumMaps:
    def test_examples(self):
        assert np.allclose(mz.p_up([1, 2, 3]), [6, 3, 1])
        assert np.allclose(mz.p_down([1, 2, 3]), [6, 5, 3])

    def test_reversal_identity(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(8)
        assert np.allclose(mz.p_up(x), mz.p_down(x[::-1]))

    def test_linearity(self):
        rng = np.random.default_rng(4)
        x, y = rng.standard_normal((2, 5))
        for f in (mz.p_up, mz.p_down):
            assert np.allclose(f(2.0 * x - 3.0 * y), 2.0 * f(x) - 3.0 * f(y))


class TestEnumeration:
    def test_counts(self):
        assert len(mz.enumerate_assignments(1)) == 1
        assert len(mz.enumerate_assignments(2)) == 6
        assert len(mz.enumerate_assignments(3)) == 720

    def test_guard(self):
        with pytest.raises(ValueError, match="enumeration too large"):
            mz.enumerate_assignments(4)

    def test_lexicographic(self):
        targets = [a.targets for a in mz.enumerate_assignments(2)]
        assert targets == sorted(targets)


class TestReduction:
    def test_d2_single_ordering(self):
        reduced = mz.reduced_assignments(2, 5_000, seed=0)
        assert len(reduced) == 1
        assert reduced[0] == Assignment(d=2, targets=(2, 0, 1))

    def test_d2_subset_of_enumeration(self):
        reduced = set(a.targets for a in mz.reduced_assignments(2, 5_000, seed=1))
        full = set(a.targets for a in mz.enumerate_assignments(2))
        assert reduced <= full

    def test_d3_four_displayed_matricizations(self):
        reduced = mz.reduced_assignments(3, 50_000, seed=0)
        got = sorted(a.targets for a in reduced)
        expected = sorted([
            (5, 1, 0, 2, 3, 4),
            (5, 3, 0, 2, 1, 4),
            (5, 4, 0, 2, 1, 3),
            (5, 4, 0, 3, 1, 2),
        ])
        assert got == expected

    def test_d4_count(self):
        scan = mz.scan_orderings(4, 200_000, seed=0)
        assert scan.count == 26
        assert scan.saturated

    def test_deterministic_per_seed(self):
        a = mz.scan_orderings(3, 20_000, seed=7)
        b = mz.scan_orderings(3, 20_000, seed=7)
        assert a.orderings == b.orderings

    def test_range_guard(self):
        with pytest.raises(ValueError):
            mz.reduced_assignments(7, 100, seed=0)
        with pytest.raises(ValueError):
            mz.reduced_assignments(1, 100, seed=0)


class TestSaturationContract:
    def test_unsaturated_scan_raises(self):
        with pytest.raises(RuntimeError, match="not saturated"):
            mz.reduced_assignments(5, 200, seed=0)
