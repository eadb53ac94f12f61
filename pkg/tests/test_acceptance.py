"""Acceptance suite: one test per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion.  Sampling is seeded, so every run is reproducible.
"""

import time

import numpy as np

from symwit import abssep, fixtures as fx, matricize as mz, oracle, sdp
from symwit import symspace as ss
from symwit import witness as wt
from symwit.abssep import FASTPATH_ASSIGNMENT_2D, FASTPATH_ASSIGNMENT_3D


def _report(criterion: str, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: PASS ({detail})")


def dirichlet_spectra(rng, m, n):
    return np.sort(rng.dirichlet(np.ones(m), size=n), axis=1)[:, ::-1]


def test_c01_two_qubit_equivalence():
    """Closed form == 6-matricization enumeration == reduced test, d=2."""
    started = time.time()
    rng = np.random.default_rng(101)
    lam = dirichlet_spectra(rng, 3, 100_000)

    closed = abssep.fastpath_margin_2d(lam[:, 0], lam[:, 1], lam[:, 2])
    full = abssep.matricization_margins(lam, mz.enumerate_assignments(2))
    reduced = abssep.matricization_margins(lam, [FASTPATH_ASSIGNMENT_2D])

    keep = (np.abs(closed) > 1e-8) & (np.abs(full) > 1e-8) & (np.abs(reduced) > 1e-8)
    assert keep.sum() > 90_000
    closed_v, full_v, reduced_v = closed[keep] > 0, full[keep] > 0, reduced[keep] > 0
    assert np.array_equal(closed_v, full_v)
    assert np.array_equal(closed_v, reduced_v)

    elapsed = time.time() - started
    assert elapsed < 10.0
    _report("C1", f"{int(keep.sum())} spectra agree, {elapsed:.1f}s")


def test_c02_three_dim_single_matrix_test():
    """Single-matrix test == full 720 enumeration == 4-matrix reduced set, d=3."""
    started = time.time()
    rng = np.random.default_rng(102)
    lam = dirichlet_spectra(rng, 6, 10_000)

    single = abssep.matricization_margins(lam, [FASTPATH_ASSIGNMENT_3D])
    full = abssep.matricization_margins(lam, mz.enumerate_assignments(3))
    reduced = abssep.matricization_margins(lam, mz.reduced_assignments(3, 50_000, seed=0))

    keep = (np.abs(single) > 1e-8) & (np.abs(full) > 1e-8) & (np.abs(reduced) > 1e-8)
    assert keep.sum() > 9_000
    single_v, full_v, reduced_v = single[keep] > 0, full[keep] > 0, reduced[keep] > 0
    assert np.array_equal(single_v, full_v)
    assert np.array_equal(single_v, reduced_v)

    elapsed = time.time() - started
    assert elapsed < 60.0
    _report("C2", f"{int(keep.sum())} spectra agree, {elapsed:.1f}s")


def test_c03_ordering_counts():
    """Sampled ordering reduction returns 1, 4, 26, 330 with saturation."""
    started = time.time()
    expected = {2: 1, 3: 4, 4: 26, 5: 330}
    for d, count in expected.items():
        scan = mz.scan_orderings(d, 1_000_000, seed=12345)
        assert scan.count == count, f"d={d}: got {scan.count}"
        assert scan.saturated, f"d={d}: last new signature at {scan.last_new}"
    elapsed = time.time() - started
    assert elapsed < 300.0
    _report("C3", f"counts 1,4,26,330 saturated, {elapsed:.1f}s")


def test_c04_eigenvalue_formula():
    """Predicted products + kernel zeros match numerics to 1e-8, d = 2..6."""
    rng = np.random.default_rng(104)
    for d in (2, 3, 4, 5, 6):
        n = 1_000
        mats = rng.standard_normal((n, d, d))
        mats = mats + mats.transpose(0, 2, 1)
        vecs = mats.reshape(n, d * d)
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
        mats = vecs.reshape(n, d, d)

        alphas = np.linalg.eigvalsh(mats)
        rows, cols = np.triu_indices(d)
        products = alphas[:, rows] * alphas[:, cols]
        predicted = np.concatenate(
            [products, np.zeros((n, ss.antisym_dim(d)))], axis=1)
        predicted = np.sort(predicted, axis=1)

        compressed = ss.sym_conjugated_pt_compressed_from_vectors(vecs)
        actual = np.linalg.eigvalsh(compressed)
        actual = np.sort(np.concatenate(
            [actual, np.zeros((n, ss.antisym_dim(d)))], axis=1), axis=1)

        worst = np.abs(predicted - actual).max()
        assert worst < 1e-8, f"d={d}: worst deviation {worst:.2e}"
    _report("C4", "5000 spectra matched to 1e-8")


def test_c05_real_extreme_rays():
    """Symmetric vectors give real witnesses splitting over Re/Im parts."""
    rng = np.random.default_rng(105)
    for _ in range(1_000):
        d = rng.integers(2, 5)
        mat = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        v = ss.vectorize(mat + mat.T)
        v /= np.linalg.norm(v)
        w = wt.witness_from_vector(v).matrix
        assert np.abs(w.imag).max() <= 1e-10
        _, _, residual = wt.real_split(v)
        assert residual <= 1e-10

    violations = 0
    for _ in range(20):
        v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        v /= np.linalg.norm(v)
        if wt.split_identity_residual(v) > 1e-6:
            violations += 1
    assert violations > 0
    _report("C5", f"1000 symmetric vectors real; {violations}/20 non-symmetric violate")


def test_c06_negative_eigenvalue_bounds():
    """floor(d^2/4) cap for real symmetric vectors, attained; d(d-1)/2 overall."""
    for d in (2, 3, 4, 5, 6):
        real_cap, general_cap = wt.max_neg_bounds(d)
        report = oracle.search_neg_eigs(d, "real_sym", 2_000, seed=106)
        assert max(report.histogram) <= real_cap
        attained = wt.count_negative_eigs(
            wt.witness_from_vector(wt.attaining_real_sym_vector(d)).matrix)
        assert attained == real_cap
        for cls in ("complex_full", "real_full", "complex_sym"):
            report = oracle.search_neg_eigs(d, cls, 1_000, seed=107)
            assert max(report.histogram) <= general_cap
    _report("C6", "caps respected and attained for d = 2..6")


def test_c07_named_fixtures():
    """The shipped fixtures reproduce their documented spectra and verdicts."""
    eigs = np.sort(wt.witness_from_vector(fx.VEC3_COMPLEX_SYM_THREE_NEG).eigenvalues())
    assert np.abs(eigs[:3] - (-1.0)).max() < 1e-8
    eigs = np.sort(wt.witness_from_vector(fx.VEC3_REAL_FULL_THREE_NEG).eigenvalues())
    assert np.abs(eigs[:3] - (-0.5)).max() < 1e-8

    x = fx.MAX_NEG_SOURCE_D4
    proj = ss.projector_sym(4)
    assert np.abs(proj @ x @ proj - x).max() <= 1e-10
    assert wt.count_negative_eigs(ss.sym_conjugated_pt(x)) == 6

    w = fx.WITNESS_2Q_NOT_DECOMPOSABLE
    assert np.allclose(np.sort(np.linalg.eigvalsh(w)), [-2, 0, 2, 2], atol=1e-10)
    sampled = wt.check_sew_sampled(w, 10_000, seed=107)
    assert sampled.min_value >= -1e-9
    check = sdp.is_decomposable_witness(w, require_symmetric_x=True, tol=1e-7)
    assert check.status == "infeasible"
    _report("C7", "d=3 vectors, 16x16 source, and 2-qubit fixture all verified")


def test_c08_figure_reproduction():
    """Search maxima 1, 3, 5, 8 for d = 2..5 with fixed seeds."""
    started = time.time()
    budgets = {2: 2_000, 3: 2_000, 4: 10_000, 5: 20_000}
    expected = {2: 1, 3: 3, 4: 5, 5: 8}
    hits = {}
    for d, trials in budgets.items():
        assert trials <= 1_000_000
        report = oracle.search_neg_eigs(d, "complex_full", trials, seed=7)
        assert report.best_count == expected[d], \
            f"d={d}: observed {report.best_count}, expected {expected[d]}"
        hits[d] = report.best_trial
    elapsed = time.time() - started
    assert elapsed < 900.0
    _report("C8", f"maxima 1,3,5,8 at trials {hits}, {elapsed:.1f}s")


def test_c09_sdp_consistency():
    """Solver verdicts match the closed forms; strong duality signs agree."""
    started = time.time()
    rng = np.random.default_rng(109)

    # d=2: the dual program against its exact closed form, 1e4 spectra.
    mus = np.sort(rng.standard_normal((10_000, 3)), axis=1)[:, ::-1]
    margins = sdp.dual_feasibility_margins(mus, 2, [FASTPATH_ASSIGNMENT_2D])
    closed = sdp.dual_margin_2d(mus[:, 0], mus[:, 1], mus[:, 2])
    keep = (np.abs(margins) > 1e-6) & (np.abs(closed) > 1e-6)
    assert keep.sum() > 9_000
    assert np.array_equal(margins[keep] > 0, closed[keep] > 0)

    # where the sqrt bound is its own regime (mu2 >= mu1/4) it agrees too
    sqrt_regime = keep & (mus[:, 1] >= mus[:, 0] / 4) & (mus[:, 0] > 0)
    sqrt_margin = mus[:, 2] + np.sqrt(np.clip(mus[:, 0] * mus[:, 1], 0, None))
    sqrt_ok = sqrt_regime & (np.abs(sqrt_margin) > 1e-6)
    assert sqrt_ok.sum() > 1_000
    assert np.array_equal(margins[sqrt_ok] > 0, sqrt_margin[sqrt_ok] > 0)

    # d=3: the single-block program against the 4-assignment general program.
    mus3 = np.sort(rng.standard_normal((1_000, 6)), axis=1)[:, ::-1]
    reduced = mz.reduced_assignments(3, 50_000, seed=0)
    single = sdp.dual_feasibility_margins(mus3, 3, [FASTPATH_ASSIGNMENT_3D])
    general = sdp.dual_feasibility_margins(mus3, 3, reduced)
    keep3 = (np.abs(single) > 1e-6) & (np.abs(general) > 1e-6)
    assert keep3.sum() > 900
    assert np.array_equal(single[keep3] > 0, general[keep3] > 0)

    # strong duality: primal sign == dual feasibility on both dimensions.
    sub2 = mus[:300]
    values2 = sdp.primal_min_values(sub2, 2, [FASTPATH_ASSIGNMENT_2D])
    m2 = sdp.dual_feasibility_margins(sub2, 2, [FASTPATH_ASSIGNMENT_2D])
    k2 = (np.abs(values2) > 1e-6) & (np.abs(m2) > 1e-6)
    assert np.array_equal(values2[k2] > 0, m2[k2] > 0)

    sub3 = mus3[:150]
    values3 = sdp.primal_min_values(sub3, 3, [FASTPATH_ASSIGNMENT_3D])
    m3 = sdp.dual_feasibility_margins(sub3, 3, [FASTPATH_ASSIGNMENT_3D])
    k3 = (np.abs(values3) > 1e-6) & (np.abs(m3) > 1e-6)
    assert np.array_equal(values3[k3] > 0, m3[k3] > 0)

    elapsed = time.time() - started
    _report("C9", f"d=2 x{int(keep.sum())}, d=3 x{int(keep3.sum())}, "
                  f"duality x{int(k2.sum() + k3.sum())}, {elapsed:.0f}s")


def test_c10_max_negative_construction():
    """Exactly 1, 3, 6 negative eigenvalues for d = 2, 3, 4; c(2) = 1/2."""
    sub2 = wt.npt_subspace(2)
    overlap2 = sdp.max_overlap_ppt(sub2.projector(), 2)
    assert abs(overlap2.c - 0.5) < 1e-6
    for d, expected in ((2, 1), (3, 3), (4, 6)):
        cand = sdp.build_max_neg_witness(d)
        count = wt.count_negative_eigs(cand.matrix)
        assert count == expected, f"d={d}: {count} negatives"
        sampled = wt.check_sew_sampled(cand.matrix, 10_000, seed=110)
        assert sampled.min_value >= -1e-6, f"d={d}: sampled min {sampled.min_value:.2e}"
    _report("C10", "counts 1,3,6 with c(2)=1/2 and sampled witness checks")


def test_c11_concurrence():
    """Formula anchors, spectral bound, and vanishing on passing spectra."""
    rho = np.zeros((3, 3))
    rho[0, 0] = 1.0
    assert abssep.concurrence_2qubit(rho).value <= 1e-8

    bell = np.array([1.0, 0, 0, 1]) / np.sqrt(2)
    rho_bell = ss.compress(np.outer(bell, bell))
    assert abs(abssep.concurrence_2qubit(rho_bell).value - 1.0) <= 1e-8

    rng = np.random.default_rng(111)
    n = 10_000
    passing = []
    for i in range(n):
        g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        if i % 2 == 0:  # interpolate towards maximally mixed to populate both sides
            t = rng.uniform(0.0, 0.6)
            rho = (1 - t) * np.eye(3) / 3 + t * rho
        lam = np.sort(np.linalg.eigvalsh(rho))[::-1]
        bound = max(0.0, lam[0] - 2 * np.sqrt(max(lam[1], 0.0) * max(lam[2], 0.0)))
        value = abssep.concurrence_2qubit(rho).value
        assert value <= bound + 1e-8
        if abssep.is_abs_sym_ppt_2d(*lam):
            passing.append(lam)

    assert len(passing) > 100
    checked = 0
    for lam in passing:
        for _ in range(100):
            u = ss.random_sym_unitary(2, rng)
            rho = (u * lam) @ u.conj().T
            value = abssep.concurrence_2qubit(rho).value
            assert value <= 1e-8
            checked += 1
    _report("C11", f"bound on 10000 states; {checked} conjugations concurrence-free")


def test_c12_oracle_soundness():
    """Pairing equals brute force; scans and verdicts never contradict."""
    rng = np.random.default_rng(112)
    for n in range(2, 8):
        for _ in range(20):
            lam = np.sort(rng.standard_normal(n))[::-1]
            mu = np.sort(rng.standard_normal(n))[::-1]
            assert np.isclose(oracle.brute_min_permutation(lam, mu),
                              abssep.min_witness_pairing(lam, mu), atol=1e-12)

    scanned = violations = 0
    for d, count in ((2, 15), (3, 10)):
        for _ in range(count):
            lam = np.sort(rng.dirichlet(np.ones(ss.sym_dim(d))))[::-1]
            verdict = abssep.is_abs_sym_ppt(lam, d, mode="full" if d <= 3 else "reduced")
            report = oracle.random_unitary_ppt_scan(lam, d, 1_000,
                                                    seed=int(rng.integers(1 << 30)))
            scanned += 1
            if report.violating_unitary is not None:
                violations += 1
                assert not verdict.holds
            if verdict.holds:
                assert report.min_eigenvalue >= -1e-8
    assert violations > 0
    _report("C12", f"pairing oracle exact; {scanned} scans, {violations} violations, "
                   "all consistent")
