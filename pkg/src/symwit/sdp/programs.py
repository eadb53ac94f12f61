"""Feasibility and optimization programs over witness and state spectra.

* ``primal_min_value``: minimal opposite-sorted pairing of a state spectrum
  against a witness spectrum, over spectra whose selected matricizations are
  all PSD.  Non-negativity of this value is what a witness spectrum must
  survive.
* ``decomposable_spectrum_check``: the dual feasibility form - PSD blocks
  Y_k with sum_k p_up(L_k*(Y_k)) <= p_down(mu) entrywise - a necessary
  condition on spectra of decomposable symmetric witnesses.
* ``is_decomposable_witness``: splits W = P X^PT P + Y with PSD X, Y
  (symmetric-supported Y always; X optionally).
* ``max_overlap_ppt`` / ``build_max_neg_witness``: the largest overlap a
  PPT symmetric state can have with a projector, and the witness
  P_sym - P/c built from it, which carries the maximal d(d-1)/2 negative
  eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..matricize import (
    Assignment,
    adjoint_matricization,
    p_down,
    p_up,
    symmetric_matricization,
)
from ..symspace import (
    compress,
    embed,
    local_dim_from_full,
    partial_transpose,
    projector_sym,
    sym_conjugated_pt,
    sym_dim,
    sym_pairs,
)
from ..abssep import FASTPATH_ASSIGNMENT_3D, spectrum_values
from ..tolerances import DEFAULT_SOLVER_TOL
from ..witness import NptSubspace, WitnessCandidate, npt_subspace
from .backends import HAVE_CVXPY, conic_solve
from .conic import (
    ConicProblem,
    ConicResult,
    PsdBlock,
    herm_param_count,
    hermitian_basis,
    matrix_to_params,
    params_to_matrix,
)

if HAVE_CVXPY:  # pragma: no branch
    import cvxpy as cp


# --------------------------------------------------------------------------
# dual feasibility: PSD Y_k with sum_k p_up(L_k*(Y_k)) <= p_down(mu)
# --------------------------------------------------------------------------

def _dual_ineq_matrix(d: int, assignments) -> np.ndarray:
    """Coefficients of the stacked Y-parameters in the cumulative inequalities."""
    m = sym_dim(d)
    n_y = herm_param_count(d, "real")
    basis = hermitian_basis(d, "real").real
    pairs = sym_pairs(d)
    g = np.zeros((m, len(assignments) * n_y))
    for k, assignment in enumerate(assignments):
        pair_of_target = [None] * m
        for pair_idx, target in enumerate(assignment.targets):
            pair_of_target[target] = pairs[pair_idx]
        # adjoint entry s is Y[pair_of_target[s]]; row r sums entries s <= m-1-r
        for r in range(m):
            for s in range(m - r):
                i, j = pair_of_target[s]
                for t in range(n_y):
                    g[r, k * n_y + t] += basis[t, i, j].real
    return g


def build_dual_feasibility(mu, d: int, assignments) -> ConicProblem:
    """Feasibility program for the cumulative-inequality dual form."""
    mu = spectrum_values(mu, d)
    assignments = list(assignments)
    n_y = herm_param_count(d, "real")
    n_vars = len(assignments) * n_y
    basis = hermitian_basis(d, "real").real
    blocks = []
    for k, assignment in enumerate(assignments):
        coeffs = np.zeros((n_vars, d, d))
        coeffs[k * n_y:(k + 1) * n_y] = basis
        blocks.append(PsdBlock(name=f"Y{k}", size=d, field="real",
                               const=np.zeros((d, d)), coeffs=coeffs))
    return ConicProblem(n_vars=n_vars, g_ineq=_dual_ineq_matrix(d, assignments),
                        h_ineq=p_down(mu), blocks=tuple(blocks))


@dataclass(frozen=True)
class DualCertificate:
    """PSD blocks Y_k plus the entrywise slack p_down(mu) - sum p_up(L_k*(Y_k))."""

    assignments: tuple[Assignment, ...]
    y_blocks: tuple[np.ndarray, ...]
    slack: np.ndarray

    def residual(self) -> float:
        """Largest violation when re-checking the certificate from scratch."""
        worst = max(0.0, -float(self.slack.min()))
        for y in self.y_blocks:
            eigs = np.linalg.eigvalsh(y)
            worst = max(worst, -float(eigs[0]))
        return worst


def recompute_slack(mu, assignments, y_blocks) -> np.ndarray:
    """p_down(mu) - sum_k p_up(L_k*(Y_k)), from raw matrices."""
    mu = np.asarray(mu, dtype=float)
    total = np.zeros_like(mu)
    for assignment, y in zip(assignments, y_blocks):
        total += p_up(adjoint_matricization(np.asarray(y, dtype=float), assignment))
    return p_down(mu) - total


@dataclass(frozen=True)
class SpectrumCheck:
    """Trichotomy verdict for the decomposable-spectrum condition.

    ``certificate`` (feasible) holds the Y_k blocks; ``excluding_spectrum``
    (infeasible) is a descending state spectrum, feasible for the primal,
    whose opposite-sorted pairing with mu is negative.
    """

    status: str
    certificate: DualCertificate | None
    excluding_spectrum: np.ndarray | None
    conic: ConicResult


def decomposable_spectrum_check(mu, d: int, assignments=None, tol: float | None = None,
                                backend: str = "auto") -> SpectrumCheck:
    """Search PSD Y_k satisfying the entrywise dual inequality for mu."""
    if assignments is None:
        from ..matricize import cached_reduced_assignments

        assignments = cached_reduced_assignments(d)
    assignments = tuple(assignments)
    mu = spectrum_values(mu, d)
    problem = build_dual_feasibility(mu, d, assignments)
    result = conic_solve(problem, tol=tol, backend=backend)
    if result.status == "feasible":
        ys = tuple(problem.blocks[k].value(result.x)
                   for k in range(len(assignments)))
        cert = DualCertificate(assignments=assignments, y_blocks=ys,
                               slack=recompute_slack(mu, assignments, ys))
        return SpectrumCheck("feasible", cert, None, result)
    if result.status == "infeasible":
        lam = p_up(result.certificate.w)
        total = lam.sum()
        lam = lam / total if total > 0 else lam
        return SpectrumCheck("infeasible", None, lam, result)
    return SpectrumCheck("inconclusive", None, None, result)


def dual_margin_2d(mu1, mu2, mu3):
    """Signed feasibility margin of the d=2 cumulative-inequality system.

    Closed form (vectorized): for mu1 > 0 the system is feasible iff
    mu3 >= -mu1/4 - mu2 when mu2 < mu1/4 and iff mu3 >= -sqrt(mu1 mu2)
    otherwise; these branches join continuously at mu2 = mu1/4.  The
    square-root bound alone is the correct characterization only in its
    mu2 >= mu1/4 regime.
    """
    mu1 = np.asarray(mu1, dtype=float)
    mu2 = np.asarray(mu2, dtype=float)
    mu3 = np.asarray(mu3, dtype=float)
    line = -mu1 / 4.0 - mu2
    with np.errstate(invalid="ignore"):
        curve = -np.sqrt(np.clip(mu1 * mu2, 0.0, None))
    bound = np.where(mu2 < mu1 / 4.0, line, curve)
    return np.where(mu1 > 0.0, mu3 - bound, mu3)


def decomposable_spectrum_check_2d(mu1: float, mu2: float, mu3: float,
                                   tol: float | None = None) -> bool:
    """Closed form of the d=2 dual feasibility system, no solver."""
    if not mu1 >= mu2 >= mu3:
        raise ValueError("spectrum must be sorted descending")
    tol = DEFAULT_SOLVER_TOL if tol is None else float(tol)
    scale = max(1.0, abs(mu1))
    return bool(dual_margin_2d(mu1, mu2, mu3) >= -tol * scale)


def decomposable_spectrum_check_3d(mu, tol: float | None = None,
                                   backend: str = "auto") -> SpectrumCheck:
    """Single-block d=3 program: one PSD Y against six cumulative inequalities."""
    return decomposable_spectrum_check(mu, 3, [FASTPATH_ASSIGNMENT_3D],
                                       tol=tol, backend=backend)


# --------------------------------------------------------------------------
# primal: minimize the opposite-sorted pairing over matricization-PSD spectra
# --------------------------------------------------------------------------

def build_primal_min(mu, d: int, assignments) -> ConicProblem:
    mu = spectrum_values(mu, d)
    m = sym_dim(d)
    objective = mu[::-1].copy()
    a_eq = np.ones((1, m))
    b_eq = np.ones(1)
    g = np.zeros((m, m))
    for j in range(m - 1):
        g[j, j], g[j, j + 1] = -1.0, 1.0
    g[m - 1, m - 1] = -1.0
    h = np.zeros(m)
    blocks = []
    eye = np.eye(m)
    for k, assignment in enumerate(assignments):
        coeffs = np.stack([symmetric_matricization(eye[j], assignment) for j in range(m)])
        blocks.append(PsdBlock(name=f"L{k}", size=d, field="real",
                               const=np.zeros((d, d)), coeffs=coeffs))
    return ConicProblem(n_vars=m, objective=objective, a_eq=a_eq, b_eq=b_eq,
                        g_ineq=g, h_ineq=h, blocks=tuple(blocks))


def primal_min_value(mu, d: int, assignments=None, tol: float | None = None,
                     backend: str = "auto") -> float:
    """Optimal value of the pairing minimization; >= 0 iff mu passes the dual."""
    if assignments is None:
        from ..matricize import cached_reduced_assignments

        assignments = cached_reduced_assignments(d)
    problem = build_primal_min(mu, d, list(assignments))
    result = conic_solve(problem, tol=tol, backend=backend)
    if result.status != "feasible":
        raise RuntimeError(f"primal solve did not converge: {result.status}")
    return float(result.objective)


# --------------------------------------------------------------------------
# decomposability of a given witness
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DecompositionCheck:
    """Outcome of the witness splitting search W = P X^PT P + Y.

    Feasible: ``x_matrix`` / ``y_matrix`` are the PSD pieces (full and
    compressed representation respectively).  Infeasible: ``excluding_state``
    is a unit-trace PSD symmetric-supported matrix with PSD conjugated
    partial transpose and negative overlap with W; its existence rules out
    any splitting.
    """

    status: str
    x_matrix: np.ndarray | None
    y_matrix: np.ndarray | None
    excluding_state: np.ndarray | None
    split_residual: float
    conic: ConicResult


def build_decomposability(w: np.ndarray, require_symmetric_x: bool) -> tuple[ConicProblem, dict]:
    d = local_dim_from_full(np.asarray(w).shape[0])
    m = sym_dim(d)
    w_comp = compress(np.asarray(w, dtype=complex))

    if require_symmetric_x:
        x_field_size = m
        basis_x = hermitian_basis(m, "complex")
        phi = np.stack([compress(sym_conjugated_pt(embed(h)), check_support=False)
                        for h in basis_x])
    else:
        x_field_size = d * d
        basis_x = hermitian_basis(d * d, "complex")
        phi = np.stack([compress(sym_conjugated_pt(h), check_support=False)
                        for h in basis_x])
    n_x = basis_x.shape[0]
    basis_m = hermitian_basis(m, "complex")
    n_yv = basis_m.shape[0]
    n_vars = n_x + n_yv

    # equality rows: coordinates of Phi(X) + Y = compress(W) in the m-basis
    a_eq = np.zeros((n_yv, n_vars))
    a_eq[:, :n_x] = np.einsum("skl,tkl->ts", basis_m.conj(), phi).real.T
    a_eq[:, n_x:] = np.eye(n_yv)
    b_eq = matrix_to_params(w_comp, "complex")

    coeffs_x = np.zeros((n_vars, x_field_size, x_field_size), dtype=complex)
    coeffs_x[:n_x] = basis_x
    coeffs_y = np.zeros((n_vars, m, m), dtype=complex)
    coeffs_y[n_x:] = basis_m
    blocks = (
        PsdBlock(name="X", size=x_field_size, field="complex",
                 const=np.zeros((x_field_size, x_field_size), dtype=complex),
                 coeffs=coeffs_x),
        PsdBlock(name="Y", size=m, field="complex",
                 const=np.zeros((m, m), dtype=complex), coeffs=coeffs_y),
    )
    problem = ConicProblem(n_vars=n_vars, a_eq=a_eq, b_eq=b_eq, blocks=blocks)
    return problem, {"d": d, "require_symmetric_x": require_symmetric_x}


def is_decomposable_witness(w: np.ndarray, require_symmetric_x: bool = True,
                            tol: float | None = None, backend: str = "auto") -> DecompositionCheck:
    """Feasibility of W = P X^PT P + Y with X, Y PSD.

    ``require_symmetric_x`` keeps the P X P = X restriction of the
    decomposable-witness definition; dropping it searches over all PSD X on
    the doubled space.
    """
    from ..symspace import require_hermitian

    w = require_hermitian(np.asarray(w, dtype=complex), name="witness")
    d = local_dim_from_full(w.shape[0])
    problem, meta = build_decomposability(w, require_symmetric_x)
    result = conic_solve(problem, tol=tol, backend=backend)
    if result.status == "feasible":
        x_val = result.block("X")
        y_val = result.block("Y")
        x_full = embed(x_val) if require_symmetric_x else x_val
        split = projector_sym(d) @ partial_transpose(x_full) @ projector_sym(d) + embed(y_val)
        residual = float(np.abs(split - w).max())
        return DecompositionCheck("feasible", x_full, y_val, None, residual, result)
    if result.status == "infeasible":
        # the equality multipliers form the excluding state (up to scale/sign)
        z = params_to_matrix(result.certificate.y, sym_dim(d), "complex")
        z_full = embed(z)
        sign = -1.0 if np.trace(w @ z_full).real > 0 else 1.0
        z_full = sign * z_full
        trace = np.trace(z_full).real
        if trace > 1e-12:
            z_full = z_full / trace
        return DecompositionCheck("infeasible", None, None, z_full, float("nan"), result)
    return DecompositionCheck("inconclusive", None, None, None, float("nan"), result)


# --------------------------------------------------------------------------
# max overlap of PPT symmetric states with a projector; max-negative witness
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MaxOverlapResult:
    """Optimal overlap c = max Tr(P rho) over PPT symmetric states."""

    c: float
    rho_sym: np.ndarray
    rho_full: np.ndarray
    conic: ConicResult


def build_max_overlap(p_full: np.ndarray, d: int) -> ConicProblem:
    m = sym_dim(d)
    basis_m = hermitian_basis(m, "complex")
    n_vars = basis_m.shape[0]
    embedded = np.stack([embed(h) for h in basis_m])
    objective = -np.einsum("kl,tkl->t", np.asarray(p_full, dtype=complex).conj(), embedded).real
    a_eq = np.einsum("tkk->t", basis_m).real[None, :]
    b_eq = np.ones(1)
    pt_coeffs = np.stack([partial_transpose(e) for e in embedded])
    blocks = (
        PsdBlock(name="rho", size=m, field="complex",
                 const=np.zeros((m, m), dtype=complex), coeffs=basis_m.copy()),
        PsdBlock(name="rho_pt", size=d * d, field="complex",
                 const=np.zeros((d * d, d * d), dtype=complex), coeffs=pt_coeffs),
    )
    return ConicProblem(n_vars=n_vars, objective=objective, a_eq=a_eq, b_eq=b_eq,
                        blocks=blocks)


def max_overlap_ppt(p_full: np.ndarray, d: int, tol: float | None = None,
                    backend: str = "auto") -> MaxOverlapResult:
    """Maximize Tr(P rho) over symmetric-supported rho with PSD full rho^PT."""
    from ..symspace import is_symmetric_supported, require_hermitian

    p_full = require_hermitian(np.asarray(p_full, dtype=complex), name="projector")
    scale = max(1.0, float(np.abs(p_full).max()))
    if np.abs(p_full @ p_full - p_full).max() > 1e-8 * scale:
        raise ValueError("expected an orthogonal projector")
    if np.abs(p_full).max() > 0 and not is_symmetric_supported(p_full, tol=1e-8):
        raise ValueError("projector must target a subspace of the symmetric subspace")
    problem = build_max_overlap(p_full, d)
    result = conic_solve(problem, tol=tol, backend=backend)
    if result.status != "feasible":
        raise RuntimeError(f"max-overlap solve did not converge: {result.status}")
    rho_sym = result.block("rho")
    rho_full = embed(rho_sym)
    c = float(np.trace(p_full @ rho_full).real)
    return MaxOverlapResult(c=c, rho_sym=rho_sym, rho_full=rho_full, conic=result)


def max_neg_witness_from_overlap(subspace: NptSubspace, overlap: MaxOverlapResult) -> WitnessCandidate:
    """W = P_sym - P/c: negative exactly on the PPT-free subspace."""
    d = subspace.d
    w = projector_sym(d) - subspace.projector() / overlap.c
    return WitnessCandidate(d=d, matrix=w, provenance=f"max_neg(d={d})")


def build_max_neg_witness(d: int, tol: float | None = None, backend: str = "auto") -> WitnessCandidate:
    """Witness with exactly d(d-1)/2 negative eigenvalues, via the overlap bound.

    The subspace projector P admits no PPT symmetric state in its range, so
    c = max Tr(P rho) < 1 and W = P_sym - P/c is non-negative on every PPT
    symmetric state while acting as 1 - 1/c < 0 on the subspace.
    """
    if not 2 <= d <= 6:
        raise ValueError("max-negative witness construction supports 2 <= d <= 6")
    subspace = npt_subspace(d)
    overlap = max_overlap_ppt(subspace.projector(), d, tol=tol, backend=backend)
    return max_neg_witness_from_overlap(subspace, overlap)


# --------------------------------------------------------------------------
# parametric sweeps (cvxpy-only fast paths for large agreement tests)
# --------------------------------------------------------------------------

def dual_feasibility_margins(mus: np.ndarray, d: int, assignments) -> np.ndarray:
    """Max-slack margins of the dual system for many spectra at once.

    Positive margin certifies strict feasibility, negative margin
    infeasibility; magnitudes below the solver tolerance are boundary
    cases.  Compiles one parametric problem and re-solves per row.
    """
    if not HAVE_CVXPY:
        raise RuntimeError("parametric sweeps require cvxpy")
    mus = np.asarray(mus, dtype=float)
    assignments = list(assignments)
    base = build_dual_feasibility(mus[0], d, assignments)
    x = cp.Variable(base.n_vars)
    slack = cp.Variable()
    h_par = cp.Parameter(base.h_ineq.shape[0])
    cons = [base.g_ineq @ x <= h_par - slack, slack <= 1]
    for blk in base.blocks:
        flat = blk.coeffs.reshape(base.n_vars, blk.size * blk.size).T.real
        expr = cp.reshape(flat @ x, (blk.size, blk.size), order="C")
        cons.append((expr + expr.T) / 2 >> slack * np.eye(blk.size))
    prob = cp.Problem(cp.Maximize(slack), cons)
    margins = np.empty(mus.shape[0])
    for idx, mu in enumerate(mus):
        h_par.value = p_down(mu)
        prob.solve(solver="CLARABEL", warm_start=True)
        margins[idx] = prob.value
    return margins


def primal_min_values(mus: np.ndarray, d: int, assignments) -> np.ndarray:
    """Optimal pairing values for many witness spectra at once (parametric)."""
    if not HAVE_CVXPY:
        raise RuntimeError("parametric sweeps require cvxpy")
    mus = np.asarray(mus, dtype=float)
    assignments = list(assignments)
    base = build_primal_min(mus[0], d, assignments)
    lam = cp.Variable(base.n_vars)
    c_par = cp.Parameter(base.n_vars)
    cons = [base.a_eq @ lam == base.b_eq, base.g_ineq @ lam <= base.h_ineq]
    for blk in base.blocks:
        flat = blk.coeffs.reshape(base.n_vars, blk.size * blk.size).T.real
        expr = cp.reshape(flat @ lam, (blk.size, blk.size), order="C")
        cons.append((expr + expr.T) / 2 >> 0)
    prob = cp.Problem(cp.Minimize(c_par @ lam), cons)
    values = np.empty(mus.shape[0])
    for idx, mu in enumerate(mus):
        c_par.value = mu[::-1]
        prob.solve(solver="CLARABEL", warm_start=True)
        values[idx] = prob.value
    return values
