"""Solver backends behind the conic trichotomy contract.

``conic_solve`` accepts any backend that can return feasible-with-certificate,
infeasible-with-certificate, or inconclusive.  Two are provided:

* ``cvxpy``: interior-point / first-order solvers via cvxpy (CLARABEL, SCS,
  CVXOPT in preference order).  Default when cvxpy is importable.
* ``projection``: the self-contained reference scheme, alternating
  projections between the affine subspace and the product of PSD cones and
  halfspaces, with an iteration cap.  Objectives are handled by bisection
  on the objective level set.

Whatever the backend reports, points and infeasibility certificates are
re-verified with plain numpy before a verdict is returned; verification
failure downgrades the verdict to inconclusive.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..tolerances import DEFAULT_SOLVER_TOL
from .conic import (
    ConicProblem,
    ConicResult,
    extract_certificate,
    farkas_problem,
    herm_param_count,
    hermitian_basis,
    matrix_to_params,
    params_to_matrix,
    verify_certificate,
)

try:  # pragma: no cover - import guard
    import cvxpy as cp

    HAVE_CVXPY = True
except ImportError:  # pragma: no cover
    cp = None
    HAVE_CVXPY = False

CVXPY_SOLVER_ORDER = ("CLARABEL", "SCS", "CVXOPT")

DEFAULT_MAX_ITER = 100_000


def _block_values(problem: ConicProblem, x: np.ndarray) -> dict:
    return {blk.name: blk.value(x) for blk in problem.blocks}


def _feasible_result(problem, x, tol, backend, iterations=0) -> ConicResult:
    x = np.asarray(x, dtype=float)
    objective = None if problem.objective is None else float(problem.objective @ x)
    return ConicResult(status="feasible", x=x, blocks=_block_values(problem, x),
                       objective=objective, residual=problem.point_residual(x),
                       tolerance=tol, certificate=None, backend=backend,
                       iterations=iterations)


def _infeasible_result(problem, cert, tol, backend, iterations=0) -> ConicResult:
    return ConicResult(status="infeasible", x=None, blocks={}, objective=None,
                       residual=float("nan"), tolerance=tol, certificate=cert,
                       backend=backend, iterations=iterations)


def _inconclusive_result(problem, tol, backend, iterations=0) -> ConicResult:
    return ConicResult(status="inconclusive", x=None, blocks={}, objective=None,
                       residual=float("nan"), tolerance=tol, certificate=None,
                       backend=backend, iterations=iterations)


# --------------------------------------------------------------------------
# cvxpy backend
# --------------------------------------------------------------------------

def _cvxpy_constraints(problem: ConicProblem, x, slack=None):
    cons = []
    if problem.a_eq is not None:
        cons.append(problem.a_eq @ x == problem.b_eq)
    if problem.g_ineq is not None:
        rhs = problem.h_ineq if slack is None else problem.h_ineq - slack
        cons.append(problem.g_ineq @ x <= rhs)
    for blk in problem.blocks:
        flat = blk.coeffs.reshape(problem.n_vars, blk.size * blk.size).T
        expr = cp.reshape(flat @ x, (blk.size, blk.size), order="C") + blk.const
        if blk.field == "complex":
            expr = (expr + expr.H) / 2
        else:
            expr = (expr + expr.T) / 2
        if slack is None:
            cons.append(expr >> 0)
        else:
            cons.append(expr >> slack * np.eye(blk.size))
    return cons


def _cvxpy_solve(prob) -> str | None:
    # "inaccurate" solver warnings are advisory; verdicts rest on the
    # independent residual/certificate verification below.
    import warnings

    for solver in CVXPY_SOLVER_ORDER:
        if solver not in cp.installed_solvers():
            continue
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                prob.solve(solver=solver)
        except (cp.error.SolverError, ValueError):
            continue
        if prob.status not in (None, "solver_error"):
            return prob.status
    return None


def _cvxpy_farkas(problem: ConicProblem, tol: float) -> ConicResult:
    alt, layout = farkas_problem(problem)
    x = cp.Variable(alt.n_vars)
    prob = cp.Problem(cp.Minimize(0), _cvxpy_constraints(alt, x))
    status = _cvxpy_solve(prob)
    if status in ("optimal", "optimal_inaccurate") and x.value is not None:
        cert = extract_certificate(problem, x.value, layout)
        if verify_certificate(problem, cert, tol):
            return _infeasible_result(problem, cert, tol, "cvxpy")
    return _inconclusive_result(problem, tol, "cvxpy")


def _solve_cvxpy(problem: ConicProblem, tol: float) -> ConicResult:
    x = cp.Variable(problem.n_vars)
    if problem.objective is not None:
        prob = cp.Problem(cp.Minimize(problem.objective @ x),
                          _cvxpy_constraints(problem, x))
        status = _cvxpy_solve(prob)
        if status in ("optimal", "optimal_inaccurate") and x.value is not None:
            if problem.point_residual(x.value) <= 100 * tol:
                return _feasible_result(problem, x.value, tol, "cvxpy")
            return _inconclusive_result(problem, tol, "cvxpy")
        if status in ("infeasible", "infeasible_inaccurate"):
            return _cvxpy_farkas(problem, tol)
        return _inconclusive_result(problem, tol, "cvxpy")

    # pure feasibility: maximize the cone slack for a margin-aware verdict
    slack = cp.Variable()
    prob = cp.Problem(cp.Maximize(slack),
                      _cvxpy_constraints(problem, x, slack) + [slack <= 1])
    status = _cvxpy_solve(prob)
    if status in ("optimal", "optimal_inaccurate") and x.value is not None:
        s_star = float(slack.value)
        if s_star >= -10 * tol and problem.point_residual(x.value) <= tol:
            return _feasible_result(problem, x.value, tol, "cvxpy")
        if s_star < 0:
            return _cvxpy_farkas(problem, tol)
        return _inconclusive_result(problem, tol, "cvxpy")
    if status in ("infeasible", "infeasible_inaccurate"):
        return _cvxpy_farkas(problem, tol)
    return _inconclusive_result(problem, tol, "cvxpy")


# --------------------------------------------------------------------------
# projection (reference) backend
# --------------------------------------------------------------------------

class _LiftedSpace:
    """Variables (x, block coordinates) with a cached affine projector."""

    def __init__(self, problem: ConicProblem):
        self.problem = problem
        n = problem.n_vars
        offsets = []
        pos = n
        for blk in problem.blocks:
            cnt = herm_param_count(blk.size, blk.field)
            offsets.append((pos, pos + cnt))
            pos += cnt
        self.offsets = offsets
        self.dim = pos

        rows = []
        rhs = []
        if problem.a_eq is not None:
            a = np.zeros((problem.n_eq, self.dim))
            a[:, :n] = problem.a_eq
            rows.append(a)
            rhs.append(problem.b_eq)
        for blk, (start, stop) in zip(problem.blocks, offsets):
            basis = hermitian_basis(blk.size, blk.field)
            w = np.einsum("tkl,ikl->ti", basis.conj(), blk.coeffs).real
            c0 = matrix_to_params(blk.const, blk.field)
            a = np.zeros((stop - start, self.dim))
            a[:, :n] = -w
            a[:, start:stop] = np.eye(stop - start)
            rows.append(a)
            rhs.append(c0)
        if rows:
            self.c_mat = np.vstack(rows)
            self.c_rhs = np.concatenate(rhs)
            gram = self.c_mat @ self.c_mat.T
            gram[np.diag_indices_from(gram)] += 1e-12
            self.c_factor = scipy.linalg.cho_factor(gram)
        else:
            self.c_mat = None

    def project_affine(self, u: np.ndarray) -> np.ndarray:
        if self.c_mat is None:
            return u
        resid = self.c_mat @ u - self.c_rhs
        return u - self.c_mat.T @ scipy.linalg.cho_solve(self.c_factor, resid)

    def project_cones(self, u: np.ndarray) -> np.ndarray:
        problem = self.problem
        u = u.copy()
        x = u[: problem.n_vars]
        if problem.g_ineq is not None:
            for g, h in zip(problem.g_ineq, problem.h_ineq):
                viol = g @ x - h
                if viol > 0:
                    x -= g * (viol / (g @ g))
        u[: problem.n_vars] = x
        for blk, (start, stop) in zip(problem.blocks, self.offsets):
            mat = params_to_matrix(u[start:stop], blk.size, blk.field)
            eigs, vecs = np.linalg.eigh(mat)
            if eigs[0] < 0:
                clipped = (vecs * np.clip(eigs, 0.0, None)) @ vecs.conj().T
                u[start:stop] = matrix_to_params(clipped, blk.field)
        return u


def _project_feasibility(problem: ConicProblem, tol: float, max_iter: int):
    """Alternating projections; returns (x or None, iterations used)."""
    space = _LiftedSpace(problem)
    u = space.project_affine(np.zeros(space.dim))
    check_every = 25
    for it in range(1, max_iter + 1):
        u = space.project_affine(space.project_cones(u))
        if it % check_every == 0 or it == max_iter:
            x = u[: problem.n_vars]
            if problem.point_residual(x) <= tol:
                return x, it
    return None, max_iter


def _solve_projection(problem: ConicProblem, tol: float, max_iter: int) -> ConicResult:
    if problem.objective is not None:
        return _projection_minimize(problem, tol, max_iter)
    x, iters = _project_feasibility(problem, tol, max_iter)
    if x is not None:
        return _feasible_result(problem, x, tol, "projection", iters)
    alt, layout = farkas_problem(problem)
    alt_x, alt_iters = _project_feasibility(alt, tol, max_iter)
    if alt_x is not None:
        cert = extract_certificate(problem, alt_x, layout)
        if verify_certificate(problem, cert, tol):
            return _infeasible_result(problem, cert, tol, "projection", iters + alt_iters)
    return _inconclusive_result(problem, tol, "projection", iters + alt_iters)


def _with_level_constraint(problem: ConicProblem, level: float) -> ConicProblem:
    row = problem.objective[None, :]
    if problem.g_ineq is None:
        g, h = row, np.array([level])
    else:
        g = np.vstack([problem.g_ineq, row])
        h = np.concatenate([problem.h_ineq, [level]])
    return ConicProblem(n_vars=problem.n_vars, objective=None,
                        a_eq=problem.a_eq, b_eq=problem.b_eq,
                        g_ineq=g, h_ineq=h, blocks=problem.blocks)


def _projection_minimize(problem: ConicProblem, tol: float, max_iter: int) -> ConicResult:
    """Bisection on the objective level set over feasibility solves.

    The returned objective is the value of an actual feasible point, i.e.
    an upper bound on the optimum; bisection stops once the bracket is
    tighter than 10*tol or a level solve is inconclusive.
    """
    base = ConicProblem(n_vars=problem.n_vars, objective=None,
                        a_eq=problem.a_eq, b_eq=problem.b_eq,
                        g_ineq=problem.g_ineq, h_ineq=problem.h_ineq,
                        blocks=problem.blocks)
    first = _solve_projection(base, tol, max_iter)
    if first.status != "feasible":
        return ConicResult(status=first.status, x=None, blocks={}, objective=None,
                           residual=float("nan"), tolerance=tol,
                           certificate=first.certificate, backend="projection",
                           iterations=first.iterations)
    best_x = first.x
    upper = float(problem.objective @ best_x)
    scale = max(1.0, abs(upper))
    lower = None
    step = scale
    # find a certified-or-assumed lower bracket
    for _ in range(30):
        trial = upper - step
        res = _solve_projection(_with_level_constraint(problem, trial), tol, max_iter)
        if res.status == "feasible":
            best_x = res.x
            upper = float(problem.objective @ best_x)
            step *= 2.0
        else:
            lower = trial
            break
    if lower is not None:
        while upper - lower > 10 * tol * scale:
            mid = 0.5 * (upper + lower)
            res = _solve_projection(_with_level_constraint(problem, mid), tol, max_iter)
            if res.status == "feasible":
                best_x = res.x
                upper = min(upper, float(problem.objective @ best_x))
            elif res.status == "infeasible":
                lower = mid
            else:
                break
    return _feasible_result(problem, best_x, tol, "projection")


# --------------------------------------------------------------------------
# dispatcher
# --------------------------------------------------------------------------

def conic_solve(problem: ConicProblem, tol: float | None = None,
                backend: str = "auto", max_iter: int = DEFAULT_MAX_ITER) -> ConicResult:
    """Solve a conic problem, honoring the trichotomy contract.

    ``backend='auto'`` prefers cvxpy and falls back to the projection
    reference scheme.  ``tol`` defaults to 1e-7.
    """
    tol = DEFAULT_SOLVER_TOL if tol is None else float(tol)
    if backend == "auto":
        backend = "cvxpy" if HAVE_CVXPY else "projection"
    if backend == "cvxpy":
        if not HAVE_CVXPY:
            raise RuntimeError("cvxpy backend requested but cvxpy is not importable")
        return _solve_cvxpy(problem, tol)
    if backend == "projection":
        return _solve_projection(problem, tol, max_iter)
    raise ValueError(f"unknown backend {backend!r}")
