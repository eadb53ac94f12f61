"""PSD-cone feasibility/optimization problems in a linear standard form.

A :class:`ConicProblem` collects real scalar variables x with

* an optional linear objective c.x (minimized),
* affine equalities A x = b and inequalities G x <= h,
* PSD blocks S_k(x) = F_k0 + sum_i x_i F_ki (real symmetric or complex
  Hermitian data).

Infeasibility is only ever declared through an explicit certificate
(y, w >= 0, Z_k >= 0) satisfying the alternative system

    A^T y - G^T w + sum_k <F_ki, Z_k>_i = 0,
    <w, h> - <y, b> + sum_k <F_k0, Z_k> = -1,

which contradicts feasibility of any point; both point and certificate are
re-verified with plain numpy arithmetic independent of whichever backend
produced them, so no backend can emit a false verdict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..serialize import complex_to_pairs, pairs_to_complex
from ..tolerances import DEFAULT_SOLVER_TOL


@lru_cache(maxsize=None)
def hermitian_basis(n: int, field: str) -> np.ndarray:
    """Orthonormal basis of real-symmetric or complex-Hermitian n x n matrices.

    Orthonormal under Re Tr(A* B); diagonal units first, then symmetric
    off-diagonal, then (for complex) antisymmetric-imaginary elements.
    """
    mats: list[np.ndarray] = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1.0
        mats.append(m)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n), dtype=complex)
            m[i, j] = m[j, i] = 1.0 / np.sqrt(2.0)
            mats.append(m)
    if field == "complex":
        for i in range(n):
            for j in range(i + 1, n):
                m = np.zeros((n, n), dtype=complex)
                m[i, j] = -1j / np.sqrt(2.0)
                m[j, i] = 1j / np.sqrt(2.0)
                mats.append(m)
    elif field != "real":
        raise ValueError("field must be 'real' or 'complex'")
    out = np.stack(mats)
    out.setflags(write=False)
    return out


def herm_param_count(n: int, field: str) -> int:
    return n * n if field == "complex" else n * (n + 1) // 2


def matrix_to_params(mat: np.ndarray, field: str) -> np.ndarray:
    """Coordinates of a Hermitian matrix in :func:`hermitian_basis`."""
    basis = hermitian_basis(mat.shape[0], field)
    return np.einsum("tij,ij->t", basis.conj(), np.asarray(mat, dtype=complex)).real


def params_to_matrix(params: np.ndarray, n: int, field: str) -> np.ndarray:
    basis = hermitian_basis(n, field)
    mat = np.tensordot(np.asarray(params, dtype=float), basis, axes=1)
    return mat.real if field == "real" else mat


@dataclass(frozen=True)
class PsdBlock:
    """One affine PSD constraint S(x) = const + sum_i x_i coeffs[i] >= 0."""

    name: str
    size: int
    field: str  # "real" | "complex"
    const: np.ndarray
    coeffs: np.ndarray  # (n_vars, size, size)

    def value(self, x: np.ndarray) -> np.ndarray:
        mat = self.const + np.tensordot(np.asarray(x, dtype=float), self.coeffs, axes=1)
        return mat.real if self.field == "real" else mat


@dataclass(frozen=True)
class ConicProblem:
    n_vars: int
    objective: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    g_ineq: np.ndarray | None = None
    h_ineq: np.ndarray | None = None
    blocks: tuple[PsdBlock, ...] = ()

    def __post_init__(self):
        for blk in self.blocks:
            if blk.coeffs.shape != (self.n_vars, blk.size, blk.size):
                raise ValueError(f"block {blk.name}: coefficient shape mismatch")
            if blk.const.shape != (blk.size, blk.size):
                raise ValueError(f"block {blk.name}: constant shape mismatch")
        if (self.a_eq is None) != (self.b_eq is None):
            raise ValueError("a_eq and b_eq must be given together")
        if (self.g_ineq is None) != (self.h_ineq is None):
            raise ValueError("g_ineq and h_ineq must be given together")
        if self.a_eq is not None and self.a_eq.shape != (self.b_eq.shape[0], self.n_vars):
            raise ValueError("equality dimensions inconsistent")
        if self.g_ineq is not None and self.g_ineq.shape != (self.h_ineq.shape[0], self.n_vars):
            raise ValueError("inequality dimensions inconsistent")

    @property
    def n_eq(self) -> int:
        return 0 if self.a_eq is None else self.a_eq.shape[0]

    @property
    def n_ineq(self) -> int:
        return 0 if self.g_ineq is None else self.g_ineq.shape[0]

    def block(self, name: str) -> PsdBlock:
        for blk in self.blocks:
            if blk.name == name:
                return blk
        raise KeyError(name)

    def point_residual(self, x: np.ndarray) -> float:
        """Worst scaled constraint violation at x (0 = exactly feasible)."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.a_eq is not None:
            scale = max(1.0, float(np.abs(self.b_eq).max(initial=0.0)))
            worst = max(worst, float(np.abs(self.a_eq @ x - self.b_eq).max(initial=0.0)) / scale)
        if self.g_ineq is not None:
            scale = max(1.0, float(np.abs(self.h_ineq).max(initial=0.0)))
            worst = max(worst, float((self.g_ineq @ x - self.h_ineq).max(initial=0.0)) / scale)
        for blk in self.blocks:
            eigs = np.linalg.eigvalsh(blk.value(x))
            scale = max(1.0, float(np.abs(eigs).max(initial=0.0)))
            worst = max(worst, max(0.0, -float(eigs[0])) / scale)
        return worst

    def to_json(self) -> str:
        def arr(a):
            return None if a is None else np.asarray(a, dtype=float).tolist()

        blocks = [
            {
                "name": blk.name,
                "size": blk.size,
                "field": blk.field,
                "const": complex_to_pairs(blk.const),
                "coeffs": complex_to_pairs(blk.coeffs),
            }
            for blk in self.blocks
        ]
        return json.dumps(
            {
                "n_vars": self.n_vars,
                "objective": arr(self.objective),
                "a_eq": arr(self.a_eq),
                "b_eq": arr(self.b_eq),
                "g_ineq": arr(self.g_ineq),
                "h_ineq": arr(self.h_ineq),
                "blocks": blocks,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ConicProblem":
        data = json.loads(text)

        def arr(key):
            return None if data[key] is None else np.asarray(data[key], dtype=float)

        blocks = []
        for bd in data["blocks"]:
            n = int(bd["size"])
            const = pairs_to_complex(bd["const"]).reshape(n, n)
            coeffs = pairs_to_complex(bd["coeffs"]).reshape(int(data["n_vars"]), n, n)
            if bd["field"] == "real":
                const, coeffs = const.real, coeffs.real
            blocks.append(PsdBlock(bd["name"], n, bd["field"], const, coeffs))
        return cls(
            n_vars=int(data["n_vars"]),
            objective=arr("objective"),
            a_eq=arr("a_eq"),
            b_eq=arr("b_eq"),
            g_ineq=arr("g_ineq"),
            h_ineq=arr("h_ineq"),
            blocks=tuple(blocks),
        )


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Verified witness of infeasibility for the alternative system."""

    y: np.ndarray
    w: np.ndarray
    blocks: dict = field(repr=False)
    gap: float
    stationarity_residual: float


@dataclass(frozen=True)
class ConicResult:
    """Trichotomy outcome: feasible / infeasible / inconclusive.

    ``feasible`` carries a verified point (and optimal objective when the
    problem has one); ``infeasible`` carries a verified certificate;
    ``inconclusive`` asserts nothing (iteration caps, boundary instances).
    """

    status: str
    x: np.ndarray | None
    blocks: dict
    objective: float | None
    residual: float
    tolerance: float
    certificate: InfeasibilityCertificate | None
    backend: str
    iterations: int = 0

    def block(self, name: str) -> np.ndarray:
        return self.blocks[name]

    def to_json(self) -> str:
        cert = None
        if self.certificate is not None:
            cert = {
                "y": self.certificate.y.tolist(),
                "w": self.certificate.w.tolist(),
                "blocks": {k: complex_to_pairs(v) for k, v in self.certificate.blocks.items()},
                "gap": self.certificate.gap,
                "stationarity_residual": self.certificate.stationarity_residual,
            }
        return json.dumps(
            {
                "status": self.status,
                "x": None if self.x is None else self.x.tolist(),
                "blocks": {k: {"size": v.shape[0], "entries": complex_to_pairs(v)}
                           for k, v in self.blocks.items()},
                "objective": self.objective,
                "residual": self.residual,
                "tolerance": self.tolerance,
                "certificate": cert,
                "backend": self.backend,
                "iterations": self.iterations,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "ConicResult":
        data = json.loads(text)
        blocks = {}
        for name, entry in data["blocks"].items():
            n = int(entry["size"])
            blocks[name] = pairs_to_complex(entry["entries"]).reshape(n, n)
        cert = None
        if data["certificate"] is not None:
            raw = data["certificate"]
            cert_blocks = {}
            for name, entries in raw["blocks"].items():
                flat = pairs_to_complex(entries)
                n = int(round(np.sqrt(flat.size)))
                cert_blocks[name] = flat.reshape(n, n)
            cert = InfeasibilityCertificate(
                y=np.asarray(raw["y"], dtype=float),
                w=np.asarray(raw["w"], dtype=float),
                blocks=cert_blocks,
                gap=float(raw["gap"]),
                stationarity_residual=float(raw["stationarity_residual"]),
            )
        return cls(
            status=data["status"],
            x=None if data["x"] is None else np.asarray(data["x"], dtype=float),
            blocks=blocks,
            objective=data["objective"],
            residual=float(data["residual"]) if data["residual"] is not None else float("nan"),
            tolerance=float(data["tolerance"]),
            certificate=cert,
            backend=data["backend"],
            iterations=int(data["iterations"]),
        )


def farkas_problem(problem: ConicProblem) -> tuple[ConicProblem, dict]:
    """The alternative system whose feasibility certifies infeasibility.

    Returns the system as another (pure feasibility) ConicProblem plus a
    layout dict for mapping its solution back to (y, w, Z_k).
    """
    n = problem.n_vars
    n_y = problem.n_eq
    n_w = problem.n_ineq
    z_counts = [herm_param_count(blk.size, blk.field) for blk in problem.blocks]
    n_total = n_y + n_w + sum(z_counts)

    layout = {"y": (0, n_y), "w": (n_y, n_y + n_w), "z": {}}
    offset = n_y + n_w
    for blk, cnt in zip(problem.blocks, z_counts):
        layout["z"][blk.name] = (offset, offset + cnt, blk.size, blk.field)
        offset += cnt

    # stationarity rows: one per original variable
    a_rows = np.zeros((n + 1, n_total))
    b_rows = np.zeros(n + 1)
    if problem.a_eq is not None:
        a_rows[:n, 0:n_y] = problem.a_eq.T
    if problem.g_ineq is not None:
        a_rows[:n, n_y:n_y + n_w] = -problem.g_ineq.T
    for blk in problem.blocks:
        start, stop, size, fld = layout["z"][blk.name]
        basis = hermitian_basis(size, fld)
        # <F_ki, H_t> real pairing: (n, t)
        pair = np.einsum("ikl,tkl->it", blk.coeffs.conj(), basis).real
        a_rows[:n, start:stop] = pair
    # normalization row: <w, h> - <y, b> + sum_k <F_k0, Z_k> = -1
    if problem.b_eq is not None:
        a_rows[n, 0:n_y] = -problem.b_eq
    if problem.h_ineq is not None:
        a_rows[n, n_y:n_y + n_w] = problem.h_ineq
    for blk in problem.blocks:
        start, stop, size, fld = layout["z"][blk.name]
        basis = hermitian_basis(size, fld)
        a_rows[n, start:stop] = np.einsum("kl,tkl->t", blk.const.conj(), basis).real
    b_rows[n] = -1.0

    g = None
    h = None
    if n_w:
        g = np.zeros((n_w, n_total))
        g[:, n_y:n_y + n_w] = -np.eye(n_w)
        h = np.zeros(n_w)

    blocks = []
    for blk in problem.blocks:
        start, stop, size, fld = layout["z"][blk.name]
        basis = hermitian_basis(size, fld)
        coeffs = np.zeros((n_total, size, size), dtype=complex if fld == "complex" else float)
        coeffs[start:stop] = basis.real if fld == "real" else basis
        blocks.append(PsdBlock(name=f"Z_{blk.name}", size=size, field=fld,
                               const=np.zeros((size, size), dtype=coeffs.dtype),
                               coeffs=coeffs))

    alt = ConicProblem(n_vars=n_total, objective=None, a_eq=a_rows, b_eq=b_rows,
                       g_ineq=g, h_ineq=h, blocks=tuple(blocks))
    return alt, layout


def extract_certificate(problem: ConicProblem, alt_x: np.ndarray, layout: dict) -> InfeasibilityCertificate:
    """Map an alternative-system point back to (y, w, Z_k) and re-verify it."""
    alt_x = np.asarray(alt_x, dtype=float)
    y = alt_x[layout["y"][0]:layout["y"][1]]
    w = alt_x[layout["w"][0]:layout["w"][1]]
    zs = {}
    for name, (start, stop, size, fld) in layout["z"].items():
        zs[name] = params_to_matrix(alt_x[start:stop], size, fld)

    stationarity = np.zeros(problem.n_vars)
    if problem.a_eq is not None:
        stationarity += problem.a_eq.T @ y
    if problem.g_ineq is not None:
        stationarity -= problem.g_ineq.T @ w
    gap = 0.0
    if problem.b_eq is not None:
        gap -= float(problem.b_eq @ y)
    if problem.h_ineq is not None:
        gap += float(problem.h_ineq @ w)
    for blk in problem.blocks:
        z = zs[blk.name]
        stationarity += np.einsum("ikl,kl->i", blk.coeffs.conj(), z).real
        gap += float(np.einsum("kl,kl->", blk.const.conj(), z).real)
    return InfeasibilityCertificate(
        y=y, w=w, blocks=zs, gap=gap,
        stationarity_residual=float(np.abs(stationarity).max(initial=0.0)),
    )


def verify_certificate(problem: ConicProblem, cert: InfeasibilityCertificate,
                       tol: float = DEFAULT_SOLVER_TOL) -> bool:
    """Check cone membership, stationarity, and a > 10*tol infeasibility margin."""
    scale = max(1.0, float(np.abs(cert.y).max(initial=0.0)),
                float(np.abs(cert.w).max(initial=0.0)),
                *(float(np.abs(z).max(initial=0.0)) for z in cert.blocks.values()))
    if cert.w.size and cert.w.min() < -tol * scale:
        return False
    for z in cert.blocks.values():
        eigs = np.linalg.eigvalsh(z)
        if eigs[0] < -tol * max(1.0, float(np.abs(eigs).max())):
            return False
    if cert.stationarity_residual > tol * scale:
        return False
    return cert.gap < -10.0 * tol * scale
