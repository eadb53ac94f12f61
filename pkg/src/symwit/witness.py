"""Construction and spectral analysis of symmetric entanglement witnesses.

The central object is the conjugated partial transpose P (vv*)^PT P of a
rank-one operator: these are the extreme-ray candidates of the decomposable
symmetric witness cone.  For real symmetric v the nonzero eigenvalues are
exactly the pairwise products of the coefficients in v's spectral
decomposition, which drives both the eigenvalue predictions and the
negative-count bounds here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.optimize

from .abssep import Spectrum
from .rng import as_generator
from .symspace import (
    antisym_dim,
    is_symmetric_vector,
    max_abs,
    partial_transpose,
    projector_sym,
    real_sym_vector_spectral,
    require_hermitian,
    local_dim_from_full,
    vectorize,
)


@dataclass(frozen=True)
class WitnessCandidate:
    """Hermitian, symmetric-supported operator with its construction tag."""

    d: int
    matrix: np.ndarray
    provenance: str

    def eigenvalues(self) -> np.ndarray:
        """Full-representation spectrum, descending (includes kernel zeros)."""
        return np.linalg.eigvalsh(self.matrix)[::-1]


@dataclass(frozen=True)
class NptSubspace:
    """Orthonormal basis of a symmetric subspace on which no PPT state lives.

    ``basis`` rows are symmetric vectors in C^d (x) C^d; every state with
    range inside their span has a partial transpose with a negative
    eigenvalue.  The matricization of any element has all of its constant
    column-minus-row diagonals summing to zero.
    """

    d: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        """Full-representation orthogonal projector onto the subspace."""
        return self.basis.conj().T @ self.basis


def witness_from_vector(v: np.ndarray) -> WitnessCandidate:
    """W = P (vv*)^PT P for a length-d^2 vector (symmetric or not)."""
    v = np.asarray(v, dtype=complex)
    d = local_dim_from_full(v.shape[0])
    proj = projector_sym(d)
    w = proj @ partial_transpose(np.outer(v, v.conj())) @ proj
    return WitnessCandidate(d=d, matrix=w, provenance="from_vector")


def split_identity_residual(v: np.ndarray) -> float:
    """Residual of W(v) = W(Re v) + W(Im v) plus the imaginary part of W(v).

    Zero (numerically) for symmetric v; generically violated otherwise,
    which is the negative control for the realness property.
    """
    v = np.asarray(v, dtype=complex)
    w = witness_from_vector(v).matrix
    wx = witness_from_vector(np.real(v).astype(complex)).matrix
    wy = witness_from_vector(np.imag(v).astype(complex)).matrix
    return max(max_abs(w - wx - wy), max_abs(w.imag))


def real_split(v: np.ndarray, require_symmetric: bool = True):
    """Split v into real and imaginary parts and check the witness identity.

    Returns (Re v, Im v, residual) where residual bounds both the imaginary
    part of W(v) and the deviation from W(v) = W(Re v) + W(Im v).
    """
    v = np.asarray(v, dtype=complex)
    if require_symmetric and not is_symmetric_vector(v):
        raise ValueError("real_split requires a symmetric vector")
    return np.real(v), np.imag(v), split_identity_residual(v)


def predicted_eigs_real_sym(v: np.ndarray) -> Spectrum:
    """Predicted witness spectrum for real symmetric v, without building W.

    The multiset {alpha_i alpha_j : i <= j} from v's spectral decomposition,
    padded with d(d-1)/2 zeros from the antisymmetric kernel.
    """
    decomp = real_sym_vector_spectral(v)
    alpha = decomp.alpha
    d = alpha.shape[0]
    products = np.outer(alpha, alpha)[np.triu_indices(d)]
    values = np.concatenate([products, np.zeros(antisym_dim(d))])
    return Spectrum.witness(np.sort(values)[::-1])


def count_negative_eigs(w: np.ndarray, tol: float = 1e-8) -> int:
    """Number of eigenvalues below -tol * spectral radius of a Hermitian matrix."""
    w = require_hermitian(np.asarray(w), name="witness")
    eigs = np.linalg.eigvalsh(w)
    scale = max(np.abs(eigs).max(), np.finfo(float).tiny)
    return int((eigs < -tol * scale).sum())


def max_neg_bounds(d: int) -> tuple[int, int]:
    """(floor(d^2/4), d(d-1)/2): the real-symmetric-vector and general caps."""
    return (d * d) // 4, d * (d - 1) // 2


def construct_two_qubit_witness(mu1: float, mu2: float, mu3: float):
    """Realize a target 2-qubit witness spectrum {mu1, mu2, mu3, 0}.

    Requires mu1 >= mu2 >= mu3, mu2 >= 0 and mu3 >= -sqrt(mu1 mu2); the
    source X is PSD with corner entries (mu1, mu3; mu3, mu2) and the
    resulting W = P X^PT P has eigenvectors e1 x e1, e2 x e2 and the two
    Bell-type combinations of e1 x e2 and e2 x e1.

    Returns (X, WitnessCandidate).
    """
    if not mu1 >= mu2 >= mu3:
        raise ValueError("spectrum must be sorted descending")
    if mu2 < -1e-12 or mu3 < -np.sqrt(max(mu1, 0.0) * max(mu2, 0.0)) - 1e-12:
        raise ValueError("spectrum not achievable by this construction")
    x = np.zeros((4, 4))
    x[0, 0] = mu1
    x[3, 3] = mu2
    x[0, 3] = x[3, 0] = mu3
    proj = projector_sym(2)
    w = proj @ partial_transpose(x) @ proj
    return x, WitnessCandidate(d=2, matrix=w, provenance="constructed_2q")


def classify_2q_spectrum(mu1: float, mu2: float, mu3: float) -> str:
    """Classify a candidate 2-qubit witness spectrum.

    ``achievable``: realized by an explicit decomposable witness
    (mu2 >= 0 and mu3 >= -sqrt(mu1 mu2)).
    ``excluded``: impossible for any symmetric entanglement witness
    (violates mu2 >= 0, or the proven lower bound on mu3).
    ``conjectured-excluded``: passes the proven bound but falls in the gap
    below -sqrt(mu1 mu2), where exclusion is conjectured but open.
    """
    if not mu1 >= mu2 >= mu3:
        raise ValueError("spectrum must be sorted descending")
    if mu2 < 0:
        return "excluded"
    bound_b = -np.sqrt(mu1 * mu2)
    bound_c = (-mu1 / 4.0 - mu2) if mu2 < mu1 / 4.0 else bound_b
    if mu3 < bound_c:
        return "excluded"
    if mu3 >= bound_b:
        return "achievable"
    return "conjectured-excluded"


class SewSample(NamedTuple):
    """Minimum sampled value of the product-vector form and its argmin."""

    min_value: float
    minimizer: np.ndarray


def product_form_values(w: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """(v x v)* W (v x v) for a batch of local vectors, shape (n, d)."""
    vectors = np.asarray(vectors, dtype=complex)
    tensors = np.einsum("ni,nj->nij", vectors, vectors).reshape(vectors.shape[0], -1)
    return np.einsum("na,ab,nb->n", tensors.conj(), w, tensors).real


def check_sew_sampled(w: np.ndarray, n_samples: int = 10_000, seed=None,
                      refine_steps: int = 100) -> SewSample:
    """Heuristic witness check: sampled minimum of (v x v)* W (v x v).

    Samples unit vectors, then runs a short local descent from the best
    sample.  A minimum above -tol is evidence, not proof, of witness-hood;
    exact nonnegativity of a biquadratic form is not certified here.
    """
    w = require_hermitian(np.asarray(w), name="witness")
    d = local_dim_from_full(w.shape[0])
    rng = as_generator(seed)
    vectors = rng.standard_normal((n_samples, d)) + 1j * rng.standard_normal((n_samples, d))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    values = product_form_values(w, vectors)
    best = int(np.argmin(values))
    best_value = float(values[best])
    best_vector = vectors[best]

    def objective(params: np.ndarray) -> float:
        vec = params[:d] + 1j * params[d:]
        norm = np.linalg.norm(vec)
        if norm < 1e-12:
            return 0.0
        vec = vec / norm
        return float(product_form_values(w, vec[None, :])[0])

    start = np.concatenate([best_vector.real, best_vector.imag])
    result = scipy.optimize.minimize(objective, start, method="L-BFGS-B",
                                     options={"maxiter": refine_steps})
    if result.fun < best_value:
        best_value = float(result.fun)
        refined = result.x[:d] + 1j * result.x[d:]
        best_vector = refined / np.linalg.norm(refined)
    return SewSample(min_value=best_value, minimizer=best_vector)


def npt_subspace(d: int) -> NptSubspace:
    """The d(d-1)/2-dimensional symmetric subspace admitting no PPT state.

    Spanned by symmetrized difference vectors along each matricization
    diagonal; the span is orthonormalized, which preserves the
    zero-diagonal-sum property since it is linear.
    """
    if d < 2:
        raise ValueError("npt subspace requires d >= 2")
    spanning = []
    for k in range(d - 1):
        for i in range(1, d):
            if i + k < d:
                i0 = i - 1
                vec = np.zeros(d * d)
                vec[i0 * d + (i0 + k)] += 1.0
                vec[(i0 + 1) * d + (i0 + k + 1)] -= 1.0
                vec[(i0 + k) * d + i0] += 1.0
                vec[(i0 + k + 1) * d + (i0 + 1)] -= 1.0
                spanning.append(vec)
    mat = np.array(spanning).T
    q, _ = np.linalg.qr(mat)
    basis = q.T.copy()
    # fix sign convention for reproducible serialization
    for row in basis:
        lead = row[np.argmax(np.abs(row) > 1e-12)]
        if lead < 0:
            row *= -1.0
    expected = d * (d - 1) // 2
    if basis.shape[0] != expected:
        raise AssertionError("unexpected subspace dimension")
    return NptSubspace(d=d, basis=basis)


def diagonal_sums(mat: np.ndarray) -> np.ndarray:
    """Sums over constant column-minus-row offsets, from -(d-1) to d-1."""
    mat = np.asarray(mat)
    d = mat.shape[0]
    return np.array([np.trace(mat, offset=k) for k in range(-(d - 1), d)])


def attaining_real_sym_vector(d: int) -> np.ndarray:
    """Real symmetric vector whose witness attains the floor(d^2/4) cap.

    Built from coefficients (+1, ..., +1, -1, ..., -1) with floor(d/2)
    negative entries, so exactly floor(d/2) * ceil(d/2) pairwise products
    are negative.
    """
    alpha = np.ones(d)
    alpha[d - d // 2:] = -1.0
    return vectorize(np.diag(alpha))


def witness_spectrum(candidate: WitnessCandidate) -> Spectrum:
    """Descending full-representation spectrum as a witness Spectrum."""
    return Spectrum.witness(candidate.eigenvalues())


def verify_symmetric_support(w: np.ndarray) -> float:
    """Residual max|P W P - W| (unscaled)."""
    w = np.asarray(w)
    d = local_dim_from_full(w.shape[0])
    proj = projector_sym(d)
    return max_abs(proj @ w @ proj - w)
