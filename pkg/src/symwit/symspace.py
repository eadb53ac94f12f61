"""Symmetric-subspace linear algebra for two copies of C^d.

Conventions used throughout the library:

* "full" operators act on C^d (x) C^d and are stored as d^2 x d^2 complex
  arrays, row-major in the composite index (i, j) -> i*d + j.
* "compressed" operators act on the symmetric subspace and are stored as
  m x m arrays with m = d(d+1)/2, expressed in the canonical orthonormal
  symmetric basis: e_i(x)e_i for i = 1..d followed by
  (e_i(x)e_j + e_j(x)e_i)/sqrt(2) for i < j, ordered lexicographically by
  the index pair (i, j).
* vectors in C^d (x) C^d are length-d^2 arrays; their matricization places
  entries row by row into a d x d matrix, so symmetric vectors are exactly
  the ones with a symmetric matricization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .rng import as_generator
from .tolerances import HERMITIAN_TOL, SUPPORT_TOL

MAX_DIM = 16


def sym_dim(d: int) -> int:
    """Dimension d(d+1)/2 of the symmetric subspace of C^d (x) C^d."""
    return d * (d + 1) // 2


def antisym_dim(d: int) -> int:
    """Dimension d(d-1)/2 of the antisymmetric complement."""
    return d * (d - 1) // 2


def _check_dim(d: int) -> int:
    d = int(d)
    if d < 1:
        raise ValueError("local dimension must be a positive integer")
    if d > MAX_DIM:
        raise ValueError(f"local dimension {d} exceeds supported maximum {MAX_DIM}")
    return d


def local_dim_from_full(n: int) -> int:
    """Recover d from the size n = d^2 of a full-space object."""
    d = math.isqrt(n)
    if d * d != n:
        raise ValueError(f"size {n} is not a perfect square d^2")
    return d


def local_dim_from_sym(m: int) -> int:
    """Recover d from the size m = d(d+1)/2 of a compressed object."""
    d = (math.isqrt(8 * m + 1) - 1) // 2
    if d * (d + 1) // 2 != m:
        raise ValueError(f"size {m} is not a triangular number d(d+1)/2")
    return d


@lru_cache(maxsize=None)
def sym_pairs(d: int) -> tuple[tuple[int, int], ...]:
    """Canonical (0-based) ordering of index pairs (i, j) with i <= j."""
    d = _check_dim(d)
    return tuple((i, j) for i in range(d) for j in range(i, d))


@lru_cache(maxsize=None)
def _pair_arrays(d: int) -> tuple[np.ndarray, np.ndarray]:
    pairs = sym_pairs(d)
    rows = np.array([p[0] for p in pairs])
    cols = np.array([p[1] for p in pairs])
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


@lru_cache(maxsize=None)
def sym_basis(d: int) -> np.ndarray:
    """d^2 x m isometry whose columns are the canonical symmetric basis."""
    d = _check_dim(d)
    m = sym_dim(d)
    basis = np.zeros((d * d, m))
    for t, (i, j) in enumerate(sym_pairs(d)):
        if i == j:
            basis[i * d + i, t] = 1.0
        else:
            basis[i * d + j, t] = basis[j * d + i, t] = 1.0 / np.sqrt(2.0)
    basis.setflags(write=False)
    return basis


@lru_cache(maxsize=None)
def projector_sym(d: int) -> np.ndarray:
    """Orthogonal projection onto the symmetric subspace, as a full operator."""
    basis = sym_basis(d)
    proj = basis @ basis.T
    proj.setflags(write=False)
    return proj


def max_abs(a: np.ndarray) -> float:
    """Largest entry magnitude; 0.0 for empty input."""
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    scale = max(max_abs(a), np.finfo(float).tiny)
    return max_abs(a - a.conj().T) <= tol * scale


def require_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square")
    if not is_hermitian(a, tol):
        raise ValueError(f"{name} is not Hermitian within tolerance {tol:g}")
    return a


def is_symmetric_supported(a: np.ndarray, tol: float = SUPPORT_TOL) -> bool:
    """Whether P A P = A for the symmetric projector P, within tolerance."""
    a = np.asarray(a)
    d = local_dim_from_full(a.shape[0])
    proj = projector_sym(d)
    scale = max(max_abs(a), np.finfo(float).tiny)
    return max_abs(proj @ a @ proj - a) <= tol * scale


def embed(a_sym: np.ndarray) -> np.ndarray:
    """Lift an m x m compressed operator to its d^2 x d^2 full representation.

    The embedding is isometric: eigenvalues are preserved and d(d-1)/2
    zeros are appended (the antisymmetric kernel).
    """
    a_sym = np.asarray(a_sym)
    if a_sym.ndim != 2 or a_sym.shape[0] != a_sym.shape[1]:
        raise ValueError("compressed operator must be square")
    d = local_dim_from_sym(a_sym.shape[0])
    basis = sym_basis(d)
    return basis @ a_sym @ basis.conj().T


def compress(a_full: np.ndarray, check_support: bool = True) -> np.ndarray:
    """Restrict a full operator to the symmetric subspace (m x m form).

    Raises if the operator is not supported on the symmetric subspace,
    since compression would silently discard data in that case.
    """
    a_full = np.asarray(a_full)
    if a_full.ndim != 2 or a_full.shape[0] != a_full.shape[1]:
        raise ValueError("full operator must be square")
    d = local_dim_from_full(a_full.shape[0])
    if check_support and not is_symmetric_supported(a_full):
        raise ValueError("not supported on symmetric subspace")
    basis = sym_basis(d)
    return basis.conj().T @ a_full @ basis


def partial_transpose(a: np.ndarray) -> np.ndarray:
    """Transpose the second tensor factor of a full operator.

    Involutive, Hermiticity-preserving, and satisfies
    (A (x) B)^PT = A (x) B^T.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("partial transpose requires a square matrix")
    n = a.shape[0]
    d = local_dim_from_full(n)
    return a.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(n, n)


def sym_conjugated_pt(a: np.ndarray) -> np.ndarray:
    """P A^PT P: the partial transpose compressed to the symmetric subspace."""
    a = np.asarray(a)
    d = local_dim_from_full(a.shape[0])
    proj = projector_sym(d)
    return proj @ partial_transpose(a) @ proj


def matricize_vec(v: np.ndarray) -> np.ndarray:
    """Place the entries of a length-d^2 vector row by row into a d x d matrix."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError("expected a 1-d coordinate vector")
    d = local_dim_from_full(v.shape[0])
    return v.reshape(d, d)


def vectorize(mat: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`matricize_vec`."""
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    return mat.reshape(-1)


def is_symmetric_vector(v: np.ndarray, tol: float = SUPPORT_TOL) -> bool:
    """Whether v lies in the symmetric subspace (matricization is symmetric)."""
    mat = matricize_vec(v)
    scale = max(max_abs(mat), np.finfo(float).tiny)
    return max_abs(mat - mat.T) <= tol * scale


def symmetrize_vector(v: np.ndarray) -> np.ndarray:
    """Project a length-d^2 vector onto the symmetric subspace."""
    mat = matricize_vec(v)
    return vectorize((mat + mat.T) / 2.0)


@dataclass(frozen=True)
class RealSymSpectralDecomp:
    """Spectral decomposition v = sum_j alpha_j w_j (x) w_j of a real symmetric vector.

    ``alpha`` carries signs (the matricization need not be PSD); ``basis``
    columns are the orthonormal real vectors w_j.
    """

    alpha: np.ndarray
    basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Rebuild the length-d^2 vector sum_j alpha_j w_j (x) w_j."""
        return vectorize((self.basis * self.alpha) @ self.basis.T)


def real_sym_vector_spectral(v: np.ndarray, tol: float = SUPPORT_TOL) -> RealSymSpectralDecomp:
    """Real eigendecomposition of the matricization of a real symmetric vector."""
    v = np.asarray(v)
    scale = max(max_abs(v), np.finfo(float).tiny)
    if np.iscomplexobj(v) and max_abs(v.imag) > 1e-12 * scale:
        raise ValueError("requires real symmetric vector")
    v = np.real(v).astype(float)
    if not is_symmetric_vector(v, tol):
        raise ValueError("requires real symmetric vector")
    mat = matricize_vec(v)
    alpha, basis = np.linalg.eigh((mat + mat.T) / 2.0)
    return RealSymSpectralDecomp(alpha=alpha, basis=basis)


def haar_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed n x n unitary via QR of a complex Ginibre matrix.

    The R-diagonal phase correction makes the distribution exactly Haar
    rather than QR-convention biased.
    """
    rng = as_generator(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return q


def random_sym_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random unitary on the symmetric subspace (m x m, compressed basis)."""
    d = _check_dim(d)
    return haar_unitary(sym_dim(d), seed)


def sym_conjugated_pt_compressed_from_vectors(v: np.ndarray) -> np.ndarray:
    """Compressed P (vv*)^PT P for a batch of length-d^2 vectors.

    Input shape (..., d^2), output shape (..., m, m).  Equivalent to
    ``compress(sym_conjugated_pt(outer(v, v.conj())))`` per vector but
    contracted directly in the compressed basis, which is what makes
    million-sample searches affordable.
    """
    v = np.asarray(v, dtype=complex)
    squeeze = v.ndim == 1
    if squeeze:
        v = v[None, :]
    d = local_dim_from_full(v.shape[-1])
    m = sym_dim(d)
    mats = v.reshape(v.shape[:-1] + (d, d))
    basis4 = sym_basis(d).reshape(d, d, m)
    # C[p,q] = sum_{i,j,k,l} B[ij,p] V[i,l] conj(V[k,j]) B[kl,q]
    t1 = np.einsum("ijp,...il->...jpl", basis4, mats)
    t2 = np.einsum("...kj,klq->...jlq", mats.conj(), basis4)
    out = np.einsum("...jpl,...jlq->...pq", t1, t2)
    return out[0] if squeeze else out
