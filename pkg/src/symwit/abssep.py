"""Absolute symmetric PPT / separability verdicts from spectra.

A spectrum is absolutely symmetric PPT iff every symmetric matricization of
it is positive semidefinite.  For d = 2 the single closed-form inequality
lambda_1 <= 2 sqrt(lambda_2 lambda_3) is equivalent (and further equivalent
to absolute symmetric separability); for d = 3 one 3 x 3 matrix suffices;
for d = 4 a four-matrix test is implemented as a flagged conjecture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matricize import (
    Assignment,
    cached_reduced_assignments,
    enumerate_assignments,
    symmetric_matricization,
)
from .symspace import sym_dim
from .tolerances import MARGINAL_BAND, resolve_tol

# Matricization patterns that decide absolute symmetric PPT in low dimension.
# Targets are 0-based spectrum positions per canonical pair order.
FASTPATH_ASSIGNMENT_2D = Assignment(d=2, targets=(2, 0, 1))
FASTPATH_ASSIGNMENT_3D = Assignment(d=3, targets=(5, 1, 0, 2, 3, 4))
CONJECTURED_ASSIGNMENTS_4D = (
    Assignment(d=4, targets=(9, 2, 1, 0, 3, 4, 5, 6, 7, 8)),
    Assignment(d=4, targets=(9, 2, 1, 0, 3, 4, 6, 5, 7, 8)),
    Assignment(d=4, targets=(9, 5, 1, 0, 4, 3, 2, 6, 7, 8)),
    Assignment(d=4, targets=(9, 6, 1, 0, 4, 3, 2, 5, 7, 8)),
)

# Constant spin-flip operator on the d=2 symmetric subspace, expressed in the
# canonical basis {e1 x e1, (e1 x e2 + e2 x e1)/sqrt(2), e2 x e2}.
SPIN_FLIP_2Q = np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]])
SPIN_FLIP_2Q.setflags(write=False)


@dataclass(frozen=True)
class Spectrum:
    """Descending real eigenvalue list of a state or witness."""

    values: np.ndarray
    kind: str  # "state" | "witness"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("spectrum must be one-dimensional")
        if np.any(np.diff(values) > 1e-12 * max(1.0, np.abs(values).max())):
            raise ValueError("spectrum must be sorted in non-increasing order")
        if self.kind not in ("state", "witness"):
            raise ValueError("kind must be 'state' or 'witness'")
        if self.kind == "state":
            if values.min() < -1e-10:
                raise ValueError("state spectrum must be non-negative")
            if abs(values.sum() - 1.0) > 1e-10:
                raise ValueError("state spectrum must sum to 1")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def state(cls, values) -> "Spectrum":
        return cls(np.asarray(values, dtype=float), "state")

    @classmethod
    def witness(cls, values) -> "Spectrum":
        return cls(np.asarray(values, dtype=float), "witness")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ConcurrenceResult:
    """Bosonic two-qubit concurrence value and its nu-triple."""

    value: float
    nu: tuple[float, float, float]


@dataclass(frozen=True)
class PptFailure:
    """Certificate for a failed verdict: the offending matricization."""

    assignment: Assignment
    eigenvalue: float
    eigenvector: np.ndarray


@dataclass(frozen=True)
class AbsPptVerdict:
    """Outcome of an absolute symmetric PPT check.

    ``mode`` records the path that ran (fastpath / reduced / full /
    conjectural); ``marginal`` is set when the deciding margin falls within
    the reporting band, since the underlying characterizations are closed
    conditions and verdicts that close to the boundary are not meaningful
    at double precision.
    """

    holds: bool
    mode: str
    min_eigenvalue: float
    marginal: bool
    certificate: PptFailure | None = None


def spectrum_values(spectrum, d: int | None = None) -> np.ndarray:
    """Coerce a Spectrum or array-like into a validated descending array."""
    values = np.asarray(getattr(spectrum, "values", spectrum), dtype=float)
    if values.ndim != 1:
        raise ValueError("spectrum must be one-dimensional")
    if d is not None and values.size != sym_dim(d):
        raise ValueError(f"expected spectrum of length {sym_dim(d)}, got {values.size}")
    if np.any(np.diff(values) > 1e-12 * max(1.0, np.abs(values).max())):
        raise ValueError("spectrum must be sorted in non-increasing order")
    return values


def matricization_margins(spectra: np.ndarray, assignments) -> np.ndarray:
    """Minimum eigenvalue over a set of symmetric matricizations, batched.

    ``spectra`` has shape (..., m); the result has the batch shape and holds
    the smallest eigenvalue across all assignments for each spectrum.
    """
    spectra = np.asarray(spectra, dtype=float)
    margins = None
    for assignment in assignments:
        eigs = np.linalg.eigvalsh(symmetric_matricization(spectra, assignment))
        low = eigs[..., 0]
        margins = low if margins is None else np.minimum(margins, low)
    if margins is None:
        raise ValueError("no assignments supplied")
    return margins


def fastpath_margin_2d(l1, l2, l3):
    """Margin 2 sqrt(l2 l3) - l1 of the closed-form d=2 test (vectorized)."""
    l2 = np.asarray(l2, dtype=float)
    l3 = np.asarray(l3, dtype=float)
    return 2.0 * np.sqrt(np.clip(l2, 0.0, None) * np.clip(l3, 0.0, None)) - np.asarray(l1, dtype=float)


def _verdict(min_eig: float, scale: float, mode: str, tol: float,
             certificate_builder=None) -> AbsPptVerdict:
    threshold = -tol * max(1.0, scale)
    holds = bool(min_eig >= threshold)
    marginal = bool(abs(min_eig) <= MARGINAL_BAND * max(1.0, scale))
    certificate = None
    if not holds and certificate_builder is not None:
        certificate = certificate_builder()
    return AbsPptVerdict(holds=holds, mode=mode, min_eigenvalue=float(min_eig),
                         marginal=marginal, certificate=certificate)


def _matricization_verdict(values: np.ndarray, d: int, assignments, mode: str,
                           tol: float) -> AbsPptVerdict:
    scale = max(1.0, float(np.abs(values).max()) if values.size else 1.0)
    threshold = -tol * scale
    worst_eig = np.inf
    worst: tuple[Assignment, float, np.ndarray] | None = None
    for assignment in assignments:
        mat = symmetric_matricization(values, assignment)
        eigs, vecs = np.linalg.eigh(mat)
        if eigs[0] < worst_eig:
            worst_eig = float(eigs[0])
            worst = (assignment, worst_eig, vecs[:, 0])
        if eigs[0] < threshold:
            break
    builder = None
    if worst is not None and worst_eig < threshold:
        assignment, eigenvalue, vector = worst
        builder = lambda: PptFailure(assignment=assignment, eigenvalue=eigenvalue,
                                     eigenvector=vector)
    return _verdict(worst_eig, scale, mode, tol, builder)


def is_abs_sym_ppt(spectrum, d: int | None = None, mode: str = "fastpath",
                   tol: float | None = None) -> AbsPptVerdict:
    """Decide absolute symmetric PPT of a state spectrum.

    Modes: ``full`` enumerates all m! matricizations (d <= 3); ``reduced``
    uses the sampled ordering reduction; ``fastpath`` dispatches to the
    minimal known test per dimension and is labeled ``conjectural`` at
    d = 4, where only a conjectured four-matrix test is available.
    """
    values = np.asarray(getattr(spectrum, "values", spectrum), dtype=float)
    if d is None:
        from .symspace import local_dim_from_sym

        d = local_dim_from_sym(values.size)
    values = spectrum_values(values, d)
    if values.min() < -1e-10:
        raise ValueError("state spectrum must be non-negative")
    tol = resolve_tol(tol)

    if mode == "full":
        return _matricization_verdict(values, d, enumerate_assignments(d), "full", tol)
    if mode == "reduced":
        return _matricization_verdict(values, d, cached_reduced_assignments(d), "reduced", tol)
    if mode in ("fastpath", "conjectural"):
        if mode == "conjectural" and d != 4:
            raise ValueError("conjectural mode is defined only for d = 4")
        if d == 1:
            return AbsPptVerdict(holds=True, mode="fastpath", min_eigenvalue=float(2 * values[0]),
                                 marginal=False)
        if d == 2:
            return _matricization_verdict(values, d, [FASTPATH_ASSIGNMENT_2D], "fastpath", tol)
        if d == 3:
            return _matricization_verdict(values, d, [FASTPATH_ASSIGNMENT_3D], "fastpath", tol)
        if d == 4:
            return _matricization_verdict(values, d, CONJECTURED_ASSIGNMENTS_4D, "conjectural", tol)
        raise ValueError("no fast path for d >= 5; use mode='reduced'")
    raise ValueError(f"unknown mode {mode!r}")


def is_abs_sym_ppt_2d(l1: float, l2: float, l3: float, tol: float | None = None) -> bool:
    """Closed form: l1 <= 2 sqrt(l2 l3), assuming l1 >= l2 >= l3 >= 0.

    Equivalent to absolute symmetric separability of the spectrum.
    """
    tol = resolve_tol(tol)
    if not (l1 >= l2 >= l3 >= -1e-10):
        raise ValueError("spectrum must satisfy l1 >= l2 >= l3 >= 0")
    scale = max(1.0, abs(l1))
    return bool(fastpath_margin_2d(l1, l2, l3) >= -tol * scale)


is_abs_sym_separable_2d = is_abs_sym_ppt_2d


def is_abs_sym_ppt_3d(spectrum, tol: float | None = None) -> bool:
    """Single-matrix test: the one matricization that decides d = 3."""
    values = spectrum_values(spectrum, 3)
    if values.min() < -1e-10:
        raise ValueError("spectrum must be non-negative")
    tol = resolve_tol(tol)
    eigs = np.linalg.eigvalsh(symmetric_matricization(values, FASTPATH_ASSIGNMENT_3D))
    return bool(eigs[0] >= -tol * max(1.0, values.max()))


def is_abs_sym_ppt_4d_conjectured(spectrum, tol: float | None = None) -> bool:
    """Conjectured four-matrix test for d = 4 (not proven minimal-sufficient)."""
    values = spectrum_values(spectrum, 4)
    if values.min() < -1e-10:
        raise ValueError("spectrum must be non-negative")
    tol = resolve_tol(tol)
    margin = matricization_margins(values, CONJECTURED_ASSIGNMENTS_4D)
    return bool(margin >= -tol * max(1.0, values.max()))


def full_rank_necessary(spectrum, tol: float | None = None) -> bool:
    """Cheap pre-filter: a trace-one spectrum with a zero eigenvalue fails.

    Returns True when the spectrum passes the filter (all eigenvalues
    strictly positive), False when absolute symmetric PPT is already ruled
    out.
    """
    values = spectrum_values(spectrum)
    tol = resolve_tol(tol)
    return bool(values.min() > tol * max(1.0, values.max()))


def min_witness_pairing(state_spectrum, witness_spectrum) -> float:
    """Minimal pairing sum: both sorted descending then paired oppositely."""
    lam = np.sort(np.asarray(getattr(state_spectrum, "values", state_spectrum), dtype=float))[::-1]
    mu = np.sort(np.asarray(getattr(witness_spectrum, "values", witness_spectrum), dtype=float))[::-1]
    if lam.size != mu.size:
        raise ValueError("spectra must have equal length")
    return float(lam[::-1] @ mu)


def concurrence_2qubit(rho: np.ndarray, tol: float | None = None) -> ConcurrenceResult:
    """Bosonic concurrence of a 3 x 3 symmetric two-qubit state.

    nu are the sorted square roots of the eigenvalues of rho S conj(rho) S,
    which are real and non-negative for valid states; tiny negative
    numerical eigenvalues (above -1e-10) are clipped before the square
    root.  The concurrence vanishes exactly on separable states.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError("expected a 3 x 3 compressed two-qubit state")
    tol = resolve_tol(tol)
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("state must be Hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ValueError("state must have unit trace")
    eigs = np.linalg.eigvalsh(rho)
    if eigs[0] < -tol * max(1.0, eigs[-1]):
        raise ValueError("state must be positive semidefinite")
    product = rho @ SPIN_FLIP_2Q @ rho.conj() @ SPIN_FLIP_2Q
    raw = np.linalg.eigvals(product)
    if np.abs(raw.imag).max() > 1e-9:
        raise ValueError("spin-flip spectrum unexpectedly complex")
    real = raw.real
    if real.min() < -1e-10:
        raise ValueError("spin-flip spectrum unexpectedly negative")
    nu = np.sort(np.sqrt(np.clip(real, 0.0, None)))[::-1]
    value = max(0.0, float(nu[0] - nu[1] - nu[2]))
    return ConcurrenceResult(value=value, nu=(float(nu[0]), float(nu[1]), float(nu[2])))
