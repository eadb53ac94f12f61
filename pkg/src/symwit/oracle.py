"""Brute-force oracles and randomized searches that validate the other modules.

Everything here is deliberately independent of the code paths it checks:
permutation minima by factorial enumeration, PPT scans by explicit Haar
conjugation, negative-eigenvalue searches by direct eigendecomposition of
sampled witnesses.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .rng import as_generator
from .symspace import (
    embed,
    partial_transpose,
    projector_sym,
    require_hermitian,
    sym_conjugated_pt_compressed_from_vectors,
    sym_dim,
)
from .tolerances import resolve_tol

VECTOR_CLASSES = ("complex_full", "real_full", "complex_sym", "real_sym")

# Fixed batch size so that resumed runs consume the RNG stream identically.
SEARCH_BATCH = 4096

# Eigenvalues below -NEG_COUNT_TOL * spectral radius count as negative;
# keeps the antisymmetric kernel zeros out of the counts.
NEG_COUNT_TOL = 1e-8


@dataclass(frozen=True)
class PsdCheck:
    ok: bool
    min_eigenvalue: float


def psd_check(mat: np.ndarray, tol: float | None = None) -> PsdCheck:
    """Shared PSD verdict: min eigenvalue >= -tol * max(1, spectral radius)."""
    mat = require_hermitian(np.asarray(mat), name="matrix")
    tol = resolve_tol(tol)
    eigs = np.linalg.eigvalsh(mat)
    scale = max(1.0, float(np.abs(eigs).max(initial=0.0)))
    return PsdCheck(ok=bool(eigs[0] >= -tol * scale), min_eigenvalue=float(eigs[0]))


def brute_min_permutation(lam, mu) -> float:
    """Exact minimum of the pairing sum over all permutations (n <= 8)."""
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if lam.size != mu.size:
        raise ValueError("spectra must have equal length")
    if lam.size > 8:
        raise ValueError("factorial enumeration capped at n = 8")
    return min(float(np.dot(lam[list(perm)], mu))
               for perm in itertools.permutations(range(lam.size)))


@dataclass(frozen=True)
class PptScanReport:
    """Outcome of Haar-conjugation scanning of one spectrum."""

    d: int
    trials: int
    seed: int
    min_eigenvalue: float
    violating_unitary: np.ndarray | None


def random_unitary_ppt_scan(lam, d: int, trials: int, seed: int) -> PptScanReport:
    """Min eigenvalue of the conjugated partial transpose over sampled bases.

    Conjugates diag(lam) (canonical symmetric basis) by Haar unitaries on
    the symmetric subspace and records the most negative eigenvalue seen,
    with the first unitary achieving a violation.
    """
    lam = np.asarray(lam, dtype=float)
    m = sym_dim(d)
    if lam.size != m:
        raise ValueError(f"expected spectrum of length {m}")
    if np.any(np.diff(lam) > 1e-12) or lam.min() < -1e-10:
        raise ValueError("expected a descending non-negative state spectrum")
    rng = as_generator(seed)
    proj = projector_sym(d)
    best = np.inf
    violator = None
    for _ in range(trials):
        z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
        q, r = np.linalg.qr(z)
        q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
        rho_full = embed((q * lam) @ q.conj().T)
        low = float(np.linalg.eigvalsh(proj @ partial_transpose(rho_full) @ proj)[0])
        if low < best:
            best = low
            if low < -1e-8:
                violator = q
    return PptScanReport(d=d, trials=trials, seed=int(seed), min_eigenvalue=best,
                         violating_unitary=violator)


@dataclass(frozen=True)
class SearchReport:
    """Seeded randomized-search outcome for negative-eigenvalue counts.

    ``best_count`` is an observed maximum, a lower bound on the true one.
    ``histogram`` maps count -> number of trials.  ``rng_state`` makes the
    run resumable mid-stream.
    """

    d: int
    vector_class: str
    trials: int
    seed: int
    best_count: int
    best_trial: int
    best_vector: np.ndarray | None
    histogram: dict = field(repr=False)
    rng_state: dict = field(repr=False, default=None)
    workers: int = 1

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": self.d,
                "vector_class": self.vector_class,
                "trials": self.trials,
                "seed": self.seed,
                "best_count": self.best_count,
                "best_trial": self.best_trial,
                "best_vector": None if self.best_vector is None else
                [[float(z.real), float(z.imag)] for z in self.best_vector],
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
                "rng_state": self.rng_state,
                "workers": self.workers,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SearchReport":
        data = json.loads(text)
        vec = data["best_vector"]
        if vec is not None:
            arr = np.asarray(vec, dtype=float)
            vec = arr[:, 0] + 1j * arr[:, 1]
        return cls(
            d=int(data["d"]),
            vector_class=data["vector_class"],
            trials=int(data["trials"]),
            seed=int(data["seed"]),
            best_count=int(data["best_count"]),
            best_trial=int(data["best_trial"]),
            best_vector=vec,
            histogram={int(k): int(v) for k, v in data["histogram"].items()},
            rng_state=data["rng_state"],
            workers=int(data.get("workers", 1)),
        )

    def histogram_csv(self) -> str:
        lines = ["count,trials"]
        for count in sorted(self.histogram):
            lines.append(f"{count},{self.histogram[count]}")
        return "\n".join(lines) + "\n"


def _sample_vectors(rng: np.random.Generator, n: int, d: int, vector_class: str) -> np.ndarray:
    # each sample consumes a contiguous stretch of the stream so that batch
    # boundaries (and hence checkpoints) do not change the draws
    d2 = d * d
    if vector_class.startswith("complex"):
        z = rng.standard_normal((n, d2, 2))
        v = z[..., 0] + 1j * z[..., 1]
    else:
        v = rng.standard_normal((n, d2)).astype(complex)
    if vector_class.endswith("sym"):
        mats = v.reshape(n, d, d)
        v = ((mats + mats.transpose(0, 2, 1)) / 2.0).reshape(n, d2)
    return v


def search_neg_eigs(d: int, vector_class: str, trials: int, seed: int,
                    resume: SearchReport | None = None) -> SearchReport:
    """Track the maximal negative-eigenvalue count of sampled witnesses.

    Samples vectors of the requested class, forms the compressed conjugated
    partial transpose of each rank-one projector, and counts eigenvalues
    below -1e-8 * spectral radius (the antisymmetric kernel contributes
    exact zeros and is excluded by compression anyway).  Deterministic per
    seed; pass a previous report as ``resume`` to continue its stream.
    """
    if vector_class not in VECTOR_CLASSES:
        raise ValueError(f"vector_class must be one of {VECTOR_CLASSES}")
    if d > 8:
        raise ValueError("search supports d <= 8")
    if resume is not None:
        if (resume.d, resume.vector_class, resume.seed) != (d, vector_class, int(seed)):
            raise ValueError("resume checkpoint does not match the requested search")
        rng = np.random.default_rng()
        rng.bit_generator.state = resume.rng_state
        done = resume.trials
        best = resume.best_count
        best_trial = resume.best_trial
        best_vector = resume.best_vector
        histogram = dict(resume.histogram)
    else:
        rng = as_generator(int(seed))
        done = 0
        best = -1
        best_trial = -1
        best_vector = None
        histogram = {}
    total = done + trials
    while done < total:
        k = min(SEARCH_BATCH, total - done)
        vectors = _sample_vectors(rng, k, d, vector_class)
        compressed = sym_conjugated_pt_compressed_from_vectors(vectors)
        eigs = np.linalg.eigvalsh(compressed)
        scale = np.abs(eigs).max(axis=1)
        counts = (eigs < -NEG_COUNT_TOL * scale[:, None]).sum(axis=1)
        for count in np.unique(counts):
            histogram[int(count)] = histogram.get(int(count), 0) + int((counts == count).sum())
        top = int(counts.max())
        if top > best:
            best = top
            local = int(np.argmax(counts == top))
            best_trial = done + local
            best_vector = vectors[local].copy()
        done += k
    return SearchReport(d=d, vector_class=vector_class, trials=total, seed=int(seed),
                        best_count=best, best_trial=best_trial, best_vector=best_vector,
                        histogram=histogram, rng_state=rng.bit_generator.state)


def merge_search_reports(reports, seed: int, workers: int) -> SearchReport:
    """Combine per-worker partial reports into one sweep report.

    Best counts take the earliest worker on ties; trial indices are offset by
    the preceding workers' trial totals, so the merged report is reproducible
    for the same worker count only.  The merged report is not resumable.
    """
    if not reports:
        raise ValueError("no reports to merge")
    head = reports[0]
    histogram: dict[int, int] = {}
    best, best_trial, best_vector = -1, -1, None
    offset = 0
    for report in reports:
        if (report.d, report.vector_class) != (head.d, head.vector_class):
            raise ValueError("reports describe different searches")
        for count, hits in report.histogram.items():
            histogram[count] = histogram.get(count, 0) + hits
        if report.best_count > best:
            best = report.best_count
            best_trial = offset + report.best_trial
            best_vector = report.best_vector
        offset += report.trials
    return SearchReport(d=head.d, vector_class=head.vector_class, trials=offset,
                        seed=int(seed), best_count=best, best_trial=best_trial,
                        best_vector=best_vector, histogram=histogram,
                        rng_state=None, workers=workers)


def worker_seed(root_seed: int, worker: int) -> int:
    """Derived integer seed for one worker of a split sweep."""
    return int(np.random.SeedSequence([int(root_seed), int(worker)]).generate_state(1)[0])


def search_neg_eigs_parallel(d: int, vector_class: str, trials: int, seed: int,
                             workers: int) -> SearchReport:
    """Split a sweep across per-worker derived seeds and merge the results.

    Deterministic per (seed, workers) pair.  Workers run sequentially here;
    the split/merge contract is what external parallel drivers must
    reproduce.
    """
    shares = [trials // workers + (1 if i < trials % workers else 0)
              for i in range(workers)]
    reports = [search_neg_eigs(d, vector_class, share, worker_seed(seed, i))
               for i, share in enumerate(shares) if share > 0]
    return merge_search_reports(reports, seed=seed, workers=workers)
