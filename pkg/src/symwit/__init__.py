"""Spectral tests for bosonic two-qudit states and symmetric entanglement witnesses.

Modules:

* ``symspace``: symmetric-subspace linear algebra (projector, embeddings,
  partial transpose, vector matricization, Haar sampling).
* ``matricize``: triangular/symmetric matricizations of spectra, their
  adjoints, and assignment enumeration/reduction.
* ``abssep``: absolute symmetric PPT/separability verdicts from spectra and
  the bosonic two-qubit concurrence.
* ``witness``: symmetric entanglement witness constructions, eigenvalue
  predictions, and negative-eigenvalue bounds.
* ``sdp``: PSD-cone feasibility contract plus the spectrum programs.
* ``oracle``: independent brute-force and randomized-search validators.
* ``cli``: command-line interface.
"""

__version__ = "0.1.0"

from . import abssep, fixtures, matricize, oracle, sdp, symspace, witness  # noqa: F401
from .abssep import (  # noqa: F401
    AbsPptVerdict,
    ConcurrenceResult,
    Spectrum,
    concurrence_2qubit,
    is_abs_sym_ppt,
    is_abs_sym_ppt_2d,
    is_abs_sym_ppt_3d,
    is_abs_sym_ppt_4d_conjectured,
    is_abs_sym_separable_2d,
    min_witness_pairing,
)
from .matricize import Assignment, enumerate_assignments, reduced_assignments  # noqa: F401
from .witness import (  # noqa: F401
    WitnessCandidate,
    check_sew_sampled,
    count_negative_eigs,
    max_neg_bounds,
    npt_subspace,
    predicted_eigs_real_sym,
    witness_from_vector,
)
