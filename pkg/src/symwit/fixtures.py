"""Named fixture operators and vectors used as regression anchors.

Each fixture ships both as a module constant and as a JSON file under
``symwit/data`` (complex entries as [re, im] pairs) so external tools can
load them through the documented file format.
"""

from __future__ import annotations

from importlib import resources

import numpy as np

from . import serialize

# 2-qubit symmetric entanglement witness with spectrum {2, 2, 0, -2} that is
# NOT decomposable: its product-vector form equals
# 8 (Re v1 Im v2 - Im v1 Re v2)^2 >= 0, yet no PSD, symmetric-supported
# splitting W = P X^PT P + Y exists.
WITNESS_2Q_NOT_DECOMPOSABLE = np.array(
    [
        [0.0, 0.0, 0.0, -2.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0],
        [-2.0, 0.0, 0.0, 0.0],
    ]
)
WITNESS_2Q_NOT_DECOMPOSABLE.setflags(write=False)

# Complex symmetric d=3 vector whose witness has three eigenvalues at -1,
# exceeding the floor(d^2/4) = 2 cap that binds real symmetric vectors.
VEC3_COMPLEX_SYM_THREE_NEG = np.array([0, 1, 1j, 1, 0, 1j, 1j, 1j, 1], dtype=complex)
VEC3_COMPLEX_SYM_THREE_NEG.setflags(write=False)

# Real but non-symmetric d=3 vector whose witness has three eigenvalues at -1/2.
VEC3_REAL_FULL_THREE_NEG = np.array([0, 0, 1, 1, 0, 0, 0, 1, 0], dtype=float)
VEC3_REAL_FULL_THREE_NEG.setflags(write=False)

# PSD, symmetric-supported 16 x 16 source whose conjugated partial transpose
# has the maximal d(d-1)/2 = 6 negative eigenvalues at d = 4.
_MAX_NEG_ROWS = """
3 0 -1 0 0 -2 0 -1 -1 0 0 0 0 -1 0 0
0 7 0 0 7 0 1 0 0 1 0 3 0 0 3 0
-1 0 7 0 0 5 0 0 7 0 1 0 0 0 0 -1
0 0 0 9 0 0 6 0 0 6 0 0 9 0 0 0
0 7 0 0 7 0 1 0 0 1 0 3 0 0 3 0
-2 0 5 0 0 6 0 1 5 0 0 0 0 1 0 0
0 1 0 6 1 0 7 0 0 7 0 1 6 0 1 0
-1 0 0 0 0 1 0 7 0 0 5 0 0 7 0 -1
-1 0 7 0 0 5 0 0 7 0 1 0 0 0 0 -1
0 1 0 6 1 0 7 0 0 7 0 1 6 0 1 0
0 0 1 0 0 0 0 5 1 0 6 0 0 5 0 -2
0 3 0 0 3 0 1 0 0 1 0 7 0 0 7 0
0 0 0 9 0 0 6 0 0 6 0 0 9 0 0 0
-1 0 0 0 0 1 0 7 0 0 5 0 0 7 0 -1
0 3 0 0 3 0 1 0 0 1 0 7 0 0 7 0
0 0 -1 0 0 0 0 -1 -1 0 -2 0 0 -1 0 3
"""
MAX_NEG_SOURCE_D4 = np.array(
    [[float(tok) for tok in line.split()] for line in _MAX_NEG_ROWS.strip().splitlines()]
)
MAX_NEG_SOURCE_D4.setflags(write=False)

DATA_FILES = {
    "witness_2q_not_decomposable.json": (WITNESS_2Q_NOT_DECOMPOSABLE, 2),
    "d3_complex_sym.json": (VEC3_COMPLEX_SYM_THREE_NEG, 3),
    "d3_real_full.json": (VEC3_REAL_FULL_THREE_NEG, 3),
    "max_neg_source_d4.json": (MAX_NEG_SOURCE_D4, 4),
}


def data_text(name: str) -> str:
    """Raw JSON text of a packaged fixture file."""
    return resources.files("symwit.data").joinpath(name).read_text()


def load_fixture(name: str) -> tuple[int, np.ndarray]:
    """Load a packaged fixture by file name; vectors stay 1-d."""
    text = data_text(name)
    expected, _ = DATA_FILES[name]
    if expected.ndim == 1:
        return serialize.load_vector(text)
    return serialize.load_operator(text)
