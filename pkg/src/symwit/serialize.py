"""JSON codecs for vectors, operators, and spectra.

File schema for vectors and matrices: ``{"d": int, "entries": [[re, im], ...]}``
with entries row-major.  A length of d^2 entries is a vector on
C^d (x) C^d, a length of d^4 entries is a full d^2 x d^2 operator, and a
length of (d(d+1)/2)^2 entries is a compressed operator.  Spectra travel as
comma-separated descending reals on the CLI.
"""

from __future__ import annotations

import json

import numpy as np

from .symspace import sym_dim


def complex_to_pairs(a: np.ndarray) -> list:
    """Flatten row-major into [re, im] pairs."""
    flat = np.asarray(a, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def pairs_to_complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("entries must be a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def dump_vector(v: np.ndarray, d: int) -> str:
    return json.dumps({"d": int(d), "entries": complex_to_pairs(v)})


def dump_operator(a: np.ndarray, d: int) -> str:
    return json.dumps({"d": int(d), "entries": complex_to_pairs(a)})


def _load_entries(data: dict) -> tuple[int, np.ndarray]:
    d = int(data["d"])
    return d, pairs_to_complex(data["entries"])


def load_vector(text: str) -> tuple[int, np.ndarray]:
    """Parse a vector file; returns (d, length-d^2 complex vector)."""
    d, flat = _load_entries(json.loads(text))
    if flat.size != d * d:
        raise ValueError(f"expected {d * d} entries for a vector, got {flat.size}")
    return d, flat


def load_operator(text: str) -> tuple[int, np.ndarray]:
    """Parse an operator file; returns (d, matrix) in full or compressed form."""
    d, flat = _load_entries(json.loads(text))
    n_full = d * d
    m = sym_dim(d)
    if flat.size == n_full * n_full:
        return d, flat.reshape(n_full, n_full)
    if flat.size == m * m:
        return d, flat.reshape(m, m)
    raise ValueError(
        f"expected {n_full * n_full} (full) or {m * m} (compressed) entries, got {flat.size}"
    )


def parse_spectrum(text: str) -> np.ndarray:
    """Parse a comma-separated descending real spectrum."""
    try:
        values = np.array([float(t) for t in text.split(",") if t.strip() != ""])
    except ValueError as exc:
        raise ValueError(f"could not parse spectrum {text!r}") from exc
    if values.size == 0:
        raise ValueError("empty spectrum")
    if np.any(np.diff(values) > 1e-12):
        raise ValueError("spectrum must be sorted in non-increasing order")
    return values
