"""Seed handling: one seedable, splittable generator convention.

Every randomized operation accepts either an integer seed or a ready
``numpy.random.Generator``.  Multi-worker experiments derive independent
per-worker streams with :func:`spawn_generators`; single-worker runs are the
reference behavior and are bitwise reproducible per seed.
"""

from __future__ import annotations

import numpy as np

SeedLike = "int | np.random.Generator | None"


def as_generator(seed) -> np.random.Generator:
    """Coerce an int seed, ``None`` or a Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_generators(seed: int, n_workers: int) -> list[np.random.Generator]:
    """Derive ``n_workers`` independent generators from one root seed."""
    if n_workers < 1:
        raise ValueError("n_workers must be >= 1")
    seq = np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in seq.spawn(n_workers)]
