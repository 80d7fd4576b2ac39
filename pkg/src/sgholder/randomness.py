"""Deterministic random streams and the canonical sample ensemble.

Streams use the counter-based Philox generator keyed by (seed, sample_index)
with counter 0, so sample i's data is reproducible independently of how many
samples ran before it; ports can reproduce the streams from this recipe.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .semigroup import SemigroupModel, random_element


def philox_stream(seed: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[int(seed), int(index)]))


def sample_functions(model: SemigroupModel, seed: int, count: int, band=None,
                     support_radius: int = 1) -> list:
    """The canonical ensemble: complex-normal spectral coefficients, kernel
    zeroed, sup-normalized; one Philox stream per sample index."""
    return [
        random_element(model, philox_stream(seed, i), band=band, support_radius=support_radius)
        for i in range(count)
    ]


def thread_budget() -> int:
    raw = os.environ.get("SGHOLDER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Order-preserving map over independent work items, capped by SGHOLDER_THREADS."""
    items = list(items)
    n = thread_budget()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
