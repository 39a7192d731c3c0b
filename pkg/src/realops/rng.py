"""Deterministic random stream derivation.

Every randomized routine in the package takes an explicit 64-bit seed and
derives independent substreams from (seed, *key).  Substreams are stable
across runs and independent of execution order, so multistart searches can
be reordered or parallelized without changing results.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 0xC0FFEE


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator for substream ``key`` of the master stream ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed) & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)
