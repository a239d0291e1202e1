"""Seeded generators with deterministic splitting.

Every random choice goes through `child_rng(seed, *keys)`, so a stream is
fixed by the top-level seed plus a path of keys (labels, indices, elements)
and does not depend on evaluation order or worker count.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key(k) -> int:
    if isinstance(k, (int, np.integer)) and k >= 0:
        return int(k)
    return zlib.crc32(repr(k).encode())


def child_rng(seed: int, *keys) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([_key(seed), *(_key(k) for k in keys)]))
