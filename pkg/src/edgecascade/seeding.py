"""Deterministic per-work-item seeds.

``derive_seed(master, *key)`` feeds the master seed and the key tuple into
``numpy.random.SeedSequence`` (whose entropy mixing is a documented hash)
and takes the first 64-bit word of its output. Strings in the key are
reduced to 64-bit integers with BLAKE2b first. Results depend only on the
key, never on execution order.
"""

from __future__ import annotations

import hashlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def _as_int(part: int | str) -> int:
    if isinstance(part, str):
        digest = hashlib.blake2b(part.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    if isinstance(part, (bool, float)) or int(part) < 0:
        raise TypeError(f"seed key parts must be non-negative ints or str, got {part!r}")
    return int(part)


def derive_seed(master: int, *key: int | str) -> int:
    entropy = [int(master) & SEED_MASK] + [_as_int(p) for p in key]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])
