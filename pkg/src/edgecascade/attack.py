"""High-load and low-load edge selection for attacks."""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .graph import GraphInputError, Network
from .netgen import make_rng


class AttackStrategy(str, enum.Enum):
    HLEA = "hlea"
    LLEA = "llea"


def select_attack_set(
    net: Network,
    loads: Sequence[float],
    strategy: AttackStrategy | str,
    m_a: int,
    seed: int | np.random.Generator,
) -> tuple[int, ...]:
    """Pick the ``m_a`` highest-load (HLEA) or lowest-load (LLEA) edges.

    Edges are ranked by initial load, then edge id. Edges strictly better
    than the cutoff load are always taken; when the cutoff value is shared
    by more edges than there are free slots, the slots are filled by a
    uniform draw without replacement from that tied block.
    """
    strategy = AttackStrategy(strategy)
    if len(loads) != net.m:
        raise GraphInputError(f"expected {net.m} loads, got {len(loads)}")
    if not 0 <= m_a <= net.m:
        raise GraphInputError(f"m_a must lie in [0, {net.m}], got {m_a}")
    if m_a == 0:
        return ()
    rng = make_rng(seed)

    sign = -1.0 if strategy is AttackStrategy.HLEA else 1.0
    ranked = sorted(range(net.m), key=lambda e: (sign * loads[e], e))
    cutoff = loads[ranked[m_a - 1]]
    head = [e for e in ranked if sign * loads[e] < sign * cutoff]
    tied = [e for e in ranked if loads[e] == cutoff]
    free = m_a - len(head)
    if free == len(tied):
        return tuple(head + tied)
    picked = rng.choice(len(tied), size=free, replace=False)
    return tuple(head + [tied[i] for i in picked])
