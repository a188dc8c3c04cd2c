"""Edge loads, capacities and proportional load redistribution.

Loads are ``(k_i * k_j) ** delta`` with degrees taken from the intact
network and never recomputed. A failed edge hands its load to the alive
edges sharing one of its endpoints, in proportion to their own
``(k_i * k_a) ** delta``. Because that weight is exactly the neighbor's
initial load, shares are computed from the frozen ``initial_load`` list.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

from .graph import Network


class ModelError(ValueError):
    pass


class EdgeStatus(enum.IntEnum):
    ALIVE = 0
    ATTACKED = 1
    OVERLOADED = 2


class TransferMode(str, enum.Enum):
    """Which load a cascading (non-initial) failure passes on."""

    CURRENT = "current"
    INITIAL = "initial"


@dataclass(frozen=True)
class ModelParams:
    delta: float
    epsilon: float
    theta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ModelError(f"delta must be > 0, got {self.delta}")
        # epsilon = 0 is allowed as a boundary case
        if not self.epsilon >= 0:
            raise ModelError(f"epsilon must be >= 0, got {self.epsilon}")
        if not self.theta > 0:
            raise ModelError(f"theta must be > 0, got {self.theta}")


def initial_load(net: Network, e: int, delta: float) -> float:
    net._check_edge(e)
    u, v = net.edges[e]
    ku, kv = len(net.adjacency[u]), len(net.adjacency[v])
    if ku == 0 or kv == 0:
        raise AssertionError(f"edge {e} has an endpoint of degree 0")
    return float(ku * kv) ** delta


def initial_loads(net: Network, delta: float) -> list[float]:
    return [initial_load(net, e, delta) for e in range(net.m)]


def capacity(load: float, epsilon: float, theta: float = 1.0) -> float:
    """``load + epsilon * load**theta``; the linear case uses ``(1+epsilon)*load``."""
    if not load > 0:
        raise ModelError(f"load must be positive, got {load}")
    if theta == 1.0:
        return (1.0 + epsilon) * load
    return load + epsilon * load**theta


@dataclass
class EdgeLoadState:
    """Mutable per-cascade load bookkeeping, indexed by edge id.

    Plain lists rather than arrays: the cascade touches single elements in
    a tight loop.
    """

    initial_load: list[float]
    current_load: list[float]
    capacity: list[float]
    status: list[EdgeStatus]
    # per-node count of alive incident edges; None until a cascade fills it in
    alive_degree: list[int] | None = None

    @classmethod
    def initialize(cls, net: Network, params: ModelParams) -> "EdgeLoadState":
        loads = initial_loads(net, params.delta)
        caps = [capacity(x, params.epsilon, params.theta) for x in loads]
        return cls(loads, list(loads), caps, [EdgeStatus.ALIVE] * net.m, net.degrees.tolist())

    def copy(self) -> "EdgeLoadState":
        # initial_load and capacity are never written after initialization
        return EdgeLoadState(
            self.initial_load,
            list(self.current_load),
            self.capacity,
            list(self.status),
            None if self.alive_degree is None else list(self.alive_degree),
        )

    def is_alive(self, e: int) -> bool:
        return self.status[e] is EdgeStatus.ALIVE

    def alive_load(self) -> float:
        return math.fsum(
            x for x, s in zip(self.current_load, self.status) if s is EdgeStatus.ALIVE
        )


def redistribution_shares(net: Network, state: EdgeLoadState, failed: int) -> dict[int, float]:
    """Fraction of ``failed``'s load each alive neighbor edge receives.

    The denominator runs over alive edges only, in ascending edge id, so the
    shares always sum to one. Returns an empty dict when no alive neighbor
    remains; the load is then dropped.
    """
    status = state.status
    weights = state.initial_load
    nbrs = [f for f in net.edge_adjacency[failed] if status[f] is EdgeStatus.ALIVE]
    if not nbrs:
        return {}
    total = 0.0
    for f in nbrs:
        total += weights[f]
    return {f: weights[f] / total for f in nbrs}


def residual_capacity_shares(
    net: Network, state: EdgeLoadState, failed: int
) -> dict[int, float]:
    """Shares from spare capacity ``C - L`` of alive neighbors.

    Agrees with :func:`redistribution_shares` when ``theta == 1`` and
    ``epsilon > 0``, since then ``C - L = epsilon * L``.
    """
    nbrs = [f for f in net.edge_adjacency[failed] if state.is_alive(f)]
    if not nbrs:
        return {}
    spare = {f: state.capacity[f] - state.initial_load[f] for f in nbrs}
    total = math.fsum(spare.values())
    return {f: s / total for f, s in spare.items()}


def apply_redistribution(
    state: EdgeLoadState,
    failed: int,
    shares: Mapping[int, float],
    transferred: float,
    failure: EdgeStatus = EdgeStatus.OVERLOADED,
) -> float:
    """Move ``transferred`` from ``failed`` onto its neighbors in place.

    Returns the load dropped, which is ``transferred`` when ``shares`` is
    empty and 0 otherwise.
    """
    if failure is EdgeStatus.ALIVE:
        raise ValueError("failure status cannot be ALIVE")
    cur = state.current_load
    status = state.status
    for f, share in shares.items():
        if status[f] is not EdgeStatus.ALIVE:
            raise AssertionError(f"share assigned to non-alive edge {f}")
        cur[f] += transferred * share
    cur[failed] = 0.0
    status[failed] = failure
    return transferred if not shares else 0.0
