"""Robustness index and capacity-threshold scan."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .attack import AttackStrategy, select_attack_set
from .cascade import CascadeResult, cascade_in_place
from .graph import GraphInputError, Network
from .loadmodel import EdgeLoadState, EdgeStatus, ModelParams, TransferMode, capacity, initial_loads
from .netgen import Topology
from .seeding import derive_seed


class AttackMode(str, enum.Enum):
    """How the edges of one attack set are applied.

    ``independent``: every edge is attacked on its own copy of the intact
    network. ``sequential``: edges are removed one after another on a single
    network, each followed by its cascade; already-failed targets score 0.
    """

    INDEPENDENT = "independent"
    SEQUENTIAL = "sequential"


@dataclass(frozen=True)
class GammaResult:
    gamma: float
    per_attack: tuple[tuple[int, int], ...]
    cascades: tuple[CascadeResult, ...] = field(default=(), repr=False)


@dataclass(frozen=True)
class ThresholdResult:
    """``epsilon_t`` is None when no all-zero tail exists inside the grid."""

    epsilon_t: float | None
    grid_step: float
    gamma_curve: tuple[tuple[float, float], ...]

    @property
    def found(self) -> bool:
        return self.epsilon_t is not None


def base_state(
    net: Network, loads: Sequence[float], epsilon: float, theta: float
) -> EdgeLoadState:
    """Intact-network state for precomputed ``loads`` at one epsilon."""
    if theta == 1.0:
        # same arithmetic as capacity(), without the per-edge call
        factor = 1.0 + epsilon
        caps = [factor * x for x in loads]
    else:
        caps = [capacity(x, epsilon, theta) for x in loads]
    return EdgeLoadState(
        list(loads), list(loads), caps, [EdgeStatus.ALIVE] * len(loads), net.degrees.tolist()
    )


def gamma(
    net: Network,
    params: ModelParams,
    attack_set: Sequence[int],
    *,
    mode: AttackMode | str = AttackMode.INDEPENDENT,
    transfer: TransferMode | str = TransferMode.CURRENT,
    trace: bool = False,
    base: EdgeLoadState | None = None,
) -> GammaResult:
    """Mean fraction of the other ``M - 1`` edges lost per attacked edge.

    The attacked edge itself is never counted as a victim.
    """
    if net.m < 2:
        raise GraphInputError(f"gamma needs at least 2 edges, got {net.m}")
    if not attack_set:
        raise GraphInputError("attack set is empty")
    mode = AttackMode(mode)
    if base is None:
        base = EdgeLoadState.initialize(net, params)

    per_attack = []
    cascades = []
    if mode is AttackMode.INDEPENDENT:
        for e in attack_set:
            res = cascade_in_place(net, base.copy(), e, transfer=transfer, trace=trace)
            per_attack.append((e, res.failed_edges))
            cascades.append(res)
    else:
        state = base.copy()
        for e in attack_set:
            if not state.is_alive(e):
                per_attack.append((e, 0))
                continue
            res = cascade_in_place(net, state, e, transfer=transfer, trace=trace)
            per_attack.append((e, res.failed_edges))
            cascades.append(res)

    total = sum(c for _, c in per_attack)
    return GammaResult(
        gamma=total / (len(attack_set) * (net.m - 1)),
        per_attack=tuple(per_attack),
        cascades=tuple(cascades),
    )


def any_failure(
    net: Network,
    base: EdgeLoadState,
    attack_set: Sequence[int],
    *,
    mode: AttackMode | str = AttackMode.INDEPENDENT,
    transfer: TransferMode | str = TransferMode.CURRENT,
) -> bool:
    """True iff :func:`gamma` would be non-zero, usually at a fraction of the cost."""
    if AttackMode(mode) is AttackMode.SEQUENTIAL:
        return gamma(net, None, attack_set, mode=mode, transfer=transfer, base=base).gamma > 0
    for e in attack_set:
        if cascade_in_place(net, base.copy(), e, transfer=transfer, max_rounds=1).failed_edges:
            return True
    return False


@dataclass(frozen=True)
class Instance:
    """One generated network together with its loads and attack set."""

    seed: int
    network: Network
    loads: list[float]
    attack_set: tuple[int, ...]


def make_instance(
    topology: Topology,
    delta: float,
    strategy: AttackStrategy | str,
    m_a: int,
    seed: int,
) -> Instance:
    # one stream per instance: network construction first, then tie-breaking
    rng = np.random.default_rng(seed)
    net = topology.build(rng)
    loads = initial_loads(net, delta)
    attack = select_attack_set(net, loads, strategy, m_a, rng)
    return Instance(seed, net, loads, attack)


def make_instances(
    topology: Topology,
    delta: float,
    strategy: AttackStrategy | str,
    m_a: int,
    repetitions: int,
    master_seed: int,
    seed_key: Sequence[int | str] = (),
) -> list[Instance]:
    return [
        make_instance(topology, delta, strategy, m_a, derive_seed(master_seed, *seed_key, rep))
        for rep in range(repetitions)
    ]


def gamma_grid(
    instances: Sequence[Instance],
    epsilons: Iterable[float],
    delta: float,
    theta: float = 1.0,
    *,
    mode: AttackMode | str = AttackMode.INDEPENDENT,
    transfer: TransferMode | str = TransferMode.CURRENT,
) -> list[list[float]]:
    """Per-epsilon list of per-instance gamma values (full evaluation)."""
    out = []
    for eps in epsilons:
        params = ModelParams(delta, eps, theta)
        row = []
        for inst in instances:
            base = base_state(inst.network, inst.loads, eps, theta)
            g = gamma(inst.network, params, inst.attack_set, mode=mode, transfer=transfer, base=base)
            row.append(g.gamma)
        out.append(row)
    return out


def _check_grid(grid: Sequence[float]) -> list[float]:
    grid = [float(x) for x in grid]
    if not grid:
        raise GraphInputError("epsilon grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise GraphInputError("epsilon grid must be strictly ascending")
    return grid


def _grid_step(grid: Sequence[float]) -> float:
    return round(grid[1] - grid[0], 12) if len(grid) > 1 else 0.0


def threshold_from_curve(grid: Sequence[float], gammas: Sequence[Sequence[float]]) -> float | None:
    """Smallest grid epsilon from which every instance has gamma exactly 0."""
    eps_t = None
    for eps, row in zip(reversed(grid), reversed(gammas)):
        if any(g != 0 for g in row):
            break
        eps_t = eps
    return eps_t


def find_epsilon_threshold(
    topology: Topology | Network,
    delta: float,
    strategy: AttackStrategy | str,
    m_a: int,
    repetitions: int,
    grid: Sequence[float],
    master_seed: int,
    *,
    theta: float = 1.0,
    seed_key: Sequence[int | str] = (),
    fast: bool = False,
    mode: AttackMode | str = AttackMode.INDEPENDENT,
    transfer: TransferMode | str = TransferMode.CURRENT,
) -> ThresholdResult:
    """Scan ``grid`` for the smallest capacity headroom with no cascade.

    Each repetition uses a network built from
    ``derive_seed(master_seed, *seed_key, rep)``; the same networks are used
    at every epsilon. The full scan evaluates gamma everywhere. ``fast``
    walks the grid downwards and stops at the first epsilon where any
    repetition cascades; its curve then only holds the all-zero tail.
    """
    grid = _check_grid(grid)
    if repetitions < 1:
        raise GraphInputError(f"repetitions must be >= 1, got {repetitions}")
    if isinstance(topology, Network):
        topology = Topology.fixed(topology, "fixed")
    instances = make_instances(topology, delta, strategy, m_a, repetitions, master_seed, seed_key)

    if not fast:
        rows = gamma_grid(instances, grid, delta, theta, mode=mode, transfer=transfer)
        curve = tuple((eps, float(np.mean(row))) for eps, row in zip(grid, rows))
        return ThresholdResult(threshold_from_curve(grid, rows), _grid_step(grid), curve)

    eps_t = None
    tail = []
    for eps in reversed(grid):
        if any(
            any_failure(
                inst.network, base_state(inst.network, inst.loads, eps, theta), inst.attack_set,
                mode=mode, transfer=transfer,
            )
            for inst in instances
        ):
            break
        eps_t = eps
        tail.append((eps, 0.0))
    return ThresholdResult(eps_t, _grid_step(grid), tuple(reversed(tail)))


def epsilon_grid(start: float = 0.0, stop: float = 0.8, step: float = 0.005) -> list[float]:
    """Inclusive grid ``start, start+step, ..., stop`` rounded to 12 places."""
    if step <= 0:
        raise GraphInputError(f"grid step must be positive, got {step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]
