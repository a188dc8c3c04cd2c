"""Synchronous-round cascade triggered by removing a single edge."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import GraphInputError, Network
from .loadmodel import (
    EdgeLoadState,
    EdgeStatus,
    ModelParams,
    TransferMode,
    apply_redistribution,
    redistribution_shares,
)


@dataclass(frozen=True)
class RoundTrace:
    """Accounting snapshot taken after a round's redistribution.

    Round 0 is the attack itself. ``held_load`` is what the round's failing
    edges carried when they were marked.
    """

    round: int
    failed: tuple[int, ...]
    dropped: float
    held_load: float
    alive_load: float
    dropped_total: float

    def format(self) -> str:
        ids = ",".join(map(str, self.failed))
        return f"round={self.round} failed=[{ids}] dropped={self.dropped:.6g}"


@dataclass(frozen=True)
class CascadeResult:
    attacked: int
    failed_edges: int
    failed: tuple[int, ...]
    rounds: int
    dropped_load: float
    removed_isolated_nodes: int
    trace: tuple[RoundTrace, ...] = field(default=(), repr=False)
    # sum of all initial loads; only filled in when tracing
    total_initial_load: float = field(default=math.nan, repr=False)


def run_cascade(
    net: Network,
    params: ModelParams,
    attacked: int,
    *,
    transfer: TransferMode | str = TransferMode.CURRENT,
    trace: bool = False,
    base: EdgeLoadState | None = None,
    max_rounds: int | None = None,
) -> CascadeResult:
    """Remove ``attacked`` from the intact network and run to a fixpoint.

    Each round marks every alive edge whose load strictly exceeds its
    capacity, then redistributes the marked edges' loads in ascending id
    order to neighbors that are still alive. Nodes left with no alive edge
    are counted as removed after every round. ``base`` is an initialized
    state to copy instead of recomputing loads; it is not modified.
    ``max_rounds`` truncates the cascade, which is enough to decide whether
    any edge fails at all.
    """
    state = base.copy() if base is not None else EdgeLoadState.initialize(net, params)
    return cascade_in_place(
        net, state, attacked, transfer=transfer, trace=trace, max_rounds=max_rounds
    )


def cascade_in_place(
    net: Network,
    state: EdgeLoadState,
    attacked: int,
    *,
    transfer: TransferMode | str = TransferMode.CURRENT,
    trace: bool = False,
    max_rounds: int | None = None,
) -> CascadeResult:
    """Like :func:`run_cascade` but on a caller-owned, possibly damaged state."""
    net._check_edge(attacked)
    if not state.is_alive(attacked):
        raise GraphInputError(f"edge {attacked} is not alive")
    transfer = TransferMode(transfer)
    cur, cap, status = state.current_load, state.capacity, state.status
    if state.alive_degree is None:
        state.alive_degree = [
            sum(1 for f in inc if status[f] is EdgeStatus.ALIVE) for inc in net.incident_edges
        ]
    alive_deg = state.alive_degree
    edges = net.edges
    total_initial = math.fsum(state.initial_load) if trace else math.nan
    rounds_log: list[RoundTrace] = []
    removed = 0
    dropped_total = 0.0
    failed_order: list[int] = []

    def detach(e: int) -> int:
        gone = 0
        for x in edges[e]:
            alive_deg[x] -= 1
            if alive_deg[x] == 0:
                gone += 1
        return gone

    def amount(e: int) -> float:
        return cur[e] if transfer is TransferMode.CURRENT else state.initial_load[e]

    held = cur[attacked]
    status[attacked] = EdgeStatus.ATTACKED
    removed += detach(attacked)
    shares = redistribution_shares(net, state, attacked)
    dropped = apply_redistribution(state, attacked, shares, amount(attacked), EdgeStatus.ATTACKED)
    dropped_total += dropped
    candidates = set(shares)
    if trace:
        rounds_log.append(
            RoundTrace(0, (attacked,), dropped, held, state.alive_load(), dropped_total)
        )

    rounds = 0
    while max_rounds is None or rounds < max_rounds:
        failing = sorted(e for e in candidates if status[e] is EdgeStatus.ALIVE and cur[e] > cap[e])
        if not failing:
            break
        rounds += 1
        held = 0.0
        for e in failing:
            status[e] = EdgeStatus.OVERLOADED
            removed += detach(e)
            held += cur[e]
        candidates = set()
        dropped = 0.0
        for e in failing:
            shares = redistribution_shares(net, state, e)
            dropped += apply_redistribution(state, e, shares, amount(e))
            candidates.update(shares)
        dropped_total += dropped
        failed_order.extend(failing)
        if trace:
            rounds_log.append(
                RoundTrace(
                    rounds, tuple(failing), dropped, held, state.alive_load(), dropped_total
                )
            )

    result = CascadeResult(
        attacked=attacked,
        failed_edges=len(failed_order),
        failed=tuple(failed_order),
        rounds=rounds,
        dropped_load=dropped_total,
        removed_isolated_nodes=removed,
        trace=tuple(rounds_log),
        total_initial_load=total_initial,
    )
    return result
