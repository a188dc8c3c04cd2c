"""Seeded Watts-Strogatz and Barabasi-Albert generators.

Both generators draw from ``numpy.random.Generator`` backed by PCG64
(``numpy.random.default_rng(seed)``). The bit generator and the order of
draws below are part of the reproducibility contract: changing either
changes every frozen fixture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphInputError, Network, load_edge_list

# Redraws allowed per rewired edge before it is left in place.
MAX_REWIRE_ATTEMPTS = 100


@dataclass(frozen=True)
class WsParams:
    n: int = 1000
    k: int = 4
    p: float = 0.1

    def __post_init__(self):
        if self.k < 2 or self.k % 2:
            raise GraphInputError(f"WS k must be an even integer >= 2, got {self.k}")
        if self.k >= self.n:
            raise GraphInputError(f"WS k must be < n, got k={self.k}, n={self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise GraphInputError(f"WS p must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class BaParams:
    m0: int = 2
    m: int = 2
    n: int = 1000

    def __post_init__(self):
        if not 1 <= self.m <= self.m0 <= self.n:
            raise GraphInputError(
                f"BA requires 1 <= m <= m0 <= n, got m={self.m}, m0={self.m0}, n={self.n}"
            )


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


def generate_ws(params: WsParams, seed: int | np.random.Generator) -> Network:
    """Ring lattice of ``k/2`` neighbors per side, then rewire.

    Lattice edges are visited by offset ``j = 1..k/2`` and then by source
    node ``u``; edge ``(u, u+j mod n)`` keeps ``u`` and, with probability
    ``p``, gets a new far end drawn uniformly from the other ``n-1`` nodes.
    Draws that would duplicate an existing edge are repeated up to
    ``MAX_REWIRE_ATTEMPTS`` times, after which the edge stays unrewired.
    """
    rng = make_rng(seed)
    n, half = params.n, params.k // 2
    order = [(u, (u + j) % n) for j in range(1, half + 1) for u in range(n)]
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, v in order:
        nbrs[u].add(v)
        nbrs[v].add(u)

    edges = list(order)
    for idx, (u, v) in enumerate(order):
        if rng.random() >= params.p:
            continue
        for _ in range(MAX_REWIRE_ATTEMPTS):
            # uniform over nodes other than u
            w = int(rng.integers(n - 1))
            if w >= u:
                w += 1
            if w not in nbrs[u]:
                nbrs[u].discard(v)
                nbrs[v].discard(u)
                nbrs[u].add(w)
                nbrs[w].add(u)
                edges[idx] = (u, w)
                break
    return Network.from_edges(n, edges)


def generate_ba(params: BaParams, seed: int | np.random.Generator) -> Network:
    """Complete graph on ``m0`` seed nodes, then preferential attachment.

    Each arriving node picks ``m`` distinct targets by repeated draws from
    the degree-weighted stub list, discarding repeats. When every existing
    degree is zero (only possible for ``m0 == 1``) the target is uniform.
    """
    rng = make_rng(seed)
    m0, m, n = params.m0, params.m, params.n
    edges = [(i, j) for i in range(m0) for j in range(i + 1, m0)]
    stubs: list[int] = []
    for u, v in edges:
        stubs.extend((u, v))

    for new in range(m0, n):
        targets: list[int] = []
        chosen: set[int] = set()
        while len(targets) < m:
            if stubs:
                t = stubs[int(rng.integers(len(stubs)))]
            else:
                t = int(rng.integers(new))
            if t not in chosen:
                chosen.add(t)
                targets.append(t)
        for t in targets:
            edges.append((t, new))
            stubs.extend((t, new))
    return Network.from_edges(n, edges)


def expected_ba_edges(params: BaParams) -> int:
    return params.m0 * (params.m0 - 1) // 2 + (params.n - params.m0) * params.m


@dataclass(frozen=True)
class Topology:
    """A recipe for the networks of one experiment row.

    ``ws`` and ``ba`` topologies build a fresh network per seed; ``fixed``
    topologies (including ones read from an edge-list file) ignore it.
    """

    label: str
    kind: str
    ws_params: WsParams | None = None
    ba_params: BaParams | None = None
    network: Network | None = None

    @classmethod
    def ws(cls, params: WsParams = WsParams(), label: str = "ws") -> "Topology":
        return cls(label, "ws", ws_params=params)

    @classmethod
    def ba(cls, params: BaParams = BaParams(), label: str = "ba") -> "Topology":
        return cls(label, "ba", ba_params=params)

    @classmethod
    def fixed(cls, network: Network, label: str) -> "Topology":
        return cls(label, "fixed", network=network)

    @classmethod
    def from_file(cls, path: str, label: str | None = None) -> "Topology":
        return cls.fixed(load_edge_list(path), label or f"file:{path}")

    @property
    def is_random(self) -> bool:
        return self.kind in ("ws", "ba")

    def build(self, seed: int | np.random.Generator) -> Network:
        if self.kind == "ws":
            return generate_ws(self.ws_params, seed)
        if self.kind == "ba":
            return generate_ba(self.ba_params, seed)
        return self.network
