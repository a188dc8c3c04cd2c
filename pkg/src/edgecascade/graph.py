"""Immutable simple undirected graph with stable edge ids.

Nodes are ``0..n-1`` and edges are numbered ``0..m-1`` in construction
order. Failures during a cascade never mutate a :class:`Network`; callers
carry their own alive-masks.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence, TextIO

import numpy as np


class GraphInputError(ValueError):
    """Raised for out-of-range ids or invalid construction arguments."""


class EdgeListFormatError(ValueError):
    """Raised when an edge-list file cannot be parsed into a simple graph."""

    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        self.reason = reason
        super().__init__(f"line {lineno}: {reason}: {line!r}")


@dataclass(frozen=True, eq=False)
class Network:
    """Simple undirected graph.

    Edges are stored as ``(u, v)`` with ``u < v``. ``adjacency[i]`` is a tuple
    of ``(neighbor, edge_id)`` pairs sorted by neighbor.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Network":
        if n < 0:
            raise GraphInputError(f"node count must be non-negative, got {n}")
        canon: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphInputError(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphInputError(f"duplicate edge {key}")
            seen.add(key)
            eid = len(canon)
            canon.append(key)
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        return cls(
            n=n,
            edges=tuple(canon),
            adjacency=tuple(tuple(sorted(a)) for a in adj),
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        self._check_node(i)
        return len(self.adjacency[i])

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degree of every node in the intact graph, as an int64 array."""
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    @cached_property
    def endpoints(self) -> np.ndarray:
        """``(m, 2)`` int64 array of edge endpoints."""
        return np.asarray(self.edges, dtype=np.int64).reshape(self.m, 2)

    @cached_property
    def incident_edges(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each node, ascending."""
        return tuple(tuple(sorted(e for _, e in a)) for a in self.adjacency)

    @cached_property
    def edge_adjacency(self) -> tuple[tuple[int, ...], ...]:
        """For each edge, every other edge sharing an endpoint, ascending.

        In a simple graph no edge is adjacent through both endpoints, so the
        two incident lists are disjoint once the edge itself is dropped.
        """
        inc = self.incident_edges
        out = []
        for e, (u, v) in enumerate(self.edges):
            out.append(tuple(sorted(f for f in inc[u] + inc[v] if f != e)))
        return tuple(out)

    def edge_neighbors(
        self, e: int, alive: Callable[[int], bool] | Sequence[bool] | None = None
    ) -> set[int]:
        """Alive edges other than ``e`` that share an endpoint with ``e``.

        ``alive`` may be a predicate, a boolean sequence indexed by edge id, or
        None (every edge alive).
        """
        self._check_edge(e)
        nbrs = self.edge_adjacency[e]
        if alive is None:
            return set(nbrs)
        if callable(alive):
            return {f for f in nbrs if alive(f)}
        return {f for f in nbrs if alive[f]}

    def _check_node(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise GraphInputError(f"node {i} out of range [0, {self.n})")

    def _check_edge(self, e: int) -> None:
        if not 0 <= e < self.m:
            raise GraphInputError(f"edge {e} out of range [0, {self.m})")

    def relabel_edges(self, order: Sequence[int]) -> "Network":
        """Return a copy whose edge ``j`` is this network's edge ``order[j]``."""
        if sorted(order) != list(range(self.m)):
            raise GraphInputError("order must be a permutation of edge ids")
        return Network.from_edges(self.n, (self.edges[j] for j in order))


def load_edge_list(source: TextIO | str | os.PathLike) -> Network:
    """Parse ``u v`` lines into a :class:`Network`.

    Blank lines and lines starting with ``#`` are skipped. The node count is
    ``max id + 1``. Self-loops, repeated pairs (in either orientation) and
    malformed lines raise :class:`EdgeListFormatError`.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_edge_list(fh)

    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    max_id = -1
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise EdgeListFormatError(lineno, line, "expected two node ids")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListFormatError(lineno, line, "node ids must be integers") from None
        if u < 0 or v < 0:
            raise EdgeListFormatError(lineno, line, "node ids must be non-negative")
        if u == v:
            raise EdgeListFormatError(lineno, line, "self-loop")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise EdgeListFormatError(
                lineno, line, f"duplicate edge (first seen on line {seen[key]})"
            )
        seen[key] = lineno
        edges.append((u, v))
        max_id = max(max_id, u, v)
    return Network.from_edges(max_id + 1, edges)


def dump_edge_list(net: Network, sink: TextIO | None = None) -> str:
    """Write ``net`` as edge-list text in edge-id order; also returns the text."""
    buf = io.StringIO()
    buf.write(f"# nodes {net.n} edges {net.m}\n")
    for u, v in net.edges:
        buf.write(f"{u} {v}\n")
    text = buf.getvalue()
    if sink is not None:
        sink.write(text)
    return text
