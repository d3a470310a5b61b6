"""Interaction networks: small-world graphs and periodic square lattices.

Graphs are immutable once built and safe to share read-only across
concurrently running simulation replicas.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Undirected graph in compressed sparse row form.

    ``indices[indptr[u]:indptr[u + 1]]`` lists the neighbors of node ``u``
    in ascending order. Node ids are ``0 .. node_count - 1``.
    """

    node_count: int
    indptr: np.ndarray
    indices: np.ndarray

    def neighbors(self, node: int) -> np.ndarray:
        if not 0 <= node < self.node_count:
            raise ValueError(f"node {node} out of range for graph of size {self.node_count}")
        return self.indices[self.indptr[node]:self.indptr[node + 1]]

    @property
    def edge_count(self) -> int:
        return int(self.indices.size) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


def degree(graph: Graph, node: int) -> int:
    """Number of neighbors of ``node``."""
    return int(graph.neighbors(node).size)


def _from_adjacency_sets(n: int, adj: list[set[int]]) -> Graph:
    degs = np.fromiter((len(s) for s in adj), dtype=np.int64, count=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(degs, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    for u, s in enumerate(adj):
        indices[indptr[u]:indptr[u + 1]] = sorted(s)
    return Graph(node_count=n, indptr=indptr, indices=indices)


def make_watts_strogatz(n: int, k: int, p: float, seed: int) -> Graph:
    """Small-world graph: ring lattice of even degree ``k``, each ring edge
    rewired with probability ``p``.

    Rewiring keeps the near endpoint and redraws the far one uniformly,
    resampling on self-loops and duplicate edges, so the edge count stays
    exactly ``n * k / 2``. A node already adjacent to everyone is skipped.
    Construction is deterministic in ``seed``.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if k <= 0 or k % 2 != 0:
        raise ValueError(f"ring degree k must be a positive even integer, got {k}")
    if k >= n:
        raise ValueError(f"ring degree k={k} must be smaller than n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rewiring probability must lie in [0, 1], got {p}")

    rng = np.random.default_rng(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)

    # One lap per ring offset, mirroring the construction order of the
    # classic algorithm: rewire (u, u+j) with probability p.
    for j in range(1, k // 2 + 1):
        for u in range(n):
            if rng.random() >= p:
                continue
            if len(adj[u]) >= n - 1:
                continue
            v = (u + j) % n
            w = int(rng.integers(n))
            while w == u or w in adj[u]:
                w = int(rng.integers(n))
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)

    return _from_adjacency_sets(n, adj)


def make_square_lattice(side: int) -> Graph:
    """Periodic square lattice with von Neumann neighborhoods.

    Node ids are row-major: node ``i * side + j`` sits at row ``i``,
    column ``j``. Every node has exactly four neighbors (up, down, left,
    right, wrapping at the boundary), which requires ``side >= 3``.
    """
    if side < 3:
        raise ValueError(f"side must be at least 3 to keep neighbors distinct, got {side}")
    n = side * side
    ids = np.arange(n, dtype=np.int64)
    row, col = ids // side, ids % side
    nbrs = np.stack(
        [
            ((row - 1) % side) * side + col,
            ((row + 1) % side) * side + col,
            row * side + (col - 1) % side,
            row * side + (col + 1) % side,
        ],
        axis=1,
    )
    nbrs.sort(axis=1)
    indptr = np.arange(0, 4 * n + 1, 4, dtype=np.int64)
    return Graph(node_count=n, indptr=indptr, indices=nbrs.reshape(-1))


@dataclass(frozen=True)
class NetworkSpec:
    """Declarative graph description used by run configs.

    kind "lattice" uses ``side``; kind "ws" uses ``n``, ``k``, ``p`` and
    ``graph_seed``. The graph seed is independent of the simulation seed
    so replicas share one topology.
    """

    kind: str = "lattice"
    side: int = 50
    n: int = 1000
    k: int = 4
    p: float = 0.1
    graph_seed: int = 0

    def validate(self) -> None:
        if self.kind not in ("lattice", "ws"):
            raise ValueError(f"unknown network kind {self.kind!r}, expected 'lattice' or 'ws'")
        if self.kind == "lattice" and self.side < 3:
            raise ValueError(f"lattice side must be at least 3, got {self.side}")
        if self.kind == "ws":
            if self.n <= 0:
                raise ValueError(f"ws node count must be positive, got {self.n}")
            if self.k <= 0 or self.k % 2 != 0 or self.k >= self.n:
                raise ValueError(f"ws ring degree must be even and in (0, n), got k={self.k}")
            if not 0.0 <= self.p <= 1.0:
                raise ValueError(f"ws rewiring probability must lie in [0, 1], got {self.p}")

    @property
    def node_count(self) -> int:
        return self.side * self.side if self.kind == "lattice" else self.n


def build_graph(spec: NetworkSpec) -> Graph:
    spec.validate()
    if spec.kind == "lattice":
        return make_square_lattice(spec.side)
    return make_watts_strogatz(spec.n, spec.k, spec.p, spec.graph_seed)


def dump_edge_list(graph: Graph, path: str | Path) -> None:
    """Write one ``u v`` line per undirected edge, ``u < v``, ascending."""
    lines = []
    for u in range(graph.node_count):
        for v in graph.neighbors(u):
            if v > u:
                lines.append(f"{u} {int(v)}\n")
    Path(path).write_text("".join(lines))
