"""Minimum spanning trees over point sets and edge-weight thresholds.

Two constructions are provided: Kruskal over an explicit edge list, and
Prim over the implicit complete Euclidean graph of a point set (distance
rows computed on demand, so the C(n, 2) edge list is never materialised;
this is what keeps thousand-point classes affordable). Both break weight
ties toward the lexicographically smaller (u, v) pair, which makes the
tree the unique minimum under the total edge order (weight, u, v); the
two algorithms therefore return identical trees, not merely equal totals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GraphError, ParameterError
from .geometry import as_points, distances_to_points

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with non-negative edge weights, nodes 0..n-1."""

    node_count: int
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class SpanningTree:
    """Spanning tree edges in canonical (weight, u, v) order."""

    node_count: int
    edges: tuple[Edge, ...]

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))

    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=np.float64)


@dataclass(frozen=True)
class Threshold:
    """Edge-weight quantile used as a descriptor's acceptance cutoff."""

    alpha: float
    value: float


def complete_graph(points) -> WeightedGraph:
    """Complete graph over `points` with Euclidean edge weights."""
    pts = as_points(points)
    n = len(pts)
    if n < 2:
        raise GraphError(f"need at least 2 points to build a graph, got {n}")
    edges: list[Edge] = []
    for u in range(n - 1):
        row = distances_to_points(pts[u], pts[u + 1 :])
        edges.extend((u, u + 1 + i, float(w)) for i, w in enumerate(row))
    return WeightedGraph(node_count=n, edges=tuple(edges))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def minimum_spanning_tree(graph: WeightedGraph) -> SpanningTree:
    """Kruskal's algorithm with (weight, u, v) tie-breaking."""
    n = graph.node_count
    if n < 2:
        raise GraphError(f"need at least 2 nodes for a spanning tree, got {n}")
    normalised = []
    for u, v, w in graph.edges:
        if u == v:
            raise GraphError(f"self-loop on node {u} is not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
        normalised.append((min(u, v), max(u, v), float(w)))
    normalised.sort(key=lambda e: (e[2], e[0], e[1]))
    forest = _UnionFind(n)
    picked: list[Edge] = []
    for u, v, w in normalised:
        if forest.union(u, v):
            picked.append((u, v, w))
            if len(picked) == n - 1:
                break
    if len(picked) != n - 1:
        raise GraphError("graph is not connected; no spanning tree exists")
    # Kruskal emits edges in ascending (weight, u, v) order already.
    return SpanningTree(node_count=n, edges=tuple(picked))


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def mst_of_points(points) -> SpanningTree:
    """Prim's algorithm over the implicit complete Euclidean graph.

    Equivalent to `minimum_spanning_tree(complete_graph(points))` but with
    O(n) memory beyond the point matrix.
    """
    pts = as_points(points)
    n = len(pts)
    if n < 2:
        raise GraphError(f"need at least 2 points for a spanning tree, got {n}")
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    key = distances_to_points(pts[0], pts)
    key[0] = np.inf
    parent = np.zeros(n, dtype=np.int64)
    edges: list[Edge] = []
    for _ in range(n - 1):
        masked = np.where(in_tree, np.inf, key)
        best_w = masked.min()
        candidates = np.flatnonzero(masked == best_w)
        u = int(min(candidates, key=lambda v: _pair(int(parent[v]), int(v))))
        p = int(parent[u])
        a, b = _pair(p, u)
        edges.append((a, b, float(key[u])))
        in_tree[u] = True
        row = distances_to_points(pts[u], pts)
        closer = (~in_tree) & (row < key)
        key[closer] = row[closer]
        parent[closer] = u
        # on exact weight ties prefer the lexicographically smaller pair
        tied = np.flatnonzero((~in_tree) & (row == key) & (parent != u))
        for v in tied:
            v = int(v)
            if _pair(u, v) < _pair(int(parent[v]), v):
                parent[v] = u
    edges.sort(key=lambda e: (e[2], e[0], e[1]))
    return SpanningTree(node_count=n, edges=tuple(edges))


def compute_threshold(tree: SpanningTree, alpha: float) -> Threshold:
    """Edge weight at the alpha quantile of the tree's sorted weights.

    The cut index is floor(alpha * n) clamped to [0, n-1] over the n
    ascending edge weights, which returns the exact median for odd n at
    alpha = 0.5.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    n = len(tree.edges)
    if n == 0:
        raise GraphError(
            "tree has no edges; threshold undefined (single-node descriptors "
            "must fall back to vertex distance)"
        )
    weights = np.sort(tree.weights())
    idx = min(max(int(math.floor(alpha * n)), 0), n - 1)
    return Threshold(alpha=float(alpha), value=float(weights[idx]))


def dump_tree(tree: SpanningTree, alpha: float | None = None) -> str:
    """Serialise a tree as `nodes <n> alpha <a>` plus one `u v weight` line per edge."""
    alpha_text = "-" if alpha is None else repr(float(alpha))
    lines = [f"nodes {tree.node_count} alpha {alpha_text}"]
    lines.extend(f"{u} {v} {w!r}" for u, v, w in tree.edges)
    return "\n".join(lines) + "\n"


def parse_tree(text: str) -> tuple[SpanningTree, float | None]:
    """Inverse of `dump_tree`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("nodes "):
        raise GraphError("tree dump must start with a 'nodes <n> alpha <a>' header")
    fields = lines[0].split()
    if len(fields) != 4 or fields[2] != "alpha":
        raise GraphError(f"malformed tree header: {lines[0]!r}")
    node_count = int(fields[1])
    alpha = None if fields[3] == "-" else float(fields[3])
    edges = []
    for ln in lines[1:]:
        u, v, w = ln.split()
        edges.append((int(u), int(v), float(w)))
    edges.sort(key=lambda e: (e[2], e[0], e[1]))
    return SpanningTree(node_count=node_count, edges=tuple(edges)), alpha
