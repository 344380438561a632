"""One-class descriptors built from trees over training points.

Three flavours share one evaluation rule (distance to the nearest tree
vertex or edge, accepted below an edge-weight quantile threshold):

* full tree: one spanning tree over the whole training class, built once;
* small tree: per query, a spanning tree over the gamma training points
  nearest the query;
* star: per query, the training point nearest the query becomes the root,
  joined to its gamma-1 nearest neighbours.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionMismatchError, GraphError, ParameterError
from .geometry import as_points, as_vector, distances_to_edges, distances_to_points
from .mst import SpanningTree, Threshold, compute_threshold, mst_of_points


class DescriptorKind(str, Enum):
    FULL_MST = "full-mst"
    SMALL_MST = "small-mst"
    N_ARY = "n-ary"


class ScanMode(str, Enum):
    """How a full-tree descriptor scans edges for the query distance.

    INCIDENT restricts the scan to edges touching the query's nearest tree
    node; ALL scans every edge (never larger than the incident distance).
    """

    INCIDENT = "incident"
    ALL = "all"


@dataclass
class TrainedDescriptor:
    """A one-class model: points, a tree over them, and an acceptance cutoff.

    Full-tree descriptors are built once at training time. Small-tree and
    star descriptors exist in two states: as a per-class configuration
    (tree None, `gamma` and `alpha` carried for per-query builds) and as
    the concrete per-query structure returned by the builders.
    """

    kind: DescriptorKind
    points: np.ndarray
    alpha: float
    tree: SpanningTree | None = None
    threshold: Threshold | None = None
    scan_mode: ScanMode = ScanMode.INCIDENT
    gamma: int | None = None
    _edge_u: np.ndarray = field(init=False, repr=False)
    _edge_v: np.ndarray = field(init=False, repr=False)
    _incident: list = field(init=False, repr=False)

    def __post_init__(self):
        self.points = as_points(self.points)
        if self.tree is not None:
            edges = self.tree.edges
            self._edge_u = np.array([u for u, _, _ in edges], dtype=np.int64)
            self._edge_v = np.array([v for _, v, _ in edges], dtype=np.int64)
            incident: list[list[int]] = [[] for _ in range(self.tree.node_count)]
            for i, (u, v, _) in enumerate(edges):
                incident[u].append(i)
                incident[v].append(i)
            self._incident = [np.array(ix, dtype=np.int64) for ix in incident]

    @property
    def is_built(self) -> bool:
        return self.tree is not None

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])


@dataclass(frozen=True)
class QueryEvaluation:
    """Outcome of measuring one query against one descriptor.

    `per_node_distances` lists (node id, distance) for every descriptor
    point in ascending distance order (ties by node id); the combiner's
    vote reads its head.
    """

    distance: float
    accepted: bool
    nearest_node: int
    per_node_distances: tuple[tuple[int, float], ...]


def _check_query(desc: TrainedDescriptor, x: np.ndarray) -> None:
    if x.shape[0] != desc.dimension:
        raise DimensionMismatchError(
            f"dimension mismatch: query has {x.shape[0]}, descriptor has {desc.dimension}"
        )


def _effective_gamma(gamma: int, available: int) -> int:
    if gamma < 2:
        raise ParameterError(f"gamma must be >= 2, got {gamma}")
    if available < 2:
        raise GraphError(
            f"need at least 2 training points for a tree descriptor, got {available}"
        )
    if gamma > available:
        warnings.warn(
            f"gamma={gamma} exceeds the {available} available points; clamping",
            RuntimeWarning,
            stacklevel=3,
        )
        return available
    return gamma


def train_full_mst(
    points, alpha: float, scan_mode: ScanMode = ScanMode.INCIDENT
) -> TrainedDescriptor:
    """Build the full-tree descriptor over one class's training points."""
    pts = as_points(points)
    if len(pts) < 2:
        raise GraphError(
            f"need at least 2 training points for a full tree descriptor, got {len(pts)}"
        )
    tree = mst_of_points(pts)
    return TrainedDescriptor(
        kind=DescriptorKind.FULL_MST,
        points=pts,
        alpha=alpha,
        tree=tree,
        threshold=compute_threshold(tree, alpha),
        scan_mode=ScanMode(scan_mode),
    )


def _evaluate_tree(desc: TrainedDescriptor, x, incident_only: bool) -> QueryEvaluation:
    x = as_vector(x)
    _check_query(desc, x)
    rows = distances_to_points(x, desc.points)
    nearest = int(np.argmin(rows))
    if incident_only:
        idx = desc._incident[nearest]
        heads = desc.points[desc._edge_u[idx]]
        tails = desc.points[desc._edge_v[idx]]
    else:
        heads = desc.points[desc._edge_u]
        tails = desc.points[desc._edge_v]
    distance = float(distances_to_edges(x, heads, tails).min())
    order = np.argsort(rows, kind="stable")
    per_node = tuple((int(i), float(rows[i])) for i in order)
    return QueryEvaluation(
        distance=distance,
        accepted=bool(distance <= desc.threshold.value),
        nearest_node=nearest,
        per_node_distances=per_node,
    )


def evaluate_full_mst(desc: TrainedDescriptor, x) -> QueryEvaluation:
    """Distance of `x` to a full-tree descriptor, scanned per `desc.scan_mode`."""
    if desc.kind is not DescriptorKind.FULL_MST:
        raise ParameterError(f"evaluate_full_mst needs a full-tree descriptor, got {desc.kind}")
    return _evaluate_tree(desc, x, incident_only=desc.scan_mode is ScanMode.INCIDENT)


def build_small_mst(points, x, gamma: int, alpha: float) -> TrainedDescriptor:
    """Per-query descriptor: spanning tree over the gamma points nearest `x`.

    Selection ties resolve toward the lower row index; the chosen subset
    keeps its original relative order, so gamma = len(points) reproduces
    the full-tree descriptor exactly.
    """
    pts = as_points(points)
    x = as_vector(x)
    gamma = _effective_gamma(gamma, len(pts))
    rows = distances_to_points(x, pts)
    chosen = np.sort(np.argsort(rows, kind="stable")[:gamma])
    subset = pts[chosen]
    tree = mst_of_points(subset)
    return TrainedDescriptor(
        kind=DescriptorKind.SMALL_MST,
        points=subset,
        alpha=alpha,
        tree=tree,
        threshold=compute_threshold(tree, alpha),
        gamma=gamma,
    )


def build_nary(points, x, gamma: int, alpha: float) -> TrainedDescriptor:
    """Per-query descriptor: star rooted at the training point nearest `x`.

    The root's gamma-1 nearest neighbours (ties toward the lower index)
    become its children; edge weights are their distances to the root and
    the threshold is the alpha quantile of those weights. The root is
    stored as node 0, children in original row order.
    """
    pts = as_points(points)
    x = as_vector(x)
    gamma = _effective_gamma(gamma, len(pts))
    rows = distances_to_points(x, pts)
    root = int(np.argmin(rows))
    from_root = distances_to_points(pts[root], pts)
    from_root[root] = np.inf
    neighbours = np.sort(np.argsort(from_root, kind="stable")[: gamma - 1])
    subset = np.vstack([pts[root : root + 1], pts[neighbours]])
    edges = [
        (0, j + 1, float(from_root[orig])) for j, orig in enumerate(neighbours)
    ]
    edges.sort(key=lambda e: (e[2], e[0], e[1]))
    tree = SpanningTree(node_count=gamma, edges=tuple(edges))
    return TrainedDescriptor(
        kind=DescriptorKind.N_ARY,
        points=subset,
        alpha=alpha,
        tree=tree,
        threshold=compute_threshold(tree, alpha),
        gamma=gamma,
    )


def evaluate_local(desc: TrainedDescriptor, x) -> QueryEvaluation:
    """Distance of `x` to a per-query descriptor; always a full edge scan."""
    if desc.kind not in (DescriptorKind.SMALL_MST, DescriptorKind.N_ARY):
        raise ParameterError(f"evaluate_local needs a per-query descriptor, got {desc.kind}")
    if not desc.is_built:
        raise ParameterError("descriptor carries build parameters only; build it for a query first")
    return _evaluate_tree(desc, x, incident_only=False)


def dump_descriptor(desc: TrainedDescriptor) -> str:
    """Text form of a built descriptor, for regression fixtures."""
    if not desc.is_built:
        raise ParameterError("cannot dump an unbuilt descriptor configuration")
    lines = [
        f"kind {desc.kind.value}",
        f"alpha {desc.alpha!r}",
        f"gamma {'-' if desc.gamma is None else desc.gamma}",
        f"scan {desc.scan_mode.value}",
        f"threshold {desc.threshold.value!r}",
        f"points {desc.points.shape[0]} {desc.points.shape[1]}",
    ]
    lines.extend(" ".join(repr(float(v)) for v in p) for p in desc.points)
    lines.append(f"edges {len(desc.tree.edges)}")
    lines.extend(f"{u} {v} {w!r}" for u, v, w in desc.tree.edges)
    return "\n".join(lines) + "\n"


def load_descriptor(text: str) -> TrainedDescriptor:
    """Inverse of `dump_descriptor`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    fields = dict(ln.split(None, 1) for ln in lines[:5])
    try:
        kind = DescriptorKind(fields["kind"])
        alpha = float(fields["alpha"])
        gamma = None if fields["gamma"] == "-" else int(fields["gamma"])
        scan = ScanMode(fields["scan"])
        threshold = float(fields["threshold"])
    except (KeyError, ValueError) as exc:
        raise ParameterError(f"malformed descriptor header: {exc}") from exc
    n, d = (int(t) for t in lines[5].split()[1:])
    points = np.array(
        [[float(t) for t in ln.split()] for ln in lines[6 : 6 + n]], dtype=np.float64
    ).reshape(n, d)
    edge_count = int(lines[6 + n].split()[1])
    edges = []
    for ln in lines[7 + n : 7 + n + edge_count]:
        u, v, w = ln.split()
        edges.append((int(u), int(v), float(w)))
    edges.sort(key=lambda e: (e[2], e[0], e[1]))
    return TrainedDescriptor(
        kind=kind,
        points=points,
        alpha=alpha,
        tree=SpanningTree(node_count=n, edges=tuple(edges)),
        threshold=Threshold(alpha=alpha, value=threshold),
        scan_mode=scan,
        gamma=gamma,
    )
