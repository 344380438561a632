"""Vector arithmetic and the point-to-segment distance kernel.

All descriptors measure how far a query point lies from a tree drawn over
training points, so every distance in the package funnels through the
functions here. Points are 1-D float64 numpy arrays; all helpers use the
same accumulation order so that equal inputs give bitwise-equal distances
everywhere (ties must resolve identically across code paths).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEdgeError, DimensionMismatchError, ParameterError


def as_vector(values) -> np.ndarray:
    """Coerce `values` to a 1-D float64 vector."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ParameterError(f"expected a 1-D vector, got array of shape {arr.shape}")
    return arr


def as_points(values) -> np.ndarray:
    """Coerce `values` to an (n, d) float64 point matrix."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ParameterError(f"expected an (n, d) point matrix, got shape {arr.shape}")
    return arr


def _check_same_dimension(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatchError(
            f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        )


def euclidean_distance(a, b) -> float:
    """L2 distance between two vectors of equal dimension."""
    a = as_vector(a)
    b = as_vector(b)
    _check_same_dimension(a, b)
    d = a - b
    return float(np.sqrt((d * d).sum()))


def distances_to_points(x, points) -> np.ndarray:
    """Distances from vector `x` to every row of `points`."""
    x = as_vector(x)
    points = as_points(points)
    _check_same_dimension(x, points)
    d = points - x
    return np.sqrt((d * d).sum(axis=1))


@dataclass(frozen=True)
class EdgeProjection:
    """Orthogonal projection of a point onto the line through an edge.

    `t` is the barycentric parameter along xi -> xj; the projection lands
    on the segment itself exactly when 0 <= t <= 1.
    """

    t: float
    point: np.ndarray
    on_segment: bool


def project_onto_edge(x, xi, xj) -> EdgeProjection:
    """Project `x` onto the line through `xi` and `xj`.

    Raises DegenerateEdgeError when the endpoints coincide; callers fall
    back to the plain vertex distance in that case.
    """
    x = as_vector(x)
    xi = as_vector(xi)
    xj = as_vector(xj)
    _check_same_dimension(x, xi)
    _check_same_dimension(x, xj)
    diff = xj - xi
    denom = float((diff * diff).sum())
    if denom == 0.0:
        raise DegenerateEdgeError("edge endpoints coincide; projection undefined")
    t = float(((x - xi) * diff).sum() / denom)
    point = xi + t * diff
    return EdgeProjection(t=t, point=point, on_segment=0.0 <= t <= 1.0)


def distance_to_edge(x, xi, xj) -> float:
    """Distance from `x` to the closed segment between `xi` and `xj`.

    Uses the orthogonal projection when it falls on the segment, otherwise
    the nearer endpoint. Degenerate edges (xi == xj) reduce to the vertex
    distance.
    """
    x = as_vector(x)
    xi = as_vector(xi)
    xj = as_vector(xj)
    _check_same_dimension(x, xi)
    _check_same_dimension(x, xj)
    diff = xj - xi
    denom = float((diff * diff).sum())
    if denom == 0.0:
        d = x - xi
        return float(np.sqrt((d * d).sum()))
    t = float(((x - xi) * diff).sum() / denom)
    if 0.0 <= t <= 1.0:
        r = x - (xi + t * diff)
        return float(np.sqrt((r * r).sum()))
    di = x - xi
    dj = x - xj
    return float(min(np.sqrt((di * di).sum()), np.sqrt((dj * dj).sum())))


def distances_to_edges(x, heads, tails) -> np.ndarray:
    """Vectorised `distance_to_edge` over edge endpoint matrices.

    `heads` and `tails` are (m, d) arrays holding one edge per row. The
    arithmetic mirrors the scalar kernel exactly, so the two agree bitwise.
    """
    x = as_vector(x)
    heads = as_points(heads)
    tails = as_points(tails)
    _check_same_dimension(x, heads)
    _check_same_dimension(x, tails)
    diff = tails - heads
    denom = (diff * diff).sum(axis=1)
    off_head = x - heads
    off_tail = x - tails
    d_head = np.sqrt((off_head * off_head).sum(axis=1))
    d_tail = np.sqrt((off_tail * off_tail).sum(axis=1))
    nondegenerate = denom > 0.0
    t = np.zeros(len(heads))
    np.divide((off_head * diff).sum(axis=1), denom, out=t, where=nondegenerate)
    resid = x - (heads + t[:, None] * diff)
    d_proj = np.sqrt((resid * resid).sum(axis=1))
    on_segment = nondegenerate & (t >= 0.0) & (t <= 1.0)
    result = np.where(on_segment, d_proj, np.minimum(d_head, d_tail))
    # degenerate edges reduce to the vertex distance
    return np.where(nondegenerate, result, d_head)
