"""Pairing two one-class descriptors into a forced-choice binary classifier.

Each class gets its own descriptor. A query accepted by exactly one
descriptor takes that class. When both accept (overlapping shapes) or both
reject (uncovered region) the tie is broken by a k-nearest-neighbour
distance-difference vote, so every query receives a label.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .descriptors import (
    DescriptorKind,
    QueryEvaluation,
    ScanMode,
    TrainedDescriptor,
    build_nary,
    build_small_mst,
    evaluate_full_mst,
    evaluate_local,
    train_full_mst,
)
from .errors import ParameterError
from .geometry import as_points, as_vector, distances_to_points


class ModelKind(str, Enum):
    MST_CD = "mst-cd"
    MST_CD_GP = "mst-cd-gp"
    N_ARY = "n-ary"


class DecisionPath(str, Enum):
    SINGLE_ACCEPT = "single-accept"
    BOTH_ACCEPT = "both-accept"
    BOTH_REJECT = "both-reject"


@dataclass(frozen=True)
class Decision:
    """Label plus the evidence behind it, enough to replay the decision."""

    label: int
    path: DecisionPath
    vote_detail: tuple[int, int] | None  # (negative_count, positive_count)
    d0: float
    d1: float
    theta0: float
    theta1: float


@dataclass
class PairwiseModel:
    """Two per-class descriptors plus the vote size `k`.

    For per-query model kinds the descriptors hold the full class point
    sets and the build parameters; concrete trees are built per query.
    """

    descriptor_0: TrainedDescriptor
    descriptor_1: TrainedDescriptor
    k: int
    model_kind: ModelKind


def train_pairwise(
    class0_points,
    class1_points,
    model_kind: ModelKind,
    alpha: float,
    k: int,
    gamma: int | None = None,
    scan_mode: ScanMode = ScanMode.INCIDENT,
) -> PairwiseModel:
    """Train one descriptor per class and wrap them with the vote size.

    `k` is clamped to the smaller class size (with a warning) so the vote
    always has enough neighbours on both sides.
    """
    model_kind = ModelKind(model_kind)
    p0 = as_points(class0_points)
    p1 = as_points(class1_points)
    if p0.shape[1] != p1.shape[1]:
        raise ParameterError(
            f"class point sets have different dimensions: {p0.shape[1]} vs {p1.shape[1]}"
        )
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    limit = min(len(p0), len(p1))
    if k > limit:
        warnings.warn(
            f"k={k} exceeds the smallest class size {limit}; clamping",
            RuntimeWarning,
            stacklevel=2,
        )
        k = limit
    if model_kind is ModelKind.MST_CD:
        d0 = train_full_mst(p0, alpha, scan_mode)
        d1 = train_full_mst(p1, alpha, scan_mode)
    else:
        if gamma is None:
            raise ParameterError(f"model {model_kind.value} requires gamma")
        if gamma < 2:
            raise ParameterError(f"gamma must be >= 2, got {gamma}")
        kind = (
            DescriptorKind.SMALL_MST
            if model_kind is ModelKind.MST_CD_GP
            else DescriptorKind.N_ARY
        )
        d0 = TrainedDescriptor(kind=kind, points=p0, alpha=alpha, gamma=gamma)
        d1 = TrainedDescriptor(kind=kind, points=p1, alpha=alpha, gamma=gamma)
    return PairwiseModel(descriptor_0=d0, descriptor_1=d1, k=k, model_kind=model_kind)


def knn_tiebreak(x, class0_points, class1_points, k: int):
    """Sorted distance-difference vote between the two classes.

    Takes the k smallest distances from `x` to each class, sorted
    ascending, and counts the signs of their elementwise difference
    D1 - D0 (zeros count for neither side). Returns
    (label, negative_count, positive_count); class 1 wins when negatives
    are at least as many as positives.
    """
    x = as_vector(x)
    p0 = as_points(class0_points)
    p1 = as_points(class1_points)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    limit = min(len(p0), len(p1))
    if k > limit:
        raise ParameterError(f"k={k} exceeds the smallest class size {limit}")
    d0 = np.sort(distances_to_points(x, p0), kind="stable")[:k]
    d1 = np.sort(distances_to_points(x, p1), kind="stable")[:k]
    diff = d1 - d0
    negative = int((diff < 0).sum())
    positive = int((diff > 0).sum())
    label = 1 if negative >= positive else 0
    return label, negative, positive


def _evaluate_side(desc: TrainedDescriptor, x) -> tuple[QueryEvaluation, float]:
    """Evaluate one descriptor, building the per-query structure if needed."""
    if desc.kind is DescriptorKind.FULL_MST:
        return evaluate_full_mst(desc, x), desc.threshold.value
    if desc.kind is DescriptorKind.SMALL_MST:
        built = build_small_mst(desc.points, x, desc.gamma, desc.alpha)
    else:
        built = build_nary(desc.points, x, desc.gamma, desc.alpha)
    return evaluate_local(built, x), built.threshold.value


def classify(model: PairwiseModel, x) -> Decision:
    """Assign a binary label to `x`; never abstains."""
    x = as_vector(x)
    eval0, theta0 = _evaluate_side(model.descriptor_0, x)
    eval1, theta1 = _evaluate_side(model.descriptor_1, x)
    if eval0.accepted != eval1.accepted:
        return Decision(
            label=0 if eval0.accepted else 1,
            path=DecisionPath.SINGLE_ACCEPT,
            vote_detail=None,
            d0=eval0.distance,
            d1=eval1.distance,
            theta0=theta0,
            theta1=theta1,
        )
    path = DecisionPath.BOTH_ACCEPT if eval0.accepted else DecisionPath.BOTH_REJECT
    label, negative, positive = knn_tiebreak(
        x, model.descriptor_0.points, model.descriptor_1.points, model.k
    )
    return Decision(
        label=label,
        path=path,
        vote_detail=(negative, positive),
        d0=eval0.distance,
        d1=eval1.distance,
        theta0=theta0,
        theta1=theta1,
    )
