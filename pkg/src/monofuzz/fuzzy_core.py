"""Class-membership algebra for monotonic fuzzy k-NN.

Membership vectors are per-class degrees in [0, 1] that sum to one and are
read as probability mass functions over the ordered classes. This module
provides their cumulative form, first-degree stochastic dominance, the
median-range defuzzifier, duplicate fusion and the monotonically
constrained training-membership extraction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset_io import Dataset
from .monotonicity import valid_class_ranges
from .neighbors import pairwise_distances, select_neighbors

__all__ = [
    "MEDIAN_TOL",
    "FuzzyTrainingSet",
    "one_hot",
    "cumulative",
    "fsd_dominates",
    "median_range",
    "median_of_memberships",
    "median_labels",
    "fuse_duplicates",
    "extract_training_memberships",
]

#: slack on the 1/2 threshold so that e.g. 0.3 + 0.2 still counts as half
MEDIAN_TOL = 1e-9


def one_hot(labels, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    U = np.zeros((labels.size, n_classes))
    U[np.arange(labels.size), labels] = 1.0
    return U


def _normalized(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    s = u.sum(axis=-1, keepdims=True)
    if np.any(s <= 0):
        raise ValueError("membership vector has no mass")
    return u / s


def cumulative(u) -> np.ndarray:
    """Cumulative memberships ``U_l = sum_{j <= l} u_j`` (last entry is 1)."""
    return np.cumsum(_normalized(u), axis=-1)


def fsd_dominates(u_a, u_b) -> bool:
    """True iff ``u_a`` is FSD-below ``u_b``, i.e. ``u_b`` weakly dominates ``u_a``.

    That is the case when the cumulative of ``u_a`` is, element by
    element, at least the cumulative of ``u_b``.
    """
    u_a = np.asarray(u_a, dtype=float)
    u_b = np.asarray(u_b, dtype=float)
    if u_a.shape != u_b.shape:
        raise ValueError("membership vectors differ in class count")
    return bool(np.all(cumulative(u_a) >= cumulative(u_b) - MEDIAN_TOL))


def median_range(U) -> tuple[np.ndarray, np.ndarray]:
    """Median range ``(l_m, l_M)`` for one or many membership vectors.

    ``l_m`` is the first class whose cumulative mass reaches 1/2 and
    ``l_M`` the last class whose upper-tail mass ``1 - U(l-1)`` reaches
    1/2. Both bounds are computed from the same cumulative vector, which
    keeps them monotone under FSD.
    """
    C = cumulative(np.atleast_2d(U))
    half = 0.5
    lo = np.argmax(C >= half - MEDIAN_TOL, axis=1)
    # tail(l) >= 1/2  <=>  l == 0 or C[l-1] <= 1/2
    prev = np.concatenate([np.zeros((C.shape[0], 1)), C[:, :-1]], axis=1)
    ok = prev <= half + MEDIAN_TOL
    hi = C.shape[1] - 1 - np.argmax(ok[:, ::-1], axis=1)
    return lo, hi


def median_labels(U) -> np.ndarray:
    """Defuzzified class per row: floor of the median-range midpoint."""
    lo, hi = median_range(U)
    return (lo + hi) // 2


def median_of_memberships(u) -> tuple[tuple[int, int], int]:
    """``((l_m, l_M), final_class)`` for a single membership vector (0-indexed).

    >>> median_of_memberships([0.2, 0.3, 0.0, 0.3, 0.2])
    ((1, 3), 2)
    """
    lo, hi = median_range(np.asarray(u, dtype=float)[None, :])
    lo, hi = int(lo[0]), int(hi[0])
    return (lo, hi), (lo + hi) // 2


@dataclass(frozen=True, eq=False)
class FuzzyTrainingSet:
    """Deduplicated training instances with their class memberships.

    Attributes
    ----------
    X : (n, Q) unique feature vectors, in order of first occurrence.
    memberships : (n, c) rows summing to one.
    labels : (n,) median labels of ``memberships``.
    original_labels : (n,) original label of non-duplicated rows; the
        median of the frequency memberships for fused rows.
    counts : (n,) number of replicas each row stands for.
    """

    X: np.ndarray
    memberships: np.ndarray
    labels: np.ndarray
    original_labels: np.ndarray
    counts: np.ndarray
    n_classes: int
    source_index: np.ndarray = field(default=None, repr=False)

    @property
    def duplicated(self) -> np.ndarray:
        return self.counts > 1

    def __len__(self) -> int:
        return self.X.shape[0]

    def to_dict(self) -> dict:
        return {
            "n_classes": int(self.n_classes),
            "instances": self.X.tolist(),
            "memberships": self.memberships.tolist(),
            "median_labels": self.labels.tolist(),
            "original_labels": self.original_labels.tolist(),
            "counts": self.counts.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FuzzyTrainingSet":
        U = np.asarray(data["memberships"], dtype=float)
        labels = np.asarray(data["median_labels"], dtype=np.int64)
        if not np.array_equal(labels, median_labels(U)):
            raise ValueError("stored median labels disagree with stored memberships")
        return cls(
            X=np.asarray(data["instances"], dtype=float).reshape(len(U), -1),
            memberships=U,
            labels=labels,
            original_labels=np.asarray(data.get("original_labels", labels), dtype=np.int64),
            counts=np.asarray(data.get("counts", np.ones(len(U))), dtype=np.int64),
            n_classes=int(data["n_classes"]),
        )


def fuse_duplicates(d: Dataset) -> FuzzyTrainingSet:
    """Collapse identical feature vectors into one fuzzy instance.

    A fused row gets the label frequencies of its replicas as memberships;
    a unique row gets a one-hot vector. Feature equality is exact.
    """
    _, first, inverse, counts = np.unique(
        d.X, axis=0, return_index=True, return_inverse=True, return_counts=True
    )
    inverse = inverse.reshape(-1)
    # renumber groups by first occurrence
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    group = rank[inverse]
    n_unique = len(first)
    U = np.zeros((n_unique, d.n_classes))
    np.add.at(U, (group, d.y), 1.0)
    counts = counts[order]
    U /= counts[:, None]
    labels = median_labels(U)
    return FuzzyTrainingSet(
        X=d.X[first[order]],
        memberships=U,
        labels=labels,
        original_labels=labels.copy(),
        counts=counts.astype(np.int64),
        n_classes=d.n_classes,
        source_index=group,
    )


def extract_training_memberships(d: Dataset, k: int, rcr: float) -> FuzzyTrainingSet:
    """Monotonically constrained training memberships.

    After duplicate fusion, every row that was not duplicated receives

        u(l) = rcr * [y_i == l] + (1 - rcr) * nn_l / n_nn

    where ``nn_l`` counts, among its nearest neighbors restricted to the
    valid class range, those whose median label is ``l``. Ranges and
    neighbors are computed against the fused set leaving the row itself
    out. ``k`` is capped at ``len(fused) - 1``; a row with no eligible
    neighbor keeps its one-hot membership.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 <= rcr <= 1.0:
        raise ValueError("rcr must lie in [0, 1]")
    fused = fuse_duplicates(d)
    n, c = len(fused), fused.n_classes
    U = fused.memberships.copy()
    k = min(k, n - 1)
    targets = np.flatnonzero(~fused.duplicated)
    if k >= 1 and rcr < 1.0 and len(targets):
        Xp, yp = fused.X, fused.labels
        lo, hi = valid_class_ranges(Xp, Xp, yp, c, exclude_self=True)
        dist = pairwise_distances(Xp[targets], Xp)
        eligible = (yp[None, :] >= lo[targets, None]) & (yp[None, :] <= hi[targets, None])
        eligible[np.arange(len(targets)), targets] = False
        picked = select_neighbors(dist, k, eligible)
        for t, nb in zip(targets, picked):
            if len(nb) == 0:
                continue
            freq = np.bincount(yp[nb], minlength=c) / len(nb)
            row = (1.0 - rcr) * freq
            row[fused.original_labels[t]] += rcr
            U[t] = row
    return FuzzyTrainingSet(
        X=fused.X,
        memberships=U,
        labels=median_labels(U),
        original_labels=fused.original_labels,
        counts=fused.counts,
        n_classes=c,
        source_index=fused.source_index,
    )
