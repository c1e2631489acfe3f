"""Euclidean brute-force neighbor search and the monotonic neighbor rule.

Neighbors are ordered by distance; equal distances are broken by the lower
instance index, which makes every search deterministic. The scalar helpers
(:func:`k_nearest`, :func:`neighbors_as_mknn`) and the batched
:func:`select_neighbors` share the same ordering code.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .monotonicity import ClassRange

__all__ = [
    "IN_RANGE",
    "OUT_RANGE",
    "NeighborList",
    "distance",
    "pairwise_distances",
    "select_neighbors",
    "k_nearest",
    "neighbors_as_mknn",
]

IN_RANGE = "inRange"
OUT_RANGE = "outRange"
RANGE_TYPES = (IN_RANGE, OUT_RANGE)


def check_range_type(range_type: str) -> str:
    if range_type not in RANGE_TYPES:
        raise ValueError(f"range_type must be one of {RANGE_TYPES}, got {range_type!r}")
    return range_type


class NeighborList(NamedTuple):
    """Neighbors sorted by (distance, index)."""

    index: np.ndarray
    distance: np.ndarray
    label: np.ndarray

    def __len__(self) -> int:
        return len(self.index)


def distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def pairwise_distances(A, B) -> np.ndarray:
    """Euclidean distance matrix ``D[i, j] = ||A[i] - B[j]||``.

    Computed from explicit differences (not the dot-product expansion) so
    identical rows give exactly 0 and ties are reproduced bit for bit.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]} attributes")
    D = np.zeros((A.shape[0], B.shape[0]))
    for q in range(A.shape[1]):
        diff = A[:, q, None] - B[None, :, q]
        D += diff * diff
    return np.sqrt(D)


def select_neighbors(dist: np.ndarray, k: int, eligible: np.ndarray | None = None) -> np.ndarray:
    """Indices of the ``k`` nearest eligible columns, per row.

    ``dist`` is ``(n_queries, n)`` or ``(n,)``. Returns a list of index
    arrays (one per query; shorter than ``k`` when fewer are eligible) or a
    single array for 1-d input.
    """
    single = dist.ndim == 1
    dist = np.atleast_2d(dist)
    if eligible is not None:
        eligible = np.atleast_2d(eligible)
    out = []
    for r in range(dist.shape[0]):
        row = dist[r]
        cand = np.arange(row.shape[0]) if eligible is None else np.flatnonzero(eligible[r])
        if len(cand) > k:
            # stable sort on distance over ascending candidate indices = index tie-break
            part = np.argpartition(row[cand], k - 1)[:k]
            kth = row[cand][part].max()
            cand = cand[row[cand] <= kth]
        order = np.argsort(row[cand], kind="stable")
        out.append(cand[order][:k])
    return out[0] if single else out


def _as_list(dist_row, picked, labels) -> NeighborList:
    labels = np.asarray(labels) if labels is not None else np.full(len(dist_row), -1)
    return NeighborList(index=picked, distance=dist_row[picked], label=labels[picked])


def k_nearest(x, X, k: int, exclude: int | None = None, labels=None) -> NeighborList:
    """The ``k`` nearest rows of ``X`` to ``x`` (``k`` is capped at what is available)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    X = np.asarray(X, dtype=float)
    d = pairwise_distances(np.asarray(x, dtype=float)[None, :], X)[0]
    eligible = np.ones(len(X), dtype=bool)
    if exclude is not None:
        eligible[exclude] = False
    return _as_list(d, select_neighbors(d, k, eligible), labels)


def neighbors_as_mknn(
    x,
    class_range: ClassRange,
    k: int,
    range_type: str,
    X,
    y,
    exclude: int | None = None,
) -> NeighborList:
    """Monotonic nearest-neighbor rule.

    ``inRange`` returns the ``k`` nearest instances whose label lies in
    ``class_range`` (possibly empty); ``outRange`` returns the plain ``k``
    nearest, leaving any filtering or penalty to the caller.
    """
    check_range_type(range_type)
    if k < 1:
        raise ValueError("k must be >= 1")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    d = pairwise_distances(np.asarray(x, dtype=float)[None, :], X)[0]
    eligible = np.ones(len(X), dtype=bool)
    if exclude is not None:
        eligible[exclude] = False
    if range_type == IN_RANGE:
        eligible &= (y >= class_range.lo) & (y <= class_range.hi)
    return _as_list(d, select_neighbors(d, k, eligible), y)
