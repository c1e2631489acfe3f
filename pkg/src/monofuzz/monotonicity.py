"""Dominance relation, monotonicity indices, valid class ranges and relabeling.

All functions assume features in canonical direct orientation (see
:mod:`monofuzz.dataset_io`), so ``a`` dominates ``b`` iff ``a >= b``
coordinate-wise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset_io import Dataset

__all__ = [
    "ClassRange",
    "dominates",
    "dominance_matrix",
    "comparable_pair_ratio",
    "violation_matrix",
    "nmp",
    "nmi",
    "valid_class_range",
    "valid_class_ranges",
    "relabel",
]


@dataclass(frozen=True)
class ClassRange:
    """Closed interval ``[lo, hi]`` of monotonically admissible class indices."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty class range [{self.lo}, {self.hi}]")

    def __contains__(self, label) -> bool:
        return self.lo <= label <= self.hi

    def labels(self) -> range:
        return range(self.lo, self.hi + 1)


def dominates(a, b) -> bool:
    """True iff ``a_j >= b_j`` for every attribute (reflexive)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a >= b))


def dominance_matrix(A, B=None) -> np.ndarray:
    """Boolean matrix ``G[i, j] = A[i] dominates B[j]``.

    Built one attribute at a time so memory stays at ``len(A) * len(B)``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = A if B is None else np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]} attributes")
    G = np.ones((A.shape[0], B.shape[0]), dtype=bool)
    for q in range(A.shape[1]):
        G &= A[:, q, None] >= B[None, :, q]
    return G


def _xy(data, labels=None):
    if isinstance(data, Dataset):
        return data.X, data.y
    return np.asarray(data, dtype=float), None if labels is None else np.asarray(labels)


def comparable_pair_ratio(data) -> float:
    """Share of unordered pairs ordered by dominance in at least one direction."""
    X, _ = _xy(data)
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least two instances")
    G = dominance_matrix(X)
    C = G | G.T
    return float((C.sum() - n) / 2 / (n * (n - 1) / 2))


def violation_matrix(X, y) -> np.ndarray:
    """``V[i, j]`` is True when ``x_i`` dominates ``x_j`` but ``y_i < y_j``."""
    y = np.asarray(y)
    return dominance_matrix(X) & (y[:, None] < y[None, :])


def nmp(X, y) -> int:
    """Number of ordered pairs breaking monotonicity."""
    return int(violation_matrix(X, y).sum())


def nmi(data, labels=None) -> float:
    """Non-monotonic index ``NMP / (N^2 - N)``.

    Accepts either a :class:`Dataset` or ``(instances, labels)``. Each
    clashing unordered pair contributes exactly one ordered violation, so
    the value is at most 0.5.
    """
    X, y = _xy(data, labels)
    if y is None:
        raise TypeError("labels are required when instances are given as an array")
    n = X.shape[0]
    if n < 2:
        raise ValueError("need at least two instances")
    if len(y) != n:
        raise ValueError("instances and labels differ in length")
    return nmp(X, y) / (n * n - n)


def _ranges_from_masks(below, above, y, n_classes):
    # below[i, j]: query i dominates instance j; above[i, j]: instance j dominates query i
    lo = np.where(below, y[None, :], -1).max(axis=1, initial=-1)
    hi = np.where(above, y[None, :], n_classes).min(axis=1, initial=n_classes)
    lo = np.where(lo < 0, 0, lo)
    hi = np.where(hi >= n_classes, n_classes - 1, hi)
    # non-monotone data can invert the bounds; swap to keep a non-empty range
    return np.minimum(lo, hi), np.maximum(lo, hi)


def valid_class_ranges(queries, X, y, n_classes: int, exclude_self: bool = False):
    """Vectorised valid class ranges for many queries.

    Returns ``(lo, hi)`` integer arrays. With ``exclude_self`` the queries
    must be the training instances themselves and instance ``i`` is left
    out of its own range computation.
    """
    queries = np.atleast_2d(np.asarray(queries, dtype=float))
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    below = dominance_matrix(queries, X)
    above = dominance_matrix(X, queries).T
    if exclude_self:
        np.fill_diagonal(below, False)
        np.fill_diagonal(above, False)
    return _ranges_from_masks(below, above, y, n_classes)


def valid_class_range(x, X, y, n_classes: int | None = None, exclude: int | None = None) -> ClassRange:
    """Range of labels ``x`` may take without clashing with ``(X, y)``.

    The lower bound is the largest label among instances dominated by ``x``
    (0 if none), the upper bound the smallest label among instances that
    dominate ``x`` (``n_classes - 1`` if none). Inverted bounds, which only
    arise on non-monotone data, are swapped. ``exclude`` drops one training
    index (leave-one-out).
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if n_classes is None:
        n_classes = int(y.max()) + 1 if y.size else 1
    if exclude is not None:
        keep = np.arange(len(y)) != exclude
        X, y = X[keep], y[keep]
    if len(y) == 0:
        return ClassRange(0, n_classes - 1)
    lo, hi = valid_class_ranges(np.asarray(x, dtype=float)[None, :], X, y, n_classes)
    return ClassRange(int(lo[0]), int(hi[0]))


def relabel(d: Dataset) -> Dataset:
    """Greedy monotone relabeling.

    Repeatedly takes the instance involved in the most violating pairs
    (ties: lowest index), computes its valid class range against the
    *settled* set (instances currently free of violations plus those
    already processed) and moves it to the label in that range closest to
    its current one (ties: lower class). The settled set is monotone by
    construction and grows every step, so the loop ends after at most N
    steps with a monotone labelling. Features are never touched.
    """
    X = d.X
    y = d.y.copy()
    G = dominance_matrix(X)
    np.fill_diagonal(G, False)
    # V[i, j]: i dominates j with y_i < y_j
    V = G & (y[:, None] < y[None, :])
    counts = V.sum(axis=0, dtype=np.int64) + V.sum(axis=1, dtype=np.int64)
    if not counts.any():
        return d
    settled = counts == 0
    while True:
        active = ~settled & (counts > 0)
        if not active.any():
            break
        cand = np.where(active, counts, -1)
        i = int(np.argmax(cand))  # first maximum = lowest index
        ref = settled.copy()
        ref[i] = False
        lo = max((int(y[j]) for j in np.flatnonzero(G[i] & ref)), default=0)
        hi = min((int(y[j]) for j in np.flatnonzero(G[:, i] & ref)), default=d.n_classes - 1)
        # settled set is monotone, so lo <= hi holds here
        new = int(np.clip(y[i], lo, hi))
        if new != y[i]:
            y[i] = new
            counts -= V[i].astype(np.int64) + V[:, i]
            V[i] = G[i] & (new < y)
            V[:, i] = G[:, i] & (y < new)
            counts += V[i].astype(np.int64) + V[:, i]
            counts[i] = V[i].sum() + V[:, i].sum()
        settled[i] = True
        settled |= counts == 0
    return d.with_labels(y)
