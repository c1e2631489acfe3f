"""Synthetic monotone data and the class-noise protocol.

``generate_artiset`` draws a two-attribute monotone dataset. ``undersample``
and ``inject_noise`` reproduce the training-set corruption used in the
noise-robustness study: keep a random quarter of the training data, then
move a share of the labels to classes found among each victim's nearest
differently-labelled neighbors.
"""
from __future__ import annotations

import logging

import numpy as np

from .dataset_io import Dataset, Direction, minmax_stats, normalize_features
from .neighbors import pairwise_distances, select_neighbors

__all__ = [
    "artiset_score",
    "artiset_labels",
    "generate_artiset",
    "undersample",
    "replacement_distribution",
    "inject_noise",
]

log = logging.getLogger(__name__)


def artiset_score(x1, x2, n_classes: int):
    """``(x1 + (x2**2 - x1**2) / 2) * n_classes``; non-decreasing in both inputs on [0, 1]^2."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return (x1 + (x2 * x2 - x1 * x1) / 2.0) * n_classes


def artiset_labels(x1, x2, n_classes: int) -> np.ndarray:
    """Truncated score, clamped to ``n_classes - 1`` (reached only at x1 = x2 = 1)."""
    f = artiset_score(x1, x2, n_classes)
    return np.clip(np.floor(f).astype(np.int64), 0, n_classes - 1)


def generate_artiset(n: int = 1000, n_classes: int = 10, seed: int = 0) -> Dataset:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n_classes < 2:
        raise ValueError("n_classes must be >= 2")
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(n, 2))
    return Dataset(
        X=X,
        y=artiset_labels(X[:, 0], X[:, 1], n_classes),
        n_classes=n_classes,
        directions=(Direction.DIRECT, Direction.DIRECT),
        name="artiset",
        feature_names=("x1", "x2"),
    )


def undersample(d: Dataset, fraction: float, seed: int) -> Dataset:
    """Uniform random subset of ``round(fraction * N)`` instances, in original order."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    size = int(round(fraction * len(d)))
    if size == 0:
        raise ValueError(f"fraction {fraction} of {len(d)} instances leaves nothing")
    if size == len(d):
        return d
    rng = np.random.default_rng(seed)
    keep = np.sort(rng.choice(len(d), size=size, replace=False))
    return d.subset(keep)


def replacement_distribution(neighbor_labels, own_label: int) -> tuple[np.ndarray, np.ndarray]:
    """Classes and probabilities for a corrupted label.

    Neighbors sharing ``own_label`` are dropped; each remaining class gets
    its share of the survivors. Both arrays are empty when nothing is left.
    """
    labels = np.asarray(neighbor_labels)
    others = labels[labels != own_label]
    if len(others) == 0:
        return np.empty(0, dtype=np.int64), np.empty(0)
    classes, freq = np.unique(others, return_counts=True)
    return classes, freq / freq.sum()


def inject_noise(d: Dataset, ratio: float, n_neighbors: int = 15, seed: int = 0) -> Dataset:
    """Relabel ``round(ratio * N)`` distinct instances with nearby classes.

    Victims are visited in a seeded random order. For each one the
    ``n_neighbors`` nearest other instances are found (euclidean, on
    min-max scaled features), those sharing the victim's label are
    dropped, and the new label is drawn with probability proportional to
    how often each remaining class occurs. Victims whose whole
    neighborhood shares their label are skipped and the next candidate is
    tried. Neighborhoods are always read from the clean labels.
    """
    if not 0.0 <= ratio < 1.0:
        raise ValueError("ratio must lie in [0, 1)")
    if n_neighbors < 1:
        raise ValueError("n_neighbors must be >= 1")
    n = len(d)
    target = int(round(ratio * n))
    if target == 0 or n < 2:
        return d
    rng = np.random.default_rng(seed)
    Xs = normalize_features(d, minmax_stats(d.X)).X
    y = d.y
    new_y = y.copy()
    changed = 0
    k = min(n_neighbors, n - 1)
    for i in rng.permutation(n):
        if changed == target:
            break
        dist = pairwise_distances(Xs[i][None, :], Xs)[0]
        eligible = np.ones(n, dtype=bool)
        eligible[i] = False
        nb = select_neighbors(dist, k, eligible)
        classes, probs = replacement_distribution(y[nb], y[i])
        if len(classes) == 0:
            continue
        new_y[i] = rng.choice(classes, p=probs)
        changed += 1
    if changed < target:
        log.warning("only %d of %d requested instances could be corrupted", changed, target)
    return d.with_labels(new_y)
