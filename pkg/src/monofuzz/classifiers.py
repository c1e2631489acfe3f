"""Fuzzy k-NN, monotonic k-NN and monotonic fuzzy k-NN classifiers.

All three follow a small ``fit`` / ``predict`` protocol over
:class:`~monofuzz.dataset_io.Dataset` objects (or ``X, y`` arrays). They
do not rescale features; :func:`monofuzz.evaluation.run_cv` min-max scales
each training fold before fitting.
"""
from __future__ import annotations

import json
import zlib
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .dataset_io import Dataset
from .fuzzy_core import FuzzyTrainingSet, extract_training_memberships, median_labels, one_hot
from .monotonicity import nmi, relabel, valid_class_ranges
from .neighbors import IN_RANGE, OUT_RANGE, check_range_type, pairwise_distances, select_neighbors

__all__ = [
    "MonFkNNConfig",
    "preset_pm",
    "preset_am",
    "aggregate_memberships",
    "FkNN",
    "MkNN",
    "MonFkNN",
    "make_classifier",
    "CLASSIFIER_PRESETS",
    "model_to_dict",
    "model_from_dict",
    "save_model",
    "load_model",
]


@dataclass(frozen=True)
class MonFkNNConfig:
    """Parameters of :class:`MonFkNN`.

    k : neighbors used to extract training memberships.
    K : neighbors aggregated at prediction time.
    m : distance exponent; neighbor weight is ``1 / d ** (m - 1)``.
    rcr : real-class relevance, the membership reserved for a training
        instance's own label.
    range_type : ``"inRange"`` (only neighbors with a valid label) or
        ``"outRange"`` (all neighbors, invalid ones weighted by ``por``).
    por : out-of-range penalty in [0, 1] (ignored for ``inRange``).
    seed : reserved for randomized fallbacks.
    """

    k: int = 5
    K: int = 9
    m: float = 2.0
    rcr: float = 0.5
    range_type: str = IN_RANGE
    por: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.k < 1 or self.K < 1:
            raise ValueError("k and K must be >= 1")
        if not self.m > 1:
            raise ValueError("m must be > 1")
        if not 0.0 <= self.rcr <= 1.0:
            raise ValueError("rcr must lie in [0, 1]")
        if not 0.0 <= self.por <= 1.0:
            raise ValueError("por must lie in [0, 1]")
        check_range_type(self.range_type)


def preset_pm() -> MonFkNNConfig:
    """Pure-monotonic configuration: rcr 0.5, inRange."""
    return MonFkNNConfig(k=5, K=9, m=2.0, rcr=0.5, range_type=IN_RANGE, por=0.5)


def preset_am() -> MonFkNNConfig:
    """Approximate-monotonic configuration: rcr 1, outRange, por 0.5."""
    return MonFkNNConfig(k=5, K=9, m=2.0, rcr=1.0, range_type=OUT_RANGE, por=0.5)


def _as_dataset(data, y=None, n_classes=None) -> Dataset:
    if isinstance(data, Dataset):
        return data
    y = np.asarray(y)
    if n_classes is None:
        n_classes = max(int(y.max()) + 1, 2)
    return Dataset(X=np.asarray(data, dtype=float), y=y, n_classes=n_classes)


def _query_matrix(X, n_attributes) -> np.ndarray:
    X = np.asarray(X.X if isinstance(X, Dataset) else X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != n_attributes:
        raise ValueError(f"expected {n_attributes} attributes, got {X.shape[1]}")
    return X


def aggregate_memberships(memberships, distances, m: float = 2.0, weights=None) -> np.ndarray:
    """Distance-weighted mean of neighbor memberships, normalized to sum 1.

    Each neighbor contributes ``weights_j / d_j ** (m - 1)``. If some
    neighbor lies at distance 0 only the zero-distance neighbors count,
    each with its own ``weights_j``. Returns ``None`` when every weight is
    zero.
    """
    memberships = np.asarray(memberships, dtype=float)
    distances = np.asarray(distances, dtype=float)
    w_extra = np.ones(len(distances)) if weights is None else np.asarray(weights, dtype=float)
    zero = distances == 0
    if zero.any():
        w = np.where(zero, w_extra, 0.0)
    else:
        w = w_extra / distances ** (m - 1)
    total = w.sum()
    if total <= 0:
        return None
    u = w @ memberships / total
    return u / u.sum()


class _Base:
    kind = ""

    def _check_fitted(self):
        if getattr(self, "training_", None) is None:
            raise RuntimeError(f"{type(self).__name__} is not fitted")

    @property
    def n_classes(self) -> int:
        self._check_fitted()
        return int(self.training_.n_classes)


class FkNN(_Base):
    """Fuzzy k-NN with crisp-to-fuzzy training memberships.

    Training memberships use the ``k`` nearest neighbors (leave-one-out):
    ``0.51 + 0.49 * nn_l / k`` for the instance's own class and
    ``0.49 * nn_l / k`` otherwise. Prediction aggregates the ``K`` nearest
    memberships with inverse-distance weights and returns the argmax.
    """

    kind = "FkNN"

    def __init__(self, k: int = 5, K: int = 9, m: float = 2.0):
        if k < 1 or K < 1:
            raise ValueError("k and K must be >= 1")
        if not m > 1:
            raise ValueError("m must be > 1")
        self.k, self.K, self.m = int(k), int(K), float(m)
        self.training_: FuzzyTrainingSet | None = None

    def get_params(self) -> dict:
        return {"k": self.k, "K": self.K, "m": self.m}

    def fit(self, data, y=None, n_classes=None) -> "FkNN":
        d = _as_dataset(data, y, n_classes)
        n, c = len(d), d.n_classes
        U = one_hot(d.y, c)
        k = min(self.k, n - 1)
        if k >= 1:
            dist = pairwise_distances(d.X, d.X)
            eligible = ~np.eye(n, dtype=bool)
            for i, nb in enumerate(select_neighbors(dist, k, eligible)):
                U[i] = 0.49 * np.bincount(d.y[nb], minlength=c) / len(nb)
                U[i, d.y[i]] += 0.51
        self.training_ = FuzzyTrainingSet(
            X=d.X.copy(),
            memberships=U,
            labels=U.argmax(axis=1),
            original_labels=d.y.copy(),
            counts=np.ones(n, dtype=np.int64),
            n_classes=c,
        )
        return self

    def predict_memberships(self, X) -> np.ndarray:
        self._check_fitted()
        tr = self.training_
        Q = _query_matrix(X, tr.X.shape[1])
        dist = pairwise_distances(Q, tr.X)
        out = np.empty((len(Q), tr.n_classes))
        for r, nb in enumerate(select_neighbors(dist, self.K)):
            out[r] = aggregate_memberships(tr.memberships[nb], dist[r, nb], self.m)
        return out

    def predict(self, X) -> np.ndarray:
        return self.predict_memberships(X).argmax(axis=1)


class MkNN(_Base):
    """Monotonic k-NN fitted on a greedily relabeled (monotone) training set.

    ``inRange`` votes among the ``k`` nearest instances whose label is in
    the query's valid class range; ``outRange`` takes the plain ``k``
    nearest and drops the out-of-range ones. Votes are plain majority with
    ties going to the lower class. When no neighbor survives, a label is
    drawn uniformly from the valid range with a generator seeded by
    ``seed`` and the query bytes, so results do not depend on call order.
    """

    kind = "MkNN"

    def __init__(self, k: int = 5, range_type: str = IN_RANGE, seed: int = 0):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = int(k)
        self.range_type = check_range_type(range_type)
        self.seed = int(seed)
        self.training_: Dataset | None = None

    def get_params(self) -> dict:
        return {"k": self.k, "range_type": self.range_type, "seed": self.seed}

    def fit(self, data, y=None, n_classes=None) -> "MkNN":
        d = _as_dataset(data, y, n_classes)
        self.training_ = relabel(d)
        return self

    def predict_ranges(self, X) -> tuple[np.ndarray, np.ndarray]:
        self._check_fitted()
        tr = self.training_
        Q = _query_matrix(X, tr.n_attributes)
        return valid_class_ranges(Q, tr.X, tr.y, tr.n_classes)

    def _fallback(self, x, lo, hi) -> int:
        rng = np.random.default_rng([self.seed, zlib.crc32(np.ascontiguousarray(x).tobytes())])
        return int(rng.integers(lo, hi + 1))

    def predict(self, X, range_type: str | None = None) -> np.ndarray:
        self._check_fitted()
        range_type = check_range_type(range_type or self.range_type)
        tr = self.training_
        Q = _query_matrix(X, tr.n_attributes)
        lo, hi = valid_class_ranges(Q, tr.X, tr.y, tr.n_classes)
        dist = pairwise_distances(Q, tr.X)
        in_range = (tr.y[None, :] >= lo[:, None]) & (tr.y[None, :] <= hi[:, None])
        picked = select_neighbors(dist, self.k, in_range if range_type == IN_RANGE else None)
        pred = np.empty(len(Q), dtype=np.int64)
        for r, nb in enumerate(picked):
            if range_type == OUT_RANGE:
                nb = nb[in_range[r, nb]]
            if len(nb) == 0:
                pred[r] = self._fallback(Q[r], lo[r], hi[r])
            else:
                pred[r] = int(np.argmax(np.bincount(tr.y[nb], minlength=tr.n_classes)))
        return pred


class MonFkNN(_Base):
    """Monotonic fuzzy k-NN.

    ``fit`` fuses duplicate instances and extracts monotonically
    constrained memberships; ``predict`` computes the valid class range of
    each query against the median labels, aggregates the memberships of
    ``K`` neighbors (restricted to the range, or penalized by ``por``) and
    returns the median class of the aggregate.
    """

    kind = "MonFkNN"

    def __init__(self, config: MonFkNNConfig | None = None, **overrides):
        config = config or preset_pm()
        self.config = replace(config, **overrides) if overrides else config
        self.training_: FuzzyTrainingSet | None = None

    def get_params(self) -> dict:
        return asdict(self.config)

    def fit(self, data, y=None, n_classes=None) -> "MonFkNN":
        d = _as_dataset(data, y, n_classes)
        self.training_ = extract_training_memberships(d, self.config.k, self.config.rcr)
        return self

    def predict_memberships(self, X) -> np.ndarray:
        self._check_fitted()
        cfg, tr = self.config, self.training_
        Q = _query_matrix(X, tr.X.shape[1])
        yp, c = tr.labels, tr.n_classes
        lo, hi = valid_class_ranges(Q, tr.X, yp, c)
        dist = pairwise_distances(Q, tr.X)
        in_range = (yp[None, :] >= lo[:, None]) & (yp[None, :] <= hi[:, None])
        if cfg.range_type == IN_RANGE:
            picked = select_neighbors(dist, cfg.K, in_range)
        else:
            picked = select_neighbors(dist, cfg.K)
        out = np.empty((len(Q), c))
        for r, nb in enumerate(picked):
            if len(nb) == 0:
                # no label-eligible neighbor: fall back to the unconstrained search
                nb = select_neighbors(dist[r], cfg.K)
                weights = None
            elif cfg.range_type == IN_RANGE:
                weights = None
            else:
                weights = np.where(in_range[r, nb], 1.0, cfg.por)
            u = aggregate_memberships(tr.memberships[nb], dist[r, nb], cfg.m, weights)
            if u is None:
                # every neighbor fully penalized: spread mass over the valid range
                u = np.zeros(c)
                u[lo[r] : hi[r] + 1] = 1.0 / (hi[r] - lo[r] + 1)
            out[r] = u
        return out

    def predict(self, X) -> np.ndarray:
        return median_labels(self.predict_memberships(X))


# ------------------------------------------------------------------ factory

CLASSIFIER_PRESETS = ("fknn", "mknn", "monfknn-pm", "monfknn-am")


def make_classifier(name: str, **overrides):
    """Build a classifier from a preset name with optional parameter overrides.

    Recognised overrides: ``k``, ``K``, ``m``, ``rcr``, ``por``,
    ``range_type``, ``seed``. Overrides that do not apply to the chosen
    classifier raise ``ValueError``.
    """
    overrides = {k: v for k, v in overrides.items() if v is not None}
    name = name.lower()
    if name == "fknn":
        allowed = {"k", "K", "m"}
        _check_overrides(name, overrides, allowed)
        return FkNN(**overrides)
    if name == "mknn":
        allowed = {"k", "range_type", "seed"}
        _check_overrides(name, overrides, allowed)
        return MkNN(**overrides)
    if name in ("monfknn-pm", "monfknn-am", "monfknn"):
        base = preset_am() if name == "monfknn-am" else preset_pm()
        _check_overrides(name, overrides, set(asdict(base)))
        return MonFkNN(base, **overrides)
    raise ValueError(f"unknown classifier {name!r}; choose from {CLASSIFIER_PRESETS}")


def _check_overrides(name, overrides, allowed):
    bad = set(overrides) - allowed
    if bad:
        raise ValueError(f"{name} does not accept parameter(s): {', '.join(sorted(bad))}")


# -------------------------------------------------------------- persistence


def model_to_dict(model) -> dict:
    model._check_fitted()
    if isinstance(model, MkNN):
        tr = model.training_
        training = {
            "n_classes": tr.n_classes,
            "instances": tr.X.tolist(),
            "labels": tr.y.tolist(),
        }
    else:
        training = model.training_.to_dict()
    return {"kind": model.kind, "config": model.get_params(), "training": training}


def model_from_dict(data: dict):
    kind = data["kind"]
    cfg = data["config"]
    tr = data["training"]
    if kind == "FkNN":
        model = FkNN(**cfg)
        U = np.asarray(tr["memberships"], dtype=float)
        model.training_ = FuzzyTrainingSet(
            X=np.asarray(tr["instances"], dtype=float).reshape(len(U), -1),
            memberships=U,
            labels=U.argmax(axis=1),
            original_labels=np.asarray(tr["original_labels"], dtype=np.int64),
            counts=np.asarray(tr["counts"], dtype=np.int64),
            n_classes=int(tr["n_classes"]),
        )
    elif kind == "MkNN":
        model = MkNN(**cfg)
        d = Dataset(X=np.asarray(tr["instances"], dtype=float), y=tr["labels"], n_classes=tr["n_classes"])
        if nmi(d) != 0:
            raise ValueError("stored MkNN training data is not monotone")
        model.training_ = d
    elif kind == "MonFkNN":
        model = MonFkNN(MonFkNNConfig(**cfg))
        model.training_ = FuzzyTrainingSet.from_dict(tr)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    return model


def save_model(model, path, extra: dict | None = None) -> Path:
    path = Path(path)
    payload = model_to_dict(model)
    if extra:
        payload.update(extra)
    path.write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_model(path):
    """Load a model written by :func:`save_model`; returns ``(model, payload)``."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return model_from_dict(payload), payload
