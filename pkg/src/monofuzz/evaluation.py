"""Metrics, cross-validated benchmarking and the label-noise sweep.

Metrics are computed on the set of test predictions merged over all folds,
so every instance is predicted exactly once. Features are min-max scaled
per fold using training statistics only.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .classifiers import make_classifier
from .dataset_io import Dataset, FoldSpec, make_folds, minmax_stats, normalize_features
from .monotonicity import nmi
from .synthesis import inject_noise, undersample

__all__ = [
    "accuracy",
    "mae",
    "prediction_nmi",
    "ClassifierSpec",
    "EvaluationError",
    "FoldResult",
    "EvaluationReport",
    "run_cv",
    "NoiseSweepResult",
    "run_noise_sweep",
    "DEFAULT_NOISE_RATIOS",
    "reports_to_csv",
]

DEFAULT_NOISE_RATIOS = tuple(round(0.05 * i, 2) for i in range(9))


def _pair(predictions, truths):
    p = np.asarray(predictions)
    t = np.asarray(truths)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    if p.size == 0:
        raise ValueError("empty prediction vector")
    return p, t


def accuracy(predictions, truths) -> float:
    p, t = _pair(predictions, truths)
    return float(np.mean(p == t))


def mae(predictions, truths) -> float:
    """Mean absolute difference of class ranks."""
    p, t = _pair(predictions, truths)
    return float(np.mean(np.abs(p.astype(float) - t.astype(float))))


def prediction_nmi(instances, predictions) -> float:
    X = np.asarray(instances, dtype=float)
    p = np.asarray(predictions)
    if len(X) != len(p):
        raise ValueError(f"length mismatch: {len(X)} instances vs {len(p)} predictions")
    return nmi(X, p)


class EvaluationError(RuntimeError):
    """A fold failed; the message names the dataset and fold."""


@dataclass(frozen=True)
class ClassifierSpec:
    """Preset name plus parameter overrides, e.g. ``ClassifierSpec("mknn", {"k": 7})``."""

    name: str
    params: dict = field(default_factory=dict)

    @classmethod
    def coerce(cls, spec) -> "ClassifierSpec":
        if isinstance(spec, ClassifierSpec):
            return spec
        if isinstance(spec, str):
            return cls(spec)
        name, params = spec
        return cls(name, dict(params))

    def build(self):
        return make_classifier(self.name, **self.params)

    def resolved_params(self) -> dict:
        return self.build().get_params()


@dataclass
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    accuracy: float
    mae: float
    nmi: float | None
    train_nmi: float | None = None


@dataclass
class EvaluationReport:
    dataset: str
    classifier: str
    params: dict
    accuracy: float
    mae: float
    nmi: float
    n_folds: int
    seed: int
    folds: list[FoldResult]
    predictions: list[int]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kwargs)

    def summary_row(self) -> dict:
        return {
            "dataset": self.dataset,
            "classifier": self.classifier,
            "accuracy": self.accuracy,
            "mae": self.mae,
            "nmi": self.nmi,
            "n_folds": self.n_folds,
            "seed": self.seed,
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("MONOFUZZ_THREADS", "1")))
    except ValueError:
        return 1


def run_cv(
    d: Dataset,
    classifier,
    folds: FoldSpec | None = None,
    *,
    n_folds: int = 10,
    seed: int = 0,
    train_transform: Callable[[Dataset, int], Dataset] | None = None,
) -> EvaluationReport:
    """Cross-validate one classifier on ``d``.

    ``classifier`` is a preset name, a ``(name, params)`` pair or a
    :class:`ClassifierSpec`. ``train_transform(train, fold)`` may alter
    each training partition (e.g. undersampling plus label noise) before
    scaling and fitting; test partitions are never touched.
    """
    spec = ClassifierSpec.coerce(classifier)
    if folds is None:
        folds = make_folds(d, n_folds, seed)
    if len(folds.assignment) != len(d):
        raise ValueError("fold assignment does not cover the dataset")

    def one_fold(f, train_idx, test_idx):
        try:
            train = d.subset(train_idx)
            if train_transform is not None:
                train = train_transform(train, f)
            stats = minmax_stats(train.X)
            model = spec.build().fit(normalize_features(train, stats))
            pred = model.predict(normalize_features(d.subset(test_idx), stats).X)
        except Exception as exc:
            raise EvaluationError(f"{d.name}: {spec.name} failed on fold {f}: {exc}") from exc
        train_nmi = nmi(train) if len(train) > 1 else 0.0
        return train, pred, train_nmi

    splits = list(folds.splits())
    jobs = [(f, tr, te) for f, (tr, te) in enumerate(splits)]
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(lambda job: one_fold(*job), jobs))
    else:
        outs = [one_fold(*job) for job in jobs]

    merged = np.full(len(d), -1, dtype=np.int64)
    fold_results = []
    for (f, train_idx, test_idx), (train, pred, train_nmi) in zip(jobs, outs):
        merged[test_idx] = pred
        truth = d.y[test_idx]
        fold_results.append(
            FoldResult(
                fold=f,
                n_train=len(train),
                n_test=len(test_idx),
                accuracy=accuracy(pred, truth),
                mae=mae(pred, truth),
                nmi=prediction_nmi(d.X[test_idx], pred) if len(test_idx) > 1 else None,
                train_nmi=train_nmi,
            )
        )
    if (merged < 0).any():
        raise EvaluationError(f"{d.name}: some instances were never predicted")
    return EvaluationReport(
        dataset=d.name,
        classifier=spec.name,
        params=spec.resolved_params(),
        accuracy=accuracy(merged, d.y),
        mae=mae(merged, d.y),
        nmi=prediction_nmi(d.X, merged),
        n_folds=folds.n_folds,
        seed=int(folds.seed),
        folds=fold_results,
        predictions=merged.tolist(),
    )


def reports_to_csv(reports: Iterable[EvaluationReport], path=None) -> str:
    """One row per dataset x classifier; returns the CSV text (and writes it if ``path``)."""
    buf = io.StringIO()
    w = csv.DictWriter(
        buf,
        fieldnames=["dataset", "classifier", "accuracy", "mae", "nmi", "n_folds", "seed"],
        lineterminator="\n",
    )
    w.writeheader()
    for r in reports:
        w.writerow(r.summary_row())
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# ------------------------------------------------------------- noise sweep


@dataclass
class NoiseSweepResult:
    """Per-ratio averages plus the raw per-repetition values.

    ``rows`` holds one dict per ratio with ``ratio``, ``train_nmi`` and
    ``<classifier>_{accuracy,mae,nmi}`` averaged over repetitions.
    ``runs`` keeps the same fields for each (ratio, repetition).
    """

    ratios: list[float]
    classifiers: list[str]
    repetitions: int
    seed: int
    rows: list[dict]
    runs: list[dict]

    def columns(self) -> list[str]:
        cols = ["ratio", "train_nmi"]
        for c in self.classifiers:
            cols += [f"{c}_accuracy", f"{c}_mae", f"{c}_nmi"]
        return cols

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: row[k] for k in self.columns()})
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text

    def to_json(self, **kwargs) -> str:
        return json.dumps(asdict(self), sort_keys=True, **kwargs)


def run_noise_sweep(
    base: Dataset,
    ratios: Sequence[float] = DEFAULT_NOISE_RATIOS,
    repetitions: int = 3,
    seed: int = 0,
    *,
    classifiers: Sequence = ("monfknn-pm", "mknn"),
    n_folds: int = 10,
    fraction: float = 0.25,
    n_neighbors: int = 15,
) -> NoiseSweepResult:
    """Label-noise robustness study.

    For every repetition, ratio and fold the training partition is
    undersampled to ``fraction`` and then ``ratio`` of it is relabeled by
    :func:`~monofuzz.synthesis.inject_noise`; held-out folds stay clean.
    The undersample and the victim order depend only on (repetition,
    fold), so higher ratios corrupt a superset of the instances corrupted
    at lower ratios. MkNN relabels its (noisy) training set in ``fit``.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    ratios = [float(r) for r in ratios]
    if any(not 0.0 <= r < 1.0 for r in ratios):
        raise ValueError("ratios must lie in [0, 1)")
    specs = [ClassifierSpec.coerce(c) for c in classifiers]
    names = [s.name for s in specs]
    runs = []
    for rep in range(repetitions):
        rep_seed = seed + rep
        folds = make_folds(base, n_folds, rep_seed)
        for ratio in ratios:
            cache: dict[int, Dataset] = {}

            def transform(train, f, _ratio=ratio, _cache=cache, _rep_seed=rep_seed):
                if f not in _cache:
                    ss = np.random.SeedSequence([_rep_seed, f])
                    s_under, s_noise = (int(s.generate_state(1)[0]) for s in ss.spawn(2))
                    small = undersample(train, fraction, s_under)
                    _cache[f] = inject_noise(small, _ratio, n_neighbors, s_noise)
                return _cache[f]

            run = {"ratio": ratio, "repetition": rep, "seed": rep_seed}
            train_nmis = None
            for spec in specs:
                rep_report = run_cv(base, spec, folds, train_transform=transform)
                run[f"{spec.name}_accuracy"] = rep_report.accuracy
                run[f"{spec.name}_mae"] = rep_report.mae
                run[f"{spec.name}_nmi"] = rep_report.nmi
                train_nmis = [fr.train_nmi for fr in rep_report.folds]
            run["train_nmi"] = float(np.mean(train_nmis))
            runs.append(run)

    rows = []
    for ratio in ratios:
        sel = [r for r in runs if r["ratio"] == ratio]
        row = {"ratio": ratio}
        for key in sel[0]:
            if key in ("ratio", "repetition", "seed"):
                continue
            row[key] = float(np.mean([r[key] for r in sel]))
        rows.append(row)
    return NoiseSweepResult(
        ratios=ratios, classifiers=names, repetitions=repetitions, seed=seed, rows=rows, runs=runs
    )
