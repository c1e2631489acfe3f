"""Ordinal dataset model, CSV/JSON-schema loading, min-max scaling and folds.

Features are stored in *canonical direct orientation*: every attribute
declared with an inverse monotone direction is negated at load time, so
dominance is plain coordinate-wise ``>=`` everywhere downstream.

File format
-----------
A headered, comma separated UTF-8 CSV plus a JSON sidecar (same stem,
``.json`` suffix by default)::

    {
      "class_column": "class",
      "class_order": ["low", "mid", "high"],
      "directions": ["+", "-", "+"],
      "ordinal_levels": {"buying": ["low", "med", "high", "vhigh"]},
      "name": "toy"
    }

``directions`` lists one entry per non-class column in header order.
``ordinal_levels`` (optional) encodes categorical ordinal attributes as
integer ranks 0..L-1. ``name`` defaults to the CSV file stem.
"""
from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "Direction",
    "Dataset",
    "FoldSpec",
    "DatasetFormatError",
    "SchemaError",
    "load_dataset",
    "save_dataset",
    "minmax_stats",
    "normalize_features",
    "make_folds",
]


class DatasetFormatError(ValueError):
    """The data file could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(ValueError):
    """The data does not agree with its schema, or the schema is invalid."""


class Direction(enum.Enum):
    DIRECT = "+"
    INVERSE = "-"

    @classmethod
    def parse(cls, value: "str | Direction") -> "Direction":
        if isinstance(value, Direction):
            return value
        try:
            return cls(str(value).strip())
        except ValueError:
            raise SchemaError(f"direction must be '+' or '-', got {value!r}") from None


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable labelled ordinal dataset.

    Parameters
    ----------
    X : (N, Q) float array in canonical direct orientation.
    y : (N,) int array of class indices in ``0..n_classes-1``.
    n_classes : number of ordered classes (>= 2).
    directions : declared direction of each original attribute.
    name : identifier used in reports.
    class_names : original class labels, lowest first.
    feature_names : column names, in order.
    """

    X: np.ndarray
    y: np.ndarray
    n_classes: int
    directions: tuple[Direction, ...] = ()
    name: str = "dataset"
    class_names: tuple[str, ...] = ()
    feature_names: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y)
        if X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        n, q = X.shape
        if n < 1 or q < 1:
            raise ValueError("a dataset needs at least one instance and one attribute")
        if y.shape != (n,):
            raise ValueError(f"y has shape {y.shape}, expected ({n},)")
        if y.size and not np.all(np.equal(np.mod(y, 1), 0)):
            raise ValueError("labels must be integer class indices")
        y = y.astype(np.int64)
        c = int(self.n_classes)
        if c < 2:
            raise ValueError("n_classes must be >= 2")
        if y.min() < 0 or y.max() >= c:
            raise ValueError(f"labels must lie in 0..{c - 1}")
        directions = tuple(Direction.parse(d) for d in self.directions) or (Direction.DIRECT,) * q
        if len(directions) != q:
            raise ValueError(f"{len(directions)} directions given for {q} attributes")
        class_names = tuple(str(s) for s in self.class_names) or tuple(str(i) for i in range(c))
        if len(class_names) != c:
            raise ValueError("class_names must have n_classes entries")
        feature_names = tuple(self.feature_names) or tuple(f"x{j + 1}" for j in range(q))
        if len(feature_names) != q:
            raise ValueError("feature_names must have one entry per attribute")
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "n_classes", c)
        object.__setattr__(self, "directions", directions)
        object.__setattr__(self, "class_names", class_names)
        object.__setattr__(self, "feature_names", feature_names)

    @property
    def n_instances(self) -> int:
        return self.X.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.n_instances

    def replace(self, **changes) -> "Dataset":
        fields = dict(
            X=self.X, y=self.y, n_classes=self.n_classes, directions=self.directions,
            name=self.name, class_names=self.class_names, feature_names=self.feature_names,
        )
        fields.update(changes)
        return Dataset(**fields)

    def subset(self, index) -> "Dataset":
        index = np.asarray(index)
        return self.replace(X=self.X[index], y=self.y[index])

    def with_labels(self, y) -> "Dataset":
        return self.replace(y=y)

    def raw_features(self) -> np.ndarray:
        """Features in the declared (file) orientation."""
        sign = np.array([-1.0 if d is Direction.INVERSE else 1.0 for d in self.directions])
        return self.X * sign

    def equals(self, other: "Dataset") -> bool:
        return (
            self.n_classes == other.n_classes
            and self.directions == other.directions
            and self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )


# --------------------------------------------------------------------------- IO


def _read_schema(schema) -> dict:
    if isinstance(schema, Mapping):
        return dict(schema)
    path = Path(schema)
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON schema ({exc})") from None


def _match_class(token: str, class_order: Sequence[str]) -> int | None:
    for i, name in enumerate(class_order):
        if token == name:
            return i
    # "1" vs "1.0" style mismatches
    try:
        value = float(token)
    except ValueError:
        return None
    for i, name in enumerate(class_order):
        try:
            if float(name) == value:
                return i
        except ValueError:
            continue
    return None


def load_dataset(path, schema=None, *, name: str | None = None) -> Dataset:
    """Load a CSV file described by a JSON schema.

    ``schema`` may be a path, an already-parsed mapping, or ``None`` to use
    the sidecar ``<path>.json``. Inverse attributes are negated and class
    labels are mapped to ``0..c-1`` following ``class_order``.

    Raises
    ------
    DatasetFormatError
        Malformed CSV (carries the 1-based line number).
    SchemaError
        Unknown class label, non-numeric feature, or inconsistent schema.
    """
    path = Path(path)
    if schema is None:
        schema = path.with_suffix(".json")
    spec = _read_schema(schema)
    for key in ("class_column", "class_order", "directions"):
        if key not in spec:
            raise SchemaError(f"schema is missing required field {key!r}")
    class_column = str(spec["class_column"])
    class_order = [str(c) for c in spec["class_order"]]
    if len(class_order) < 2 or len(set(class_order)) != len(class_order):
        raise SchemaError("class_order must list at least two distinct classes")
    directions = [Direction.parse(d) for d in spec["directions"]]
    levels = {k: [str(v) for v in vals] for k, vals in spec.get("ordinal_levels", {}).items()}

    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetFormatError("empty file", line=1) from None
    except csv.Error as exc:
        raise DatasetFormatError(str(exc), line=1) from None
    header = [h.strip() for h in header]
    if class_column not in header:
        raise SchemaError(f"class column {class_column!r} not found in header")
    class_idx = header.index(class_column)
    feature_cols = [i for i in range(len(header)) if i != class_idx]
    if len(directions) != len(feature_cols):
        raise SchemaError(
            f"schema declares {len(directions)} directions but the file has {len(feature_cols)} attributes"
        )
    for col in levels:
        if col not in header or col == class_column:
            raise SchemaError(f"ordinal_levels refers to unknown attribute {col!r}")

    rows, labels = [], []
    try:
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DatasetFormatError(f"expected {len(header)} fields, found {len(row)}", line=line)
            token = row[class_idx].strip()
            label = _match_class(token, class_order)
            if label is None:
                raise SchemaError(f"line {line}: unknown class label {token!r}")
            values = []
            for i in feature_cols:
                cell = row[i].strip()
                col = header[i]
                if col in levels:
                    if cell not in levels[col]:
                        raise SchemaError(f"line {line}: value {cell!r} not among levels of {col!r}")
                    values.append(float(levels[col].index(cell)))
                    continue
                try:
                    values.append(float(cell))
                except ValueError:
                    raise SchemaError(f"line {line}: non-numeric value {cell!r} in attribute {col!r}") from None
                if not np.isfinite(values[-1]):
                    raise SchemaError(f"line {line}: non-finite value in attribute {col!r}")
            rows.append(values)
            labels.append(label)
    except csv.Error as exc:
        raise DatasetFormatError(str(exc), line=reader.line_num) from None
    if not rows:
        raise DatasetFormatError("no data rows", line=2)

    X = np.array(rows, dtype=float)
    sign = np.array([-1.0 if d is Direction.INVERSE else 1.0 for d in directions])
    return Dataset(
        X=X * sign,
        y=np.array(labels),
        n_classes=len(class_order),
        directions=tuple(directions),
        name=name or spec.get("name") or path.stem,
        class_names=tuple(class_order),
        feature_names=tuple(header[i] for i in feature_cols),
    )


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() and abs(v) < 2**53 else repr(float(v))


def save_dataset(d: Dataset, path, schema_path=None, *, class_column: str = "class") -> tuple[Path, Path]:
    """Write ``d`` as CSV + JSON schema such that :func:`load_dataset` round-trips it."""
    path = Path(path)
    schema_path = Path(schema_path) if schema_path is not None else path.with_suffix(".json")
    raw = d.raw_features()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*d.feature_names, class_column])
        for row, label in zip(raw, d.y):
            w.writerow([*(_fmt(v) for v in row), d.class_names[label]])
    schema = {
        "name": d.name,
        "class_column": class_column,
        "class_order": list(d.class_names),
        "directions": [dr.value for dr in d.directions],
    }
    with open(schema_path, "w", encoding="utf-8") as fh:
        json.dump(schema, fh, indent=2)
        fh.write("\n")
    return path, schema_path


# ------------------------------------------------------------------ scaling


def minmax_stats(X) -> tuple[np.ndarray, np.ndarray]:
    """Per-attribute (minimum, range); range 0 marks a constant attribute."""
    X = np.asarray(X, dtype=float)
    lo = X.min(axis=0)
    return lo, X.max(axis=0) - lo


def _apply_minmax(X, lo, span) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    safe = np.where(span > 0, span, 1.0)
    out = (X - lo) / safe
    out[:, span == 0] = 0.0
    return out


def normalize_features(d: Dataset, stats: tuple[np.ndarray, np.ndarray] | None = None) -> Dataset:
    """Min-max scale every attribute of ``d`` to [0, 1].

    ``stats`` (from :func:`minmax_stats` on a training fold) lets held-out
    data be scaled with training statistics only; held-out values may then
    fall outside [0, 1]. Constant attributes map to 0.
    """
    lo, span = minmax_stats(d.X) if stats is None else stats
    return d.replace(X=_apply_minmax(d.X, lo, span))


# -------------------------------------------------------------------- folds


@dataclass(frozen=True, eq=False)
class FoldSpec:
    n_folds: int
    seed: int
    assignment: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "assignment", _frozen(np.asarray(self.assignment, dtype=np.int64)))

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.n_folds)

    def splits(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield ``(train_index, test_index)`` for each fold in order."""
        for f in range(self.n_folds):
            test = np.flatnonzero(self.assignment == f)
            train = np.flatnonzero(self.assignment != f)
            yield train, test


def make_folds(d: Dataset | np.ndarray, n_folds: int = 10, seed: int = 0) -> FoldSpec:
    """Seeded, class-stratified assignment of instances to ``n_folds`` folds.

    Instances are shuffled within each class, the classes are concatenated
    and positions are dealt round-robin, so fold sizes differ by at most one
    and every class is spread as evenly as its count allows.
    """
    y = d.y if isinstance(d, Dataset) else np.asarray(d)
    n = len(y)
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    if n_folds > n:
        raise ValueError(f"cannot make {n_folds} folds from {n} instances")
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in np.unique(y)])
    # random rotation so fold 0 is not always the largest
    offset = int(rng.integers(n_folds))
    assignment = np.empty(n, dtype=np.int64)
    assignment[order] = (np.arange(n) + offset) % n_folds
    return FoldSpec(n_folds=n_folds, seed=seed, assignment=assignment)
