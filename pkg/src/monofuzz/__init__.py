"""Monotonic fuzzy k-nearest-neighbor classification.

Classifiers (``MonFkNN``, ``FkNN``, ``MkNN``), monotonicity measures,
synthetic data and label-noise tools, and a cross-validation harness.
"""
from .classifiers import (
    CLASSIFIER_PRESETS,
    FkNN,
    MkNN,
    MonFkNN,
    MonFkNNConfig,
    load_model,
    make_classifier,
    preset_am,
    preset_pm,
    save_model,
)
from .dataset_io import Dataset, Direction, load_dataset, make_folds, normalize_features, save_dataset
from .datasets import find_dataset, load_bundled, resolve_dataset
from .evaluation import accuracy, mae, run_cv, run_noise_sweep
from .fuzzy_core import fsd_dominates, median_of_memberships
from .monotonicity import comparable_pair_ratio, dominates, nmi, relabel, valid_class_range
from .synthesis import generate_artiset, inject_noise, undersample

__version__ = "0.1.0"

__all__ = [
    "CLASSIFIER_PRESETS",
    "Dataset",
    "Direction",
    "FkNN",
    "MkNN",
    "MonFkNN",
    "MonFkNNConfig",
    "accuracy",
    "comparable_pair_ratio",
    "dominates",
    "find_dataset",
    "fsd_dominates",
    "generate_artiset",
    "inject_noise",
    "load_bundled",
    "load_dataset",
    "load_model",
    "mae",
    "make_classifier",
    "make_folds",
    "median_of_memberships",
    "nmi",
    "normalize_features",
    "preset_am",
    "preset_pm",
    "relabel",
    "resolve_dataset",
    "run_cv",
    "run_noise_sweep",
    "save_dataset",
    "save_model",
    "undersample",
    "valid_class_range",
]
