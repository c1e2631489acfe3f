"""Datasets shipped with the package and lookup of external ones.

Bundled: balance, wisconsin, bostonhousing4cl, machineCPU, windsorhousing
(see ``scripts/build_bundled_datasets.py`` for provenance). Other datasets,
e.g. ERA, ESL, LEV and SWD, are looked up as ``<name>.csv`` + ``<name>.json``
in the directory named by the ``MONOFUZZ_DATA`` environment variable.
"""
from __future__ import annotations

import os
from pathlib import Path

from ..dataset_io import Dataset, load_dataset

__all__ = ["BUNDLED", "DATA_ENV", "bundled_path", "load_bundled", "find_dataset", "resolve_dataset"]

HERE = Path(__file__).resolve().parent
DATA_ENV = "MONOFUZZ_DATA"
BUNDLED = ("balance", "wisconsin", "bostonhousing4cl", "machineCPU", "windsorhousing")


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise KeyError(f"no bundled dataset named {name!r}; available: {', '.join(BUNDLED)}")
    return HERE / f"{name}.csv"


def load_bundled(name: str) -> Dataset:
    return load_dataset(bundled_path(name))


def find_dataset(name: str) -> Path | None:
    """Path of ``<name>.csv`` under ``$MONOFUZZ_DATA`` or among the bundled files.

    The lookup ignores case so ``era`` finds ``ERA.csv``.
    """
    dirs = []
    if os.environ.get(DATA_ENV):
        dirs.append(Path(os.environ[DATA_ENV]))
    dirs.append(HERE)
    for base in dirs:
        if not base.is_dir():
            continue
        for p in sorted(base.glob("*.csv")):
            if p.stem.lower() == name.lower() and p.with_suffix(".json").exists():
                return p
    return None


def resolve_dataset(spec: str, schema=None) -> Dataset:
    """Load ``spec`` as a CSV path if it exists, else as a dataset name."""
    p = Path(spec)
    if p.suffix.lower() == ".csv" or p.exists():
        return load_dataset(p, schema)
    found = find_dataset(spec)
    if found is None:
        raise FileNotFoundError(
            f"dataset {spec!r} is neither a file nor a known name (set {DATA_ENV} to a folder of CSV+JSON files)"
        )
    return load_dataset(found, schema)
