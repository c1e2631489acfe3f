"""Regenerate the CSV + schema files shipped in ``src/monofuzz/datasets``.

balance is enumerated directly (all 5**4 weight/distance combinations).
The other four are derived from the R datasets bundled by the
``rdatasets`` package (``pip install rdatasets``), which is needed only to
run this script:

    wisconsin         MASS::biopsy, rows with missing values dropped
    bostonhousing4cl  MASS::Boston, medv cut at its quartiles (4 classes)
    machineCPU        MASS::cpus, perf cut at its quartiles (4 classes)
    windsorhousing    AER::HousePrices, price cut at its median (2 classes)

Usage: python scripts/build_bundled_datasets.py [outdir]
"""
import csv
import itertools
import json
import sys
from pathlib import Path

import numpy as np

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/monofuzz/datasets"


def write(name, header, rows, class_order, directions, levels=None, note=""):
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    schema = {
        "name": name,
        "class_column": "class",
        "class_order": class_order,
        "directions": directions,
    }
    if levels:
        schema["ordinal_levels"] = levels
    if note:
        schema["source"] = note
    (OUT / f"{name}.json").write_text(json.dumps(schema, indent=2) + "\n", encoding="utf-8")
    print(f"{name}: {len(rows)} rows")


def quantile_classes(values, n_classes):
    cuts = np.quantile(values, np.arange(1, n_classes) / n_classes)
    return np.searchsorted(cuts, values, side="left")


def fmt(v):
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def balance():
    rows = []
    for lw, ld, rw, rd in itertools.product(range(1, 6), repeat=4):
        left, right = lw * ld, rw * rd
        cls = "L" if left > right else "R" if right > left else "B"
        rows.append([lw, ld, rw, rd, cls])
    write("balance", ["left_weight", "left_distance", "right_weight", "right_distance", "class"],
          rows, ["L", "B", "R"], ["-", "-", "+", "+"], note="balance-scale, enumerated")


def main():
    balance()
    import rdatasets

    b = rdatasets.data("MASS", "biopsy").dropna()
    cols = [f"V{i}" for i in range(1, 10)]
    names = ["clump_thickness", "cell_size", "cell_shape", "adhesion", "epithelial_size",
             "bare_nuclei", "chromatin", "nucleoli", "mitoses"]
    rows = [[fmt(v) for v in r[cols]] + [r["class"]] for _, r in b.iterrows()]
    write("wisconsin", names + ["class"], rows, ["benign", "malignant"], ["+"] * 9,
          note="MASS::biopsy (UCI breast-cancer-wisconsin), complete rows")

    bo = rdatasets.data("MASS", "Boston")
    feats = ["crim", "zn", "indus", "chas", "nox", "rm", "age", "dis", "rad", "tax", "ptratio", "black", "lstat"]
    y = quantile_classes(bo["medv"].to_numpy(), 4)
    rows = [[fmt(v) for v in r] + [str(c)] for r, c in zip(bo[feats].to_numpy(), y)]
    write("bostonhousing4cl", feats + ["class"], rows, ["0", "1", "2", "3"],
          list("-+-+-+-+---+-"), note="MASS::Boston, medv quartile classes")

    cp = rdatasets.data("MASS", "cpus")
    feats = ["syct", "mmin", "mmax", "cach", "chmin", "chmax"]
    y = quantile_classes(cp["perf"].to_numpy(), 4)
    rows = [[fmt(v) for v in r] + [str(c)] for r, c in zip(cp[feats].to_numpy(), y)]
    write("machineCPU", feats + ["class"], rows, ["0", "1", "2", "3"], list("-+++++"),
          note="MASS::cpus, perf quartile classes")

    hp = rdatasets.data("AER", "HousePrices")
    feats = ["lotsize", "bedrooms", "bathrooms", "stories", "driveway", "recreation", "fullbase",
             "gasheat", "aircon", "garage", "prefer"]
    yes_no = [f for f in feats if hp[f].dtype == object]
    y = quantile_classes(hp["price"].to_numpy(), 2)
    rows = [[str(r[f]) if f in yes_no else fmt(r[f]) for f in feats] + [str(c)]
            for (_, r), c in zip(hp.iterrows(), y)]
    write("windsorhousing", feats + ["class"], rows, ["0", "1"], ["+"] * 11,
          levels={f: ["no", "yes"] for f in yes_no}, note="AER::HousePrices, price median split")


if __name__ == "__main__":
    main()
