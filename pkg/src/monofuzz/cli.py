"""``monofuzz`` command line.

Subcommands: ``audit``, ``bench``, ``noise-study``, ``artiset``, ``fit``
and ``predict``. Exit status is 0 on success, 2 on input or usage errors
and 3 on runtime failures.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .classifiers import CLASSIFIER_PRESETS, load_model, make_classifier, save_model
from .dataset_io import DatasetFormatError, SchemaError, minmax_stats, normalize_features, save_dataset
from .datasets import resolve_dataset
from .evaluation import (
    DEFAULT_NOISE_RATIOS,
    ClassifierSpec,
    EvaluationError,
    reports_to_csv,
    run_cv,
    run_noise_sweep,
)
from .monotonicity import comparable_pair_ratio, nmi
from .synthesis import generate_artiset

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 2, 3
INPUT_ERRORS = (FileNotFoundError, IsADirectoryError, PermissionError, DatasetFormatError, SchemaError, KeyError)

OVERRIDE_FLAGS = {"k": "k", "K": "K", "m": "m", "rcr": "rcr", "por": "por", "range_type": "range_type"}
ACCEPTS = {
    "fknn": {"k", "K", "m"},
    "mknn": {"k", "range_type", "seed"},
    "monfknn-pm": {"k", "K", "m", "rcr", "por", "range_type", "seed"},
    "monfknn-am": {"k", "K", "m", "rcr", "por", "range_type", "seed"},
}


class InputError(Exception):
    pass


def _add_overrides(p):
    g = p.add_argument_group("classifier parameter overrides")
    g.add_argument("--k", type=int, help="training-membership / MkNN neighbors")
    g.add_argument("--K", dest="K", type=int, help="prediction neighbors")
    g.add_argument("--m", type=float, help="distance exponent (> 1)")
    g.add_argument("--rcr", type=float, help="real-class relevance in [0, 1]")
    g.add_argument("--por", type=float, help="out-of-range penalty in [0, 1]")
    g.add_argument("--range-type", dest="range_type", choices=["inRange", "outRange"])


def _spec(name: str, args, seed: int | None = None) -> ClassifierSpec:
    name = name.lower()
    if name not in ACCEPTS:
        raise InputError(f"unknown classifier {name!r}; choose from {', '.join(CLASSIFIER_PRESETS)}")
    params = {key: getattr(args, attr) for attr, key in OVERRIDE_FLAGS.items() if getattr(args, attr, None) is not None}
    if seed is not None and name in ("mknn",):
        params["seed"] = seed
    skipped = sorted(set(params) - ACCEPTS[name])
    if skipped:
        print(f"note: {name} ignores {', '.join('--' + s.replace('_', '-') for s in skipped)}", file=sys.stderr)
    params = {k: v for k, v in params.items() if k in ACCEPTS[name]}
    try:
        make_classifier(name, **params)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return ClassifierSpec(name, params)


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")


def _table(rows: list[dict], cols: list[str]) -> str:
    def cell(v):
        return f"{v:.4f}" if isinstance(v, float) else str(v)

    body = [[cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(b[i]) for b in body)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ commands


def cmd_audit(args) -> int:
    d = resolve_dataset(args.data, args.schema)
    stats = {
        "dataset": d.name,
        "instances": d.n_instances,
        "attributes": d.n_attributes,
        "classes": d.n_classes,
        "directions": "".join(x.value for x in d.directions),
        "comparable_pairs": comparable_pair_ratio(d) if len(d) > 1 else 0.0,
        "nmi": nmi(d) if len(d) > 1 else 0.0,
    }
    if args.json:
        print(json.dumps(stats, sort_keys=True))
    else:
        print(f"dataset           {stats['dataset']}")
        print(f"N / Q / c         {d.n_instances} / {d.n_attributes} / {d.n_classes}")
        print(f"directions        {stats['directions']}")
        print(f"comparable pairs  {100 * stats['comparable_pairs']:.2f}%")
        print(f"NMI               {stats['nmi']:.4f}")
    return EXIT_OK


def cmd_bench(args) -> int:
    datasets = [resolve_dataset(p) for p in args.data]
    specs = [_spec(c, args, args.seed) for c in args.classifier]
    reports = []
    for d in datasets:
        for spec in specs:
            reports.append(run_cv(d, spec, n_folds=args.folds, seed=args.seed))
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in reports], sort_keys=True, indent=1) + "\n"
    else:
        text = reports_to_csv(reports)
    if args.out:
        _write(text, args.out)
        print(_table([r.summary_row() for r in reports], ["dataset", "classifier", "accuracy", "mae", "nmi"]), end="")
    else:
        _write(text, None)
    return EXIT_OK


def _ratios(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratio list {text!r}") from None
    if not vals or any(not 0 <= v < 1 for v in vals):
        raise argparse.ArgumentTypeError("ratios must be comma separated values in [0, 1)")
    return vals


def cmd_noise_study(args) -> int:
    if args.data:
        base = resolve_dataset(args.data)
    else:
        base = generate_artiset(args.n, args.n_classes, args.seed)
    specs = [_spec(c, args, args.seed) for c in args.classifier]
    res = run_noise_sweep(
        base,
        args.ratios,
        args.reps,
        args.seed,
        classifiers=specs,
        n_folds=args.folds,
        fraction=args.fraction,
        n_neighbors=args.neighbors,
    )
    text = res.to_json(indent=1) + "\n" if args.format == "json" else res.to_csv()
    _write(text, args.out)
    if args.out:
        print(_table(res.rows, res.columns()), end="")
    return EXIT_OK


def cmd_artiset(args) -> int:
    d = generate_artiset(args.n, args.n_classes, args.seed)
    try:
        csv_path, schema_path = save_dataset(d, args.out)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {csv_path} and {schema_path} ({len(d)} instances, {d.n_classes} classes)")
    return EXIT_OK


def cmd_fit(args) -> int:
    d = resolve_dataset(args.data, args.schema)
    spec = _spec(args.classifier, args, args.seed)
    stats = minmax_stats(d.X)
    model = spec.build().fit(normalize_features(d, stats))
    extra = {
        "scaling": {"min": stats[0].tolist(), "range": stats[1].tolist()},
        "directions": [x.value for x in d.directions],
        "class_names": list(d.class_names),
        "dataset": d.name,
    }
    try:
        save_model(model, args.out, extra)
    except OSError as exc:
        raise InputError(f"cannot write {args.out}: {exc}") from None
    print(f"fitted {model.kind} on {d.name} ({len(d)} instances) -> {args.out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    try:
        model, payload = load_model(args.model)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise InputError(f"cannot read model {args.model}: {exc}") from None
    d = resolve_dataset(args.data, args.schema)
    if [x.value for x in d.directions] != payload.get("directions", [x.value for x in d.directions]):
        raise InputError("attribute directions of the data differ from those the model was fitted on")
    sc = payload.get("scaling")
    Xq = d if sc is None else normalize_features(d, (np.asarray(sc["min"]), np.asarray(sc["range"])))
    pred = model.predict(Xq.X)
    names = payload.get("class_names") or [str(i) for i in range(model.n_classes)]
    out = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["row", "predicted", "true"])
        for i, (p, t) in enumerate(zip(pred, d.y)):
            w.writerow([i, names[p], d.class_names[t]])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monofuzz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="dataset statistics: size, comparable pairs, NMI")
    p.add_argument("data", help="CSV path or dataset name")
    p.add_argument("--schema", help="JSON schema (default: sidecar next to the CSV)")
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="cross-validated accuracy / MAE / NMI")
    p.add_argument("--data", action="append", required=True, help="CSV path or dataset name (repeatable)")
    p.add_argument("--classifier", action="append", required=True, choices=CLASSIFIER_PRESETS,
                   help="classifier preset (repeatable)")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_overrides(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("noise-study", help="label-noise robustness sweep (artiset by default)")
    p.add_argument("--ratios", type=_ratios, default=list(DEFAULT_NOISE_RATIOS),
                   help="comma separated noise ratios (default 0,0.05,...,0.4)")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--data", help="dataset instead of a generated artiset")
    p.add_argument("--n", type=int, default=1000, help="artiset size")
    p.add_argument("--n-classes", type=int, default=10, help="artiset classes")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--fraction", type=float, default=0.25, help="training undersampling fraction")
    p.add_argument("--neighbors", type=int, default=15, help="neighbors consulted when corrupting a label")
    p.add_argument("--classifier", action="append", choices=CLASSIFIER_PRESETS,
                   help="classifiers to compare (default: monfknn-pm and mknn)")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_overrides(p)
    p.set_defaults(func=cmd_noise_study)

    p = sub.add_parser("artiset", help="write a generated artiset as CSV + JSON schema")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--n-classes", type=int, default=10)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV path; the schema goes next to it")
    p.set_defaults(func=cmd_artiset)

    p = sub.add_parser("fit", help="fit a classifier on a dataset and save it as JSON")
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--classifier", required=True, choices=CLASSIFIER_PRESETS)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_overrides(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("predict", help="predict a dataset with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--schema")
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "classifier", None) is None and args.command == "noise-study":
        args.classifier = ["monfknn-pm", "mknn"]
    for name in ("n", "n_classes", "reps", "folds", "neighbors"):
        v = getattr(args, name, None)
        if v is not None and v < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EvaluationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
