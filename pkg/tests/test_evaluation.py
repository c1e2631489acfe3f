import numpy as np
import pytest

from monofuzz.dataset_io import Dataset, make_folds
from monofuzz.evaluation import (
    ClassifierSpec,
    EvaluationError,
    accuracy,
    mae,
    prediction_nmi,
    reports_to_csv,
    run_cv,
    run_noise_sweep,
)
from monofuzz.synthesis import generate_artiset


def test_metrics():
    assert accuracy([0, 1, 2], [0, 1, 1]) == pytest.approx(2 / 3)
    assert mae([0, 3, 2], [0, 1, 1]) == pytest.approx(1.0)
    assert prediction_nmi([[0.0], [1.0]], [1, 0]) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        accuracy([0], [0, 1])
    with pytest.raises(ValueError):
        mae([], [])


def test_cv_report_and_determinism():
    d = generate_artiset(300, 5, seed=0)
    a = run_cv(d, "monfknn-pm", n_folds=5, seed=1)
    b = run_cv(d, "monfknn-pm", n_folds=5, seed=1)
    assert a.to_json() == b.to_json()
    assert len(a.predictions) == 300 and len(a.folds) == 5
    assert sum(f.n_test for f in a.folds) == 300
    assert a.accuracy == pytest.approx(accuracy(a.predictions, d.y))
    assert a.params["rcr"] == 0.5
    row = a.summary_row()
    assert set(row) >= {"dataset", "classifier", "accuracy", "mae", "nmi"}
    assert reports_to_csv([a, b]).count("\n") == 3


def test_cv_threads_give_same_result(monkeypatch):
    d = generate_artiset(200, 5, seed=0)
    a = run_cv(d, "mknn", n_folds=4, seed=0)
    monkeypatch.setenv("MONOFUZZ_THREADS", "4")
    assert run_cv(d, "mknn", n_folds=4, seed=0).to_json() == a.to_json()


def test_cv_scales_with_training_statistics_only():
    # a test instance far outside the training range must not shift the scaling
    seen = []

    class Spy:
        def fit(self, data):
            seen.append(data.X.max())
            return self

        def predict(self, X):
            return np.zeros(len(X), dtype=int)

        def get_params(self):
            return {}

    class SpySpec(ClassifierSpec):
        def build(self):
            return Spy()

    X = np.arange(20, dtype=float)[:, None]
    X[-1] = 1000.0
    d = Dataset(X=X, y=np.arange(20) % 2, n_classes=2)
    folds = make_folds(d, 4, seed=0)
    run_cv(d, SpySpec("spy"), folds)
    assert all(m == pytest.approx(1.0) for m in seen)


def test_cv_errors_name_the_fold():
    d = generate_artiset(30, 3, seed=0)

    class Broken(ClassifierSpec):
        def build(self):
            raise RuntimeError("boom")

    with pytest.raises(EvaluationError, match="fold 0"):
        run_cv(d, Broken("broken"), n_folds=3)


def test_classifier_spec_coercion():
    assert ClassifierSpec.coerce("fknn") == ClassifierSpec("fknn")
    assert ClassifierSpec.coerce(("mknn", {"k": 3})).params == {"k": 3}


def test_noise_sweep_small():
    base = generate_artiset(400, 5, seed=0)
    res = run_noise_sweep(base, [0.0, 0.2], repetitions=2, seed=0, n_folds=4)
    assert [r["ratio"] for r in res.rows] == [0.0, 0.2]
    assert len(res.runs) == 4
    assert res.rows[0]["train_nmi"] == 0
    assert res.rows[1]["train_nmi"] > 0
    assert res.to_csv().splitlines()[0] == ",".join(res.columns())
    assert res.columns()[:2] == ["ratio", "train_nmi"]
    again = run_noise_sweep(base, [0.0, 0.2], repetitions=2, seed=0, n_folds=4)
    assert again.to_json() == res.to_json()
    with pytest.raises(ValueError):
        run_noise_sweep(base, [1.2])


def test_metrics_match_naive_versions(rng):
    from conftest import naive_nmi

    for _ in range(50):
        n = int(rng.integers(2, 40))
        p, t = rng.integers(0, 5, n), rng.integers(0, 5, n)
        X = rng.integers(0, 3, size=(n, 2)).astype(float)
        assert accuracy(p, t) == pytest.approx(sum(a == b for a, b in zip(p, t)) / n)
        assert mae(p, t) == pytest.approx(sum(abs(int(a) - int(b)) for a, b in zip(p, t)) / n)
        assert prediction_nmi(X, p) == pytest.approx(naive_nmi(X, p))
    assert prediction_nmi(X, np.zeros(len(X), dtype=int)) == 0


def test_two_folds_on_four_instances():
    d = Dataset(X=[[0.0], [1.0], [2.0], [3.0]], y=[0, 0, 1, 1], n_classes=2)
    r = run_cv(d, "fknn", n_folds=2, seed=0)
    assert len(r.predictions) == 4 and sum(f.n_test for f in r.folds) == 4
