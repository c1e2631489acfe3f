import numpy as np
import pytest

from monofuzz.dataset_io import Dataset


def random_dataset(rng, n=40, q=3, c=4, grid=5, monotone=False):
    """Small integer-grid dataset; ``monotone`` labels by a coordinate-sum rule."""
    X = rng.integers(0, grid, size=(n, q)).astype(float)
    if monotone:
        s = X.sum(axis=1)
        y = np.minimum((s * c / (q * (grid - 1) + 1)).astype(int), c - 1)
    else:
        y = rng.integers(0, c, size=n)
    return Dataset(X=X, y=y, n_classes=c)


def naive_dominates(a, b):
    return all(ai >= bi for ai, bi in zip(a, b))


def naive_nmi(X, y):
    n = len(y)
    bad = 0
    for i in range(n):
        for j in range(n):
            if i != j and naive_dominates(X[i], X[j]) and y[i] < y[j]:
                bad += 1
    return bad / (n * n - n)


def naive_range(x, X, y, c):
    lo = max([y[j] for j in range(len(y)) if naive_dominates(x, X[j])], default=0)
    hi = min([y[j] for j in range(len(y)) if naive_dominates(X[j], x)], default=c - 1)
    return min(lo, hi), max(lo, hi)


def naive_knn(x, X, k):
    d = [(float(np.sqrt(((X[j] - x) ** 2).sum())), j) for j in range(len(X))]
    d.sort()
    return [j for _, j in d[:k]]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# criterion -> (passed, detail); filled by test_acceptance, echoed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
