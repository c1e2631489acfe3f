"""
Robustness to label noise
=========================

Training folds are reduced to a quarter and a growing share of their
labels is moved to classes seen nearby. Test folds stay clean.
"""

# %%
from monofuzz import generate_artiset, run_noise_sweep

base = generate_artiset(1000, 10, seed=0)
res = run_noise_sweep(base, [0.0, 0.1, 0.2, 0.3, 0.4], repetitions=3, seed=0)

# %%
# Training NMI grows with the noise ratio; the fuzzy monotonic model loses
# accuracy more slowly than monotonic k-NN on relabeled data.

cols = res.columns()
print("  ".join(f"{c:>20s}" for c in cols))
for row in res.rows:
    print("  ".join(f"{row[c]:20.4f}" for c in cols))

# %%
# The CSV feeds any plotting tool.

res.to_csv("noise_study.csv")
