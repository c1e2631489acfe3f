"""
Quickstart
==========

Fit the monotonic fuzzy k-NN on a synthetic monotone dataset, look at the
memberships it produces and compare it with the two baselines.
"""

# %%
# A monotone toy problem
# ----------------------
# Two attributes in [0, 1], ten ordered classes. The labelling rule is
# non-decreasing in both attributes, so the data has no monotonicity
# violations at all.

import numpy as np

from monofuzz import MonFkNN, generate_artiset, make_classifier, nmi, preset_am, run_cv

train = generate_artiset(1000, 10, seed=0)
test = generate_artiset(300, 10, seed=1)
print("training NMI:", nmi(train))

# %%
# Fitting and predicting
# ----------------------
# The default configuration reserves half of each training membership for
# the instance's own class and only lets neighbors with an admissible label
# vote.

model = MonFkNN().fit(train)
pred = model.predict(test.X)
print("accuracy:", np.mean(pred == test.y))

# memberships of the first three test points, rounded
print(np.round(model.predict_memberships(test.X[:3]), 2))
print("true classes:", test.y[:3])

# %%
# Does the classifier respect the ordering?
# -----------------------------------------
# NMI of the predictions measures the share of ordered pairs whose
# predicted classes contradict dominance.

print("prediction NMI:", nmi(test.X, pred))

# %%
# The other preset penalizes rather than excludes inadmissible neighbors.

am = MonFkNN(preset_am()).fit(train)
print("approximate preset accuracy:", np.mean(am.predict(test.X) == test.y))

# %%
# Cross-validated comparison
# --------------------------

for name in ("fknn", "mknn", "monfknn-pm", "monfknn-am"):
    r = run_cv(train, name, n_folds=10, seed=0)
    print(f"{name:12s} acc {r.accuracy:.4f}  mae {r.mae:.4f}  nmi {r.nmi:.6f}")

# %%
# Overrides go through the same factory the command line uses.

wide = make_classifier("monfknn-pm", K=15, rcr=0.8)
print(wide.get_params())
