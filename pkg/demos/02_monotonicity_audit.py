"""
Auditing a dataset
==================

How monotone is a dataset? We count comparable pairs and violations on
the bundled datasets, then repair one of them.
"""

# %%
import numpy as np

from monofuzz import comparable_pair_ratio, load_bundled, nmi, relabel
from monofuzz.datasets import BUNDLED

for name in BUNDLED:
    d = load_bundled(name)
    print(f"{name:18s} N={d.n_instances:4d} Q={d.n_attributes:2d} c={d.n_classes}"
          f"  comparable {100 * comparable_pair_ratio(d):6.2f}%  NMI {nmi(d):.4f}")

# %%
# Valid class ranges
# ------------------
# For a new point, the admissible labels are bounded below by what it
# dominates and above by what dominates it.

from monofuzz import valid_class_range

d = load_bundled("machineCPU")
x = np.median(d.X, axis=0)
r = valid_class_range(x, d.X, d.y, d.n_classes)
print("median machine may be labelled", list(r.labels()))

# %%
# Repairing violations
# --------------------
# Greedy relabeling moves one offending instance at a time into its valid
# range until no violation is left. It is not a minimal repair.

fixed = relabel(d)
print("labels changed:", int(np.sum(fixed.y != d.y)), "of", len(d))
print("NMI after:", nmi(fixed))
