"""Evidential K-nearest neighbours with pluggable fusion rules.

Each neighbour votes with a simple support on its class, decaying with
distance; the votes are pooled by any combination rule and the class with
the highest pignistic probability wins.  With many neighbours the
conjunctive/Dempster route drowns in conflict while the grouped rule keeps
it bounded.  Run:

    python3 demos/04_evidential_knn.py
"""

import numpy as np

from masscomb import RuleConfig
from masscomb.eknn import EknnConfig, classify, evaluate_loo, gamma_auto, two_gaussian_dataset

ds = two_gaussian_dataset(n_per_class=100, separation=4.0, seed=7)
print(f"dataset: {ds.n_samples} points, classes {ds.frame.labels}")
print("per-class scales (inverse mean same-class pair distance):", np.round(gamma_auto(ds), 3))

# one query point near the boundary
query = np.array([2.0, 0.0])
for rule in ("dempster", "conjunctive", "lns"):
    cfg = EknnConfig(k=9, rule=RuleConfig(rule=rule))
    got = classify(query, ds, cfg)
    print(
        f"  rule {rule:>12}: class {ds.frame.labels[got.klass]},"
        f" betp {np.round(got.betp, 3)}, conflict {got.fused.conflict:.3f}"
    )

print("\nleave-one-out sweep over K (accuracy / worst global conflict):")
print(f"{'K':>4}{'dempster':>16}{'conjunctive':>18}{'lns':>16}")
for k in (1, 5, 10, 15, 20, 25):
    cells = []
    for rule in ("dempster", "conjunctive", "lns"):
        rep = evaluate_loo(ds, EknnConfig(k=k, rule=RuleConfig(rule=rule)))
        cells.append(f"{rep.accuracy:.3f}/{rep.max_kappa:.3f}")
    print(f"{k:>4}{cells[0]:>16}{cells[1]:>18}{cells[2]:>16}")

print(
    "\nThe conjunctive worst-case conflict races toward 1 as K grows, while"
    "\nthe grouped rule keeps it low; accuracies stay comparable here because"
    "\nthe classes are well separated."
)
