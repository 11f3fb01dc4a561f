"""Every combination rule on one instructive input.

Six sources judge three hypotheses: five weakly support theta1, one strongly
supports theta2.  The majority view is theta1, yet rules that renormalise or
enumerate conflict hand the decision to the loud dissenter.  Run:

    python3 demos/02_rule_gallery.py
"""

import numpy as np

from masscomb import FrameOfDiscernment, RuleConfig, SimpleSupport, combine, pignistic

frame = FrameOfDiscernment.numbered(3)
sources = [SimpleSupport(frame, 1, w).to_mass() for w in (0.88, 0.84, 0.85, 0.89, 0.86)]
sources.append(SimpleSupport(frame, 2, 0.05).to_mass())

print("inputs:")
for i, m in enumerate(sources, start=1):
    print(f"  source {i}: {m}")

rules = ("conjunctive", "dempster", "disjunctive", "dp", "pcr6", "cautious", "average", "lns")
subset_labels = [frame.format_subset(a) for a in range(frame.powerset_size)]

print(f"\n{'subset':<24}" + "".join(f"{r:>13}" for r in rules))
columns = {}
for rule in rules:
    columns[rule] = combine(sources, RuleConfig(rule=rule)).mass.values
for a, label in enumerate(subset_labels):
    row = "".join(f"{columns[r][a]:>13.5f}" for r in rules)
    print(f"{label:<24}{row}")

print("\ndecisions (argmax pignistic):")
for rule in rules:
    mass = combine(sources, RuleConfig(rule=rule)).mass
    if mass.conflict >= 1 - 1e-12:
        print(f"  {rule:>12}: undecidable (total conflict)")
        continue
    bp = pignistic(mass).values
    winner = frame.labels[int(np.argmax(bp))]
    print(f"  {rule:>12}: {winner}  (betp {np.round(bp, 4)})")

print(
    "\nOnly the grouped rule (lns) both keeps a visible conflict level and"
    "\nhands the decision to the majority singleton; the renormalising rules"
    "\nfollow the single strongly committed dissenter."
)
