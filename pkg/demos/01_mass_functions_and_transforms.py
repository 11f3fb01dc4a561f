"""Tour of the core objects: frames, mass functions, and their transforms.

Run:  python3 demos/01_mass_functions_and_transforms.py
"""

import numpy as np

from masscomb import (
    FrameOfDiscernment,
    MassFunction,
    SimpleSupport,
    canonical_decompose,
    consistency,
    discount,
    pignistic,
    recompose,
    transform,
)

# A frame of discernment is an ordered set of mutually exclusive hypotheses.
# Subsets are plain integers: hypothesis i owns bit i, so {rain, snow} on the
# frame (rain, snow, sun) is 0b011 = 3.
weather = FrameOfDiscernment.of("rain", "snow", "sun")
print("frame:", weather.labels)
print("subset {rain,snow} has index", weather.subset_index(["rain", "snow"]))
print("its cardinality:", weather.cardinality(3))
print("intersection with {snow,sun}:", weather.format_subset(weather.intersection(3, 6)))

# A mass function assigns belief to subsets.  Vectors are dense, length 2**n,
# with index 0 the empty set and the last index the whole frame.
m = MassFunction.from_dict(weather, {1: 0.5, 3: 0.2, 7: 0.3})
print("\nmass function:", m)
print("focal elements:", [weather.format_subset(int(a)) for a in m.focal_elements()])

# The same information can be read as belief (guaranteed support), plausibility
# (support not ruled out), commonality, or implicability.  All four are one
# lattice pass away from the masses, and commonality/implicability invert.
for kind in ("belief", "plausibility", "commonality", "implicability"):
    rep = transform(m, kind)
    print(f"{kind:>13}: {np.round(rep.values, 4)}")

q = transform(m, "commonality")
back = transform(q, "mass")
print("commonality inverts:", bool(np.allclose(back.values, m.values, atol=1e-15)))

# Decisions use the pignistic probability: each focal mass splits equally
# over its elements.
print("\npignistic:", dict(zip(weather.labels, np.round(pignistic(m).values, 4))))

# A partially reliable source is discounted toward ignorance.
print("discounted by 0.8:", discount(m, 0.8))
print("discounted by 0.0 is vacuous:", discount(m, 0.0).is_vacuous)

# Consistency of two sources: strong needs one element common to every focal
# set, weak only pairwise overlap.
other = MassFunction.from_dict(weather, {6: 1.0})
print("\nconsistency with a {snow,sun} believer:", consistency(m, other))

# Every non-dogmatic mass function factors into simple supports A^w, one
# weight per subset; recombining them reproduces the input.  Weights above 1
# mark inverse components, i.e. the input is not a product of plain supports.
w = canonical_decompose(m)
print("\ndecomposition weights:", np.round(w.weights, 4))
print("separable:", w.is_separable())
print("recompose error:", float(np.max(np.abs(recompose(w).values - m.values))))

# A simple support is the one-focal special case.
s = SimpleSupport(weather, weather.subset_index(["rain"]), 0.3)
print("\nsimple support:", s.to_mass())
print("its own decomposition weight:", canonical_decompose(s.to_mass())[s.focal])
