"""
Channels, complements and degradability
=======================================

Builds the amplitude damping channel, looks at it through its Choi matrix
and Stinespring isometry, and checks the analytic degrading maps.
"""

import numpy as np

from capq import linmath as lm
from capq.channels import (
    ad_antidegrading_map,
    ad_degrading_map,
    amplitude_damping,
    apply,
    choi,
    choi_distance,
    complement,
    stinespring,
    verify_antidegrading_map,
    verify_degrading_map,
)

# A qubit that loses its excitation with probability 0.3.
ad = amplitude_damping(0.3)
print("Kraus operators:\n", *ad.kraus, sep="\n")

# The excited state decays partially.
print("AD(0.3)|1><1| =\n", apply(ad, np.diag([0.0, 1.0])).real)

# The Choi matrix is a normalized state whose first marginal is maximally mixed.
j = choi(ad)
print("trace of Choi matrix:", np.trace(j).real)

# The Stinespring isometry is an isometry; the environment sees the lost quantum.
v = stinespring(ad)
print("V^dagger V = I:", np.allclose(v.conj().T @ v, np.eye(2)))

# The complement of AD(eta) is AD(1 - eta).
print("d(AD(0.3)^c, AD(0.7)) =", choi_distance(complement(ad), amplitude_damping(0.7)))

# Below eta = 1/2 the channel is degradable, above it is anti-degradable.
for eta in (0.1, 0.3, 0.5):
    print(f"eta={eta}: degrading map verified:", verify_degrading_map(amplitude_damping(eta), ad_degrading_map(eta)))
for eta in (0.6, 0.9):
    print(f"eta={eta}: anti-degrading map verified:",
          verify_antidegrading_map(amplitude_damping(eta), ad_antidegrading_map(eta)))

# Output and environment entropies agree on pure inputs.
psi = lm.projector(np.array([np.cos(0.4), np.sin(0.4)]))
print("S(out) =", lm.von_neumann_entropy(apply(ad, psi)),
      " S(env) =", lm.von_neumann_entropy(apply(complement(ad), psi)))
