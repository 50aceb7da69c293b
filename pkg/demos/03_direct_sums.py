"""
Projective direct sums
======================

A two-outcome measurement on an auxiliary state decides which of two
channels acts. The coherent information then splits as a weighted sum, and
the complement of the sum is the sum of the complements.
"""

import numpy as np

from capq.capacity import one_shot_capacity
from capq.channels import amplitude_damping, identity_channel
from capq.directsum import (
    ProjectiveDirectSum,
    additivity_formula_check,
    complement_identity_check,
    two_outcome,
)

povm = two_outcome(np.diag([1.0, 0.0]))

# id_2 against the zero-capacity AD(1/2): the capacity is the identity weight.
for w0 in (0.25, 0.5, 0.75):
    ds = ProjectiveDirectSum.create(identity_channel(2), amplitude_damping(0.5), povm, np.diag([w0, 1 - w0]))
    print(f"w0={w0}: Q1 = {one_shot_capacity(ds.channel).value:.6f}")

# Two damping channels with a non-projective POVM and a mixed sigma.
p0 = np.array([[0.7, 0.2], [0.2, 0.4]])
ds = ProjectiveDirectSum.create(amplitude_damping(0.1), amplitude_damping(0.35), two_outcome(p0), np.eye(2) / 2)
print("weights:", ds.weights)
print("complement identity distance:", complement_identity_check(ds)[0])
lhs, rhs, ok = additivity_formula_check(ds, restarts=16)
print(f"Q1 of the sum {lhs:.8f}, weighted formula {rhs:.8f}, agree: {ok}")
