"""
One-shot quantum capacity
=========================

Estimates max_rho I_c(Phi, rho) by restarted local optimization and compares
against the closed form available for amplitude damping.
"""

import numpy as np

from capq.capacity import amplitude_damping_capacity, one_shot_capacity, regularized_probe
from capq.channels import amplitude_damping, identity_channel

# The noiseless qubit carries exactly one qubit.
print("Q1(id_2) =", one_shot_capacity(identity_channel(2)).value)

# For amplitude damping the optimizer and the diagonal-input closed form agree.
print(f"{'eta':>5} {'optimizer':>12} {'closed form':>12}")
for eta in np.linspace(0.0, 0.6, 7):
    est = one_shot_capacity(amplitude_damping(eta))
    print(f"{eta:5.2f} {est.value:12.8f} {amplitude_damping_capacity(eta):12.8f}")

# The returned state is the certificate: the value is I_c at that state.
est = one_shot_capacity(amplitude_damping(0.2), restarts=8, seed=3)
print("argmax state:\n", np.round(est.argmax_state, 6))
print("converged:", est.converged)

# Degradable channels are additive, so two copies give nothing extra.
print("Q1(AD(0.2)^2)/2 =", regularized_probe(amplitude_damping(0.2), 2))
