"""
From verifier circuits to channels
==================================

Compiles small Clifford+T verifier circuits, reads off their accept POVM,
and evaluates the capacity of the direct sum that the accept/reject outcome
gates between a perfect channel and a useless one.
"""

from capq.channels import choi_distance, dephasing
from capq.circuits import TOY_VERIFIERS, build_reduction, compile_circuit, evaluate_reduction, parse_circuit

# Copy to a fresh ancilla, then discard it: that is the dephasing channel.
copy = parse_circuit("PREP 1; CNOT 0 1; TRACE 1")
print("distance to dephasing:", choi_distance(compile_circuit(copy), dephasing(2)))

# Verifiers that ignore the proof and flip coins of increasing bias.
print(f"{'verifier':>14} {'max accept':>11} {'capacity':>9}")
for name in ("always_reject", "coin_t1", "coin_t2", "coin_t3", "always_accept", "measure_proof"):
    r = build_reduction(parse_circuit(TOY_VERIFIERS[name]))
    est = evaluate_reduction(r)
    print(f"{name:>14} {r.weight_accept_max():11.6f} {est.value:9.6f}")

# The best proof for the measuring verifier is |1>.
r = build_reduction(parse_circuit(TOY_VERIFIERS["measure_proof"]))
print("best proof:\n", r.best_proof().real)
