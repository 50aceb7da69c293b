"""
Zero-error communication over graph channels
============================================

Turns a confusability graph into a classical-quantum channel, finds a
maximum independent set, and certifies it as a zero-error code by checking
that the encoded states are orthogonal.
"""

import numpy as np

from capq.zeroerr import (
    block_diagonal,
    capacity_bounds,
    check_pvm_strategy,
    classical_strategy,
    complete_graph,
    cycle_graph,
    empty_graph,
    gram_system,
    petersen_graph,
)

# Pentagon: alpha = |min eig (I + A)| is the inverse golden ratio.
gs = gram_system(cycle_graph(5))
print("alpha(C5) =", gs.alpha)
print("Gram matrix:\n", np.round(gs.gram(), 6))

for name, g in [("C5", cycle_graph(5)), ("Petersen", petersen_graph()),
                ("K5", complete_graph(5)), ("empty4", empty_graph(4))]:
    b = capacity_bounds(g)
    print(f"{name:>8}: independent set {b.witness}, overlap {b.certificate.max_overlap:.1e}, "
          f"bits in [{b.lower_bits:.4f}, {b.upper_bits:.4f}]")

# The checker pinpoints a strategy that answers two adjacent vertices.
g = cycle_graph(5)
bad = block_diagonal(classical_strategy(g, (0, 1)), classical_strategy(g, (2, 4)))
ok, violations = check_pvm_strategy(bad, g)
print("valid:", ok)
for v in violations:
    print(" ", v)
