# R- and K-matrices on Verma modules, block by block.
import numpy as np

from bqkz import harness, rkmat

eta = 0.6 + 0.1j
l1, l2, l3 = 1.3 + 0.2j, 0.8 - 0.1j, 1.1

# R^{l1 l2}(x) keeps total weight, so it is a list of small blocks, one per weight m
blocks = rkmat.solve_R(l1, l2, 0.4 - 0.2j, 3, eta)
print([b.shape for b in blocks])
print(np.round(blocks[1], 4))

# the normalization fixes v0 (x) v0; everything else is forced by the intertwining conditions
print("generators not used in the construction also intertwine:",
      rkmat.intertwining_residual(l1, l2, 0.4 - 0.2j, 3, eta))

x, y = 0.3 + 0.1j, -0.5 + 0.4j
print("Yang-Baxter     ", harness.ybe_residual((l1, l2, l3), x, y, 3, eta))
print("reflection      ", harness.reflection_residual(l1, l2, x, y, 0.2 + 0.3j, 3, eta))
print("unitarity       ", harness.unitarity_residual(l1, l2, x, 3, eta))
print("crossing of L   ", harness.crossing_residual(l1, x, eta))

# for two spin-1/2 legs the Verma R projects onto the familiar 4x4 matrix
print("spin-1/2 entries", harness.spin_half_residual(x, eta))

# deep in the right half plane R tends to a diagonal matrix
for d in harness.r_limit_distances(l1, l2, 2, eta):
    print(f"  |R(x) - R_inf| = {d:.2e}")
