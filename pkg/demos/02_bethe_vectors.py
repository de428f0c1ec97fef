# Three ways to the same boundary Bethe vector.
import numpy as np

from bqkz import bethe, harness
from bqkz.weightspace import WeightSpace

rng = np.random.default_rng(7)
p = harness.random_params(rng, N=3, M=2)
t = [0.4 + 0.1j, -0.2 + 0.3j, 0.1 - 0.5j]
xs = [0.3 + 0.2j, -0.4 + 0.1j]

# 1) multiply the creation operator built from the double-row monodromy
by_operators = bethe.bethe_vector(xs, t, p)
# 2) explicit double sum over signs and multi-indices
closed = bethe.bethe_vector_closed(xs, t, p)
# 3) sum of one-row vectors at the reflected rapidities
via_one_row = bethe.bethe_vector_from_ordinary(xs, t, p)

for k, a, b, c in zip(WeightSpace(3, 2).basis, by_operators, closed, via_one_row):
    print(k, f"{a:.6f}", f"{abs(a - b):.1e}", f"{abs(a - c):.1e}")

# the creation operators commute, so the vector does not care about rapidity order
print(harness.rel(closed, bethe.bethe_vector_closed(xs[::-1], t, p)))
