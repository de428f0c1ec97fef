# Deep in the sector Theta_k tends to a multiple of the basis vector Omega_k.
import numpy as np

from bqkz import quad, weightfn
from bqkz.qseries import QBase
from bqkz.weightspace import Params, WeightSpace

p = Params(QBase(-0.4 + 0.3j), 0.8 + 0.1j, 0.3 + 0.1j, -0.2 + 0.3j, (1.5 + 0.2j, 1.4 - 0.1j), 2)
k = (1, 2)
start, direction = np.array([9 + 0.2j, 4.5 - 0.1j]), np.array([2.0, 1.0])

res = quad.asymptotic_leading(p, k, start, direction, depths=[0, 2, 4, 6, 8])
for s, d in zip(res["depths"], res["distance"]):
    print(f"depth {s}: |Theta_k - nu_k Omega_k| = {d:.3e}")
print("decay per unit depth (log):", res["slope"])

coef = res["values"][-1] @ WeightSpace(2, 2).omega(k)
print("Omega_k coefficient at depth 8:", coef)
print("closed product, omega - tau   :", weightfn.nu_k(k, p, consistent=True))
# the product with omega and -pi*i per variable misses by a sign and a q-shift
print("closed product, as printed    :", weightfn.nu_k(k, p))

# the limit is the value of an integral that factorizes over legs
print("leading integral:", quad.mu_integral(p, k).value)
