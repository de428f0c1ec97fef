# For spin-1/2 legs the Verma solutions descend to the finite-dimensional quotient.
import numpy as np

from bqkz import qkz, quad
from bqkz.qseries import QBase
from bqkz.weightspace import Params, finite_keys

p = Params(QBase(-0.5 + 0.2j), 1.2 + 0.1j, 0.3 + 0.1j, -0.2 + 0.3j, (0.5, 0.5), 1)
t = np.array([5.2 + 0.2j, 2.1 - 0.1j])

print("surviving multi-indices:", finite_keys(p.ell, p.M))
P = qkz.projection_matrix(p)
for r in (1, 2):
    A = qkz.projected_transport(p, r, t)
    print(f"projected A_{r}:\n", np.round(A, 5))
    print("  kernel preserved:", qkz.projection_commutation_residual(p, r, t))
    for k in finite_keys(p.ell, p.M):
        print("  projected qKZ residual, k =", k, qkz.projected_qkz_check(p, k, t, r, quad.QuadratureSettings(128)))
