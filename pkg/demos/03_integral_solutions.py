# Integral solutions of the boundary qKZ system and a check of the equations they solve.
import numpy as np

from bqkz import qkz, quad
from bqkz.contour import find_gamma, in_sector
from bqkz.qseries import QBase
from bqkz.weightspace import Params, enumerate_I

p = Params(QBase(-0.4 + 0.3j), 0.8 + 0.1j, 0.3 + 0.1j, -0.2 + 0.3j, (1.5 + 0.2j, 1.4 - 0.1j), 2)
t = np.array([6.0 + 0.2j, 2.3 - 0.1j])

# t has to sit in the sector where both sides of every equation are defined
print(in_sector(t, "A_tilde_tau", p).margins)

settings = quad.QuadratureSettings(128)
for k in enumerate_I(p.M, p.N):
    print("k =", k, "base points", find_gamma(p, k).gamma)
    psi = quad.psi_solution(p, k, t, settings)
    print("  |Psi| =", np.abs(psi.value).max(), " quadrature error", psi.error)
    for r in (1, 2):
        print(f"  qKZ residual for a shift of t_{r}:", qkz.qkz_residual(p, k, t, r, settings))

# the solutions span the weight space
res = qkz.completeness_matrix(p, t, settings)
print("det", res["det"], "cond", res["cond"], "cond after column scaling", res["cond_scaled"])
