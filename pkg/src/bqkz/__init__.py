"""Integral solutions of boundary qKZ equations for tensor products of Verma modules."""
from .errors import BqkzError
from .qseries import QBase, SeriesTolerance, qpoch, theta, pm_product
from .weightspace import Params, WeightSpace, enumerate_I, zeta, zeta_inv, position_index
from .rkmat import solve_R, k_diag, l_op
from .bethe import btilde, bethe_vector, bethe_vector_closed
from .weightfn import w_fn, phi_k, nu_k
from .contour import find_gamma, in_domain, in_sector
from .quad import QuadratureSettings, theta_solution, psi_solution, asymptotic_leading
from .qkz import transport, qkz_residual, completeness_matrix

__all__ = [
    "BqkzError",
    "QBase", "SeriesTolerance", "qpoch", "theta", "pm_product",
    "Params", "WeightSpace", "enumerate_I", "zeta", "zeta_inv", "position_index",
    "solve_R", "k_diag", "l_op",
    "btilde", "bethe_vector", "bethe_vector_closed",
    "w_fn", "phi_k", "nu_k",
    "find_gamma", "in_domain", "in_sector",
    "QuadratureSettings", "theta_solution", "psi_solution", "asymptotic_leading",
    "transport", "qkz_residual", "completeness_matrix",
]
