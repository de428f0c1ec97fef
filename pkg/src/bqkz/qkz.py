"""Transport operators of the boundary qKZ system and the residual harness."""
import numpy as np

from .contour import in_sector
from .errors import NotHalfInteger, SectorViolation
from .quad import QuadratureSettings, psi_solution
from .rkmat import embed_diag, embed_two_leg, k_coefficients, k_infinity, r_infinity, solve_R
from .weightfn import varphi
from .weightspace import WeightSpace, enumerate_I, finite_keys, is_half_integer


def transport_factors(p, r, t):
    """Ordered factors of A_r(t) as (kind, legs, argument) triples, legs 1-based.

    ``R`` factors act with their first tensor factor on the first listed leg;
    ``Rinv`` is the inverse of R on the listed legs.
    """
    N, tau = p.N, p.tau
    tr = t[r - 1]
    out = [("R", (r, s), tr - t[s - 1] + tau) for s in range(r + 1, N + 1)]
    out.append(("K+", (r,), tr + tau / 2))
    out += [("R", (s, r), t[s - 1] + tr) for s in range(N, r, -1)]
    out += [("R", (s, r), t[s - 1] + tr) for s in range(r - 1, 0, -1)]
    out.append(("K-", (r,), tr))
    out += [("Rinv", (s, r), t[s - 1] - tr) for s in range(1, r)]
    return out


def _factor_matrix(p, kind, legs, x, space):
    M, eta, ell = space.M, p.eta, p.ell
    if kind == "R":
        i, j = legs
        return embed_two_leg(solve_R(ell[i - 1], ell[j - 1], x, M, eta), i - 1, j - 1, space)
    if kind == "Rinv":
        # R_{ij}(x)^{-1} = R_{ji}(-x): the flipped-weight R with legs exchanged
        i, j = legs
        return embed_two_leg(solve_R(ell[j - 1], ell[i - 1], -x, M, eta), j - 1, i - 1, space)
    (i,) = legs
    xi = p.xi_plus if kind == "K+" else p.xi_minus
    return embed_diag(k_coefficients(ell[i - 1], x, xi, M, eta), i - 1, space)


def transport(p, r, t):
    """A_r(t) on the weight-M subspace, as a dense matrix in the lexicographic basis."""
    t = np.asarray(t, dtype=complex)
    space = WeightSpace(p.N, p.M)
    A = np.eye(space.dim, dtype=complex)
    for kind, legs, x in transport_factors(p, r, t):
        A = A @ _factor_matrix(p, kind, legs, x, space)
    return A


def asymptotic_transport(p, r):
    """Limit of A_r(t) deep in the sector: K_inf(xi_+) K_inf(xi_-) prod_{s>r} R_inf^2."""
    space = WeightSpace(p.N, p.M)
    M, eta, ell = p.M, p.eta, p.ell
    l = ell[r - 1]
    diag = np.ones(space.dim, dtype=complex)
    kp, km = k_infinity(l, p.xi_plus, M, eta), k_infinity(l, p.xi_minus, M, eta)
    for col, d in enumerate(space.comps):
        diag[col] *= kp[d[r - 1]] * km[d[r - 1]]
        for s in range(r + 1, p.N + 1):
            blk = r_infinity(l, ell[s - 1], d[r - 1] + d[s - 1], eta)[-1]
            diag[col] *= blk[d[r - 1], d[r - 1]] ** 2
    return np.diag(diag)


def varphi_diagonal(p, r):
    return np.diag([varphi(k, r, p) for k in enumerate_I(p.M, p.N)])


def compatibility_residual(p, r, s, t):
    """Relative size of A_r(t + tau e_s) A_s(t) - A_s(t + tau e_r) A_r(t)."""
    t = np.asarray(t, dtype=complex)
    ts, tr = t.copy(), t.copy()
    ts[s - 1] += p.tau
    tr[r - 1] += p.tau
    lhs = transport(p, r, ts) @ transport(p, s, t)
    rhs = transport(p, s, tr) @ transport(p, r, t)
    return np.abs(lhs - rhs).max() / np.abs(lhs).max()


def qkz_residual(p, k, t, r, settings=QuadratureSettings(), require_sector=True):
    """max|Psi_k(t + tau e_r) - A_r(t) Psi_k(t)| / max|Psi_k(t + tau e_r)|."""
    t = np.asarray(t, dtype=complex)
    if len(k) == 0:
        return 0.0
    if require_sector:
        sec = in_sector(t, "A_tilde_tau", p)
        if not sec.ok:
            raise SectorViolation(f"t={t} outside A_tilde_tau: {sec.violated}")
    shifted = t.copy()
    shifted[r - 1] += p.tau
    psi_t = psi_solution(p, k, t, settings).value
    psi_s = psi_solution(p, k, shifted, settings).value
    rhs = transport(p, r, t) @ psi_t
    return float(np.abs(psi_s - rhs).max() / np.abs(psi_s).max())


def completeness_matrix(p, t, settings=QuadratureSettings()):
    """Columns Psi_k(t), k in lexicographic order, with |det| and condition numbers.

    ``cond_scaled`` is the condition number after normalizing every column,
    which removes the freedom of rescaling each solution by a constant.
    """
    keys = enumerate_I(p.M, p.N)
    mat = np.column_stack([psi_solution(p, k, t, settings).value for k in keys])
    scaled = mat / np.linalg.norm(mat, axis=0)
    return {
        "matrix": mat,
        "det": complex(np.linalg.det(mat)),
        "cond": float(np.linalg.cond(mat)),
        "cond_scaled": float(np.linalg.cond(scaled)),
    }


def projection_matrix(p):
    """Rows select the multi-indices that survive in the finite-dimensional quotient."""
    for l in p.ell:
        if not is_half_integer(l):
            raise NotHalfInteger(f"{l} is not in (1/2)Z_{{>0}}")
    keys = enumerate_I(p.M, p.N)
    kept = finite_keys(p.ell, p.M)
    P = np.zeros((len(kept), len(keys)))
    for a, k in enumerate(kept):
        P[a, keys.index(k)] = 1
    return P


def projected_transport(p, r, t):
    """The transport operator induced on the finite-dimensional quotient."""
    P = projection_matrix(p)
    return P @ transport(p, r, t) @ P.T


def projection_commutation_residual(p, r, t, rng=None):
    """max |pr(A v) - Abar(pr v)| over a random v, relative to |A v|."""
    rng = np.random.default_rng(0) if rng is None else rng
    P = projection_matrix(p)
    A = transport(p, r, t)
    v = rng.normal(size=A.shape[0]) + 1j * rng.normal(size=A.shape[0])
    lhs = P @ (A @ v)
    rhs = projected_transport(p, r, t) @ (P @ v)
    return float(np.abs(lhs - rhs).max() / np.abs(A @ v).max())


def projected_qkz_check(p, k, t, r, settings=QuadratureSettings()):
    """Residual of the projected equation pr Psi_k(t + tau e_r) = Abar_r(t) pr Psi_k(t)."""
    if tuple(k) not in finite_keys(p.ell, p.M):
        raise ValueError(f"k={k} does not label a finite-dimensional solution")
    if p.eta.real <= 0:
        raise ValueError("the finite-dimensional projection needs Re(eta) > 0")
    t = np.asarray(t, dtype=complex)
    shifted = t.copy()
    shifted[r - 1] += p.tau
    P = projection_matrix(p)
    a = P @ psi_solution(p, k, t, settings).value
    b = P @ psi_solution(p, k, shifted, settings).value
    return float(np.abs(b - projected_transport(p, r, t) @ a).max() / np.abs(b).max())
