"""R-, K- and L-operators on truncated tensor products of Verma modules.

A two-leg operator that preserves total weight is stored as a list of dense
blocks: ``blocks[m]`` acts on span{v_a (x) v_{m-a} : a = 0..m} and is indexed
by the depth ``a`` of the first leg.
"""
from functools import lru_cache

import numpy as np

from .errors import IllConditioned, ResidualTooLarge, SingularPoint
from .weightspace import verma_generators

RESIDUAL_GATE = 1e-10
COND_LIMIT = 1e8


def rbar_spinhalf(x, eta):
    """Spin-1/2 R-matrix on C^2 (x) C^2, basis (d1, d2) in kron order."""
    den = np.sinh(x + eta)
    if abs(den) < 1e-14:
        raise SingularPoint("x + eta is a multiple of pi*i")
    a = np.sinh(x) / den
    b = np.sinh(eta) / den
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0] = R[3, 3] = 1
    R[1, 1] = R[2, 2] = a
    R[1, 2] = R[2, 1] = b
    return R


def _leg_ops(ell, eta, D):
    Kp, E, F = verma_generators(ell, eta, D, eta)
    Km = np.diag(1 / np.diag(Kp))
    return {"E": Kp, "Einv": Km, "e": E, "f": F, "1": np.eye(D + 1, dtype=complex)}


def _coproducts(l1, l2, u, eta, D):
    """Evaluated coproduct and opposite coproduct of the four Chevalley generators.

    The first leg carries spectral parameter u, the second 0.
    """
    A = _leg_ops(l1, eta, D)
    B = _leg_ops(l2, eta, D)

    def kr(a, b):
        return np.kron(A[a], B[b])

    eu, emu = np.exp(u), np.exp(-u)
    # e_0 -> e^{-x} f_1, f_0 -> e^{x} e_1, e^{z h_0} -> e^{-z h_1}
    delta = {
        "f1": eu * kr("f", "E") + kr("1", "f"),
        "e0": emu * kr("f", "1") + kr("E", "f"),
        "e1": emu * kr("e", "1") + kr("Einv", "e"),
        "f0": eu * kr("e", "Einv") + kr("1", "e"),
    }
    delta_op = {
        "f1": eu * kr("f", "1") + kr("E", "f"),
        "e0": kr("1", "f") + emu * kr("f", "E"),
        "e1": kr("1", "e") + emu * kr("e", "Einv"),
        "f0": kr("Einv", "e") + eu * kr("e", "1"),
    }
    return delta, delta_op


def _block_positions(m, D):
    return [a * (D + 1) + (m - a) for a in range(m + 1)]


def blocks_to_dense(blocks, D):
    """Two-leg kron-space matrix (per-leg depth D) from weight blocks."""
    R = np.zeros(((D + 1) ** 2,) * 2, dtype=complex)
    for m, blk in enumerate(blocks):
        if m > 2 * D:
            break
        pos = _block_positions(m, D)
        for ia, a in enumerate(range(m + 1)):
            for ib, b in enumerate(range(m + 1)):
                if max(a, m - a, b, m - b) <= D:
                    R[pos[ia], pos[ib]] = blk[ia, ib]
    return R


@lru_cache(maxsize=8192)
def _solve_R_cached(l1, l2, x, M, eta):
    D = M + 1
    delta, delta_op = _coproducts(l1, l2, x, eta, D)
    s_f = 1 / max(1.0, abs(np.exp(x)))
    s_e = 1 / max(1.0, abs(np.exp(-x)))
    blocks = [np.ones((1, 1), dtype=complex)]
    worst = 0.0
    for m in range(1, M + 1):
        rows = _block_positions(m, D)
        cols = _block_positions(m - 1, D)
        X = np.hstack([s_f * delta["f1"][np.ix_(rows, cols)],
                       s_e * delta["e0"][np.ix_(rows, cols)]])
        Y = np.hstack([s_f * delta_op["f1"][np.ix_(rows, cols)] @ blocks[-1],
                       s_e * delta_op["e0"][np.ix_(rows, cols)] @ blocks[-1]])
        sv = np.linalg.svd(X, compute_uv=False)
        if sv[-1] <= sv[0] / COND_LIMIT:
            raise IllConditioned(f"intertwining system singular at x={x} (block {m})")
        Rt = np.linalg.lstsq(X.T, Y.T, rcond=None)[0]
        Rm = Rt.T
        worst = max(worst, np.linalg.norm(Rm @ X - Y) / max(np.linalg.norm(Y), 1e-300))
        blocks.append(Rm)
    for blk in blocks:
        blk.setflags(write=False)
    return tuple(blocks), worst


def solve_R(l1, l2, x, M, eta, check=True):
    """R^{l1 l2}(x) on all weight blocks m = 0..M.

    Built block by block from the intertwining conditions with the two
    weight-raising generators f_1 and e_0, normalized by R(v_0 (x) v_0) = v_0 (x) v_0.
    With ``check`` the residual of the stacked linear systems is gated.
    """
    blocks, res = _solve_R_cached(complex(l1), complex(l2), complex(x), int(M), complex(eta))
    if check and res > RESIDUAL_GATE:
        raise ResidualTooLarge(f"intertwining residual {res:.2e} at x={x}")
    return list(blocks)


def intertwining_residual(l1, l2, x, M, eta):
    """Worst relative residual of R Delta(a) = Delta^op(a) R over e_0, e_1, f_0, f_1, h_1.

    Only matrix entries between blocks of weight <= M are compared.
    """
    D = M + 1
    blocks = solve_R(l1, l2, x, M, eta, check=False)
    R = blocks_to_dense(blocks, D)
    delta, delta_op = _coproducts(complex(l1), complex(l2), complex(x), complex(eta), D)
    d1, d2 = np.divmod(np.arange((D + 1) ** 2), D + 1)
    low = np.flatnonzero(d1 + d2 <= M)
    worst = 0.0
    for a in delta:
        lhs = (R @ delta[a])[np.ix_(low, low)]
        rhs = (delta_op[a] @ R)[np.ix_(low, low)]
        scale = np.linalg.norm(lhs) + np.linalg.norm(rhs)
        worst = max(worst, np.linalg.norm(lhs - rhs) / scale)
    # h_1 commutes with R iff every block stays inside its own weight space
    off = R.copy()
    wt = d1 + d2
    off[wt[:, None] == wt[None, :]] = 0
    return max(worst, float(np.abs(off).max()))


def flip(blocks):
    """P R P: the same operator with the two tensor legs exchanged."""
    return [b[::-1, ::-1].copy() for b in blocks]


def r_inverse(l1, l2, x, M, eta):
    """Inverse of R^{l1 l2}(x) through unitarity: P R^{l2 l1}(-x) P."""
    return flip(solve_R(l2, l1, -x, M, eta))


def k_coefficients(ell, x, xi, d_max, eta):
    """Diagonal entries of K^ell(x; xi) on v_0, ..., v_{d_max}."""
    out = np.ones(d_max + 1, dtype=complex)
    for d in range(1, d_max + 1):
        j = d
        den = np.sinh(xi + x + (ell + 0.5 - j) * eta)
        if abs(den) < 1e-14:
            raise SingularPoint(f"K-matrix pole at x={x}")
        out[d] = out[d - 1] * np.sinh(xi - x + (ell + 0.5 - j) * eta) / den
    return out


def k_diag(ell, x, xi, d_max, eta):
    return np.diag(k_coefficients(ell, x, xi, d_max, eta))


def l_op(ell, x, D, eta):
    """L^ell(x) as a 2x2 array of single-leg matrices on span{v_0..v_D}.

    ``L[a][b]`` is the quantum-space operator with
    L(vbar_b (x) u) = sum_a vbar_a (x) L[a][b] u.
    """
    blocks = solve_R(0.5, ell, x, D + 1, eta)
    L = [[np.zeros((D + 1, D + 1), dtype=complex) for _ in range(2)] for _ in range(2)]
    for b in range(2):
        for d in range(D + 1):
            m = b + d
            for a in range(2):
                dp = m - a
                if 0 <= dp <= D:
                    L[a][b][dp, d] = blocks[m][a, b]
    return L


def quotient_leak(ell, x, M, eta):
    """Largest entry of R^{1/2, ell} mapping the submodule v_{a>=2} of leg 1 out of itself."""
    blocks = solve_R(0.5, ell, x, M, eta)
    worst = 0.0
    for m, blk in enumerate(blocks):
        if m >= 2:
            worst = max(worst, float(np.abs(blk[:2, 2:]).max()))
    return worst


def r_infinity(l1, l2, M, eta):
    """Diagonal blocks of lim R^{l1 l2}(x) as Re x -> infinity."""
    blocks = []
    for m in range(M + 1):
        a = np.arange(m + 1)
        b = m - a
        blocks.append(np.diag(np.exp(2 * (a * b - l1 * b - a * l2) * eta)).astype(complex))
    return blocks


def k_infinity(ell, xi, d_max, eta):
    d = np.arange(d_max + 1)
    return ((-1.0) ** d * np.exp(-d * (2 * xi + (2 * ell - d) * eta))).astype(complex)


def limits_infinity(l1, l2, xi, d_max, eta):
    """(R_inf blocks up to weight d_max, K_inf diagonal on leg 1)."""
    return r_infinity(l1, l2, d_max, eta), k_infinity(l1, xi, d_max, eta)


# ---- embedding into the N-leg weight space ---------------------------------

def embed_two_leg(blocks, i, j, space):
    """Dense matrix on the weight space of a two-leg operator on legs i, j (0-based).

    The first tensor factor of the operator sits on leg i.
    """
    n = space.dim
    out = np.zeros((n, n), dtype=complex)
    for col, d in enumerate(space.comps):
        a, m = d[i], d[i] + d[j]
        blk = blocks[m]
        for ap in range(m + 1):
            dn = list(d)
            dn[i], dn[j] = ap, m - ap
            out[space.index[tuple(dn)], col] = blk[ap, a]
    return out


def embed_diag(values, i, space):
    """Dense diagonal matrix acting on leg i by v_d -> values[d] v_d."""
    return np.diag([values[d[i]] for d in space.comps]).astype(complex)
