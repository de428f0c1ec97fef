"""Monodromy operators, boundary creation operators and Bethe-vector coefficients.

Operators on the quantum space live on the kron product of N legs, each
truncated to span{v_0, ..., v_D}; leg 1 is the slowest-varying index.
"""
from itertools import combinations, permutations, product

import numpy as np

from .errors import SingularPoint
from .rkmat import k_coefficients, l_op
from .weightspace import WeightSpace, enumerate_I, occupation


def distinct_rearrangements(k):
    return sorted(set(permutations(k)))


def leg_embed(op, s, N, D):
    """Kron-space matrix of a single-leg operator acting on leg s (0-based)."""
    out = np.eye(1, dtype=complex)
    for r in range(N):
        out = np.kron(out, op if r == s else np.eye(D + 1))
    return out


def vacuum(N, D):
    v = np.zeros((D + 1) ** N, dtype=complex)
    v[0] = 1
    return v


def monodromy(x, t, params, D):
    """T(x;t) = L_{01}(x - t_1) ... L_{0N}(x - t_N) as a 2x2 list of kron-space matrices."""
    N, eta = params.N, params.eta
    T = None
    for s in range(N):
        L = l_op(params.ell[s], x - t[s], D, eta)
        Ls = [[leg_embed(L[a][b], s, N, D) for b in range(2)] for a in range(2)]
        if T is None:
            T = Ls
        else:
            T = [[T[a][0] @ Ls[0][b] + T[a][1] @ Ls[1][b] for b in range(2)] for a in range(2)]
    return T


def monodromy_inverse_reflected(x, t, params, D):
    """T(-x;t)^{-1}, assembled from L(y)^{-1} = L(-y) without numerical inversion."""
    N, eta = params.N, params.eta
    T = None
    for s in reversed(range(N)):
        L = l_op(params.ell[s], x + t[s], D, eta)
        Ls = [[leg_embed(L[a][b], s, N, D) for b in range(2)] for a in range(2)]
        if T is None:
            T = Ls
        else:
            T = [[T[a][0] @ Ls[0][b] + T[a][1] @ Ls[1][b] for b in range(2)] for a in range(2)]
    return T


def b_op(x, t, params, D):
    return monodromy(x, t, params, D)[0][1]


def d_op(x, t, params, D):
    return monodromy(x, t, params, D)[1][1]


def d_vacuum_eigenvalue(x, t, params):
    eta = params.eta
    out = 1.0 + 0j
    for ts, l in zip(t, params.ell):
        out *= np.sinh(ts - x - (0.5 - l) * eta) / np.sinh(ts - x - (0.5 + l) * eta)
    return out


def reflection_monodromy(x, t, params, D):
    """The double-row monodromy T(-x)^{-1} Kbar(x; xi_-) T(x) as a 2x2 list."""
    Ti = monodromy_inverse_reflected(x, t, params, D)
    T = monodromy(x, t, params, D)
    kb = k_coefficients(0.5, x, params.xi_minus, 1, params.eta)
    return [[sum(Ti[a][c] * kb[c] @ T[c][b] for c in range(2)) for b in range(2)]
            for a in range(2)]


def btilde(x, t, params, D):
    """Boundary creation operator, written through B and D of the one-row monodromy."""
    eta, xtm = params.eta, params.xi_tilde_minus
    out = 0
    for eps in (1, -1):
        c = eps * np.sinh(xtm - eps * x) / np.sinh(eta)
        out = out + c * b_op(-eps * x - eta / 2, t, params, D) @ d_op(eps * x - eta / 2, t, params, D)
    return out


def btilde_via_reflection(x, t, params, D):
    """The same operator, read off from the top-right entry of the double-row monodromy."""
    eta, xtm = params.eta, params.xi_tilde_minus
    pref = np.sinh(2 * x) / np.sinh(2 * x + eta) * np.sinh(xtm - x) / np.sinh(eta)
    for ts, l in zip(t, params.ell):
        pref *= np.sinh(ts - x + l * eta) / np.sinh(ts - x - l * eta)
    return pref * reflection_monodromy(-x - eta / 2, t, params, D)[0][1]


def btilde_via_product_form(x, t, params, D):
    """The top-right entry rewritten with D(-x-eta)B(x) and B(-x-eta)D(x)."""
    eta, xm = params.eta, params.xi_minus
    y = -x - eta / 2
    pref = 1.0 + 0j
    for ts, l in zip(t, params.ell):
        pref *= np.sinh(ts + y + (0.5 - l) * eta) / np.sinh(ts + y + (0.5 + l) * eta)
    calB = pref * (d_op(-y - eta, t, params, D) @ b_op(y, t, params, D)
                   - np.sinh(xm - y) / np.sinh(xm + y) * b_op(-y - eta, t, params, D) @ d_op(y, t, params, D))
    pref2 = np.sinh(2 * x) / np.sinh(2 * x + eta) * np.sinh(params.xi_tilde_minus - x) / np.sinh(eta)
    for ts, l in zip(t, params.ell):
        pref2 *= np.sinh(ts - x + l * eta) / np.sinh(ts - x - l * eta)
    return pref2 * calB


def _to_weight_space(vec, N, M, D):
    space = WeightSpace(N, M)
    idx = [np.ravel_multi_index(d, (D + 1,) * N) for d in space.comps]
    return vec[idx]


def bethe_vector(xs, t, params):
    """B~(x_1;t) ... B~(x_M;t) Omega, as coefficients over the weight-M basis."""
    M, N = len(xs), params.N
    D = max(M, 1)
    v = vacuum(N, D)
    for x in reversed(xs):
        v = btilde(x, t, params, D) @ v
    return _to_weight_space(v, N, M, D)


def ordinary_bethe_vector(xs, t, params):
    """B(x_1;t) ... B(x_M;t) Omega over the weight-M basis."""
    M, N = len(xs), params.N
    D = max(M, 1)
    v = vacuum(N, D)
    for x in reversed(xs):
        v = b_op(x, t, params, D) @ v
    return _to_weight_space(v, N, M, D)


# ---- closed forms ----------------------------------------------------------

def _ratio(num, den):
    if np.any(np.abs(den) < 1e-300):
        raise SingularPoint("vanishing denominator")
    return num / den


def beta_coeffs(k, xs, t, params):
    """Coefficient of Omega_k in the boundary Bethe vector, by the explicit double sum."""
    X = np.asarray(xs, dtype=complex).reshape(1, -1)
    return complex(_beta_columns([tuple(k)], X, t, params)[0, 0])


def beta_matrix(X, t, params):
    """All coefficients of the boundary Bethe vector at many points.

    ``X`` has shape (npoints, M); the result has shape (npoints, dim V(M)).
    """
    X = np.asarray(X, dtype=complex)
    return _beta_columns(enumerate_I(X.shape[1], params.N), X, t, params)


def _beta_columns(keys, X, t, params):
    npts, M = X.shape
    eta, ell, xtm = params.eta, params.ell, params.xi_tilde_minus
    N = params.N
    t = np.asarray(t, dtype=complex)
    out = np.zeros((npts, len(keys)), dtype=complex)
    signs = list(product((1, -1), repeat=M))
    # per-variable pieces that do not depend on the rearrangement
    for col, k in enumerate(keys):
        pref = np.exp(sum(occupation(k, ki) / 2 - ell[ki - 1] for ki in k) * eta)
        total = np.zeros(npts, dtype=complex)
        for eps in signs:
            ex = X * np.array(eps)
            common = np.ones(npts, dtype=complex)
            for i in range(M):
                common *= eps[i] * np.sinh(ex[:, i] - xtm)
                for s in range(N):
                    common *= _ratio(np.sinh(t[s] - ex[:, i] + ell[s] * eta),
                                     np.sinh(t[s] - ex[:, i] - ell[s] * eta))
                for j in range(i + 1, M):
                    z = ex[:, i] + ex[:, j]
                    common *= _ratio(np.sinh(z + eta), np.sinh(z))
            for m in distinct_rearrangements(k):
                term = common.copy()
                for i in range(M):
                    mi = m[i] - 1
                    term /= np.sinh(t[mi] + ex[:, i] - ell[mi] * eta)
                    for s in range(mi + 1, N):
                        term *= _ratio(np.sinh(t[s] + ex[:, i] + ell[s] * eta),
                                       np.sinh(t[s] + ex[:, i] - ell[s] * eta))
                for i in range(M):
                    for j in range(M):
                        if m[i] < m[j]:
                            z = ex[:, i] - ex[:, j]
                            term *= _ratio(np.sinh(z - eta), np.sinh(z))
                total += term
        out[:, col] = pref * total
    return out


def typeA_coeffs(d, xs, t, ell, eta, method="closed_form"):
    """Coefficient of v_d in B(x_1;t)...B(x_M;t)Omega for the one-row monodromy."""
    xs = [complex(x) for x in xs]
    if method == "closed_form":
        return _typeA_closed(tuple(d), xs, list(t), list(ell), eta)
    if method == "recursion":
        return _typeA_recursion(tuple(d), xs, list(t), list(ell), eta)
    raise ValueError(f"unknown method {method!r}")


def _typeA_closed(d, xs, t, ell, eta):
    M, N = len(xs), len(d)
    if sum(d) != M:
        return 0j
    k = tuple(r for r in range(1, N + 1) for _ in range(d[r - 1]))
    total = 0j
    for m in distinct_rearrangements(k):
        term = 1 + 0j
        for i in range(M):
            mi = m[i] - 1
            term *= -np.exp((d[mi] / 2 - ell[mi]) * eta) * np.sinh(eta) / np.sinh(
                t[mi] - xs[i] - (0.5 + ell[mi]) * eta)
            for s in range(mi + 1, N):
                term *= np.sinh(t[s] - xs[i] - (0.5 - ell[s]) * eta) / np.sinh(
                    t[s] - xs[i] - (0.5 + ell[s]) * eta)
        for i in range(M):
            for j in range(M):
                if m[i] < m[j]:
                    term *= np.sinh(xs[i] - xs[j] + eta) / np.sinh(xs[i] - xs[j])
        total += term
    return total


def _typeA_recursion(d, xs, t, ell, eta):
    M, N = len(xs), len(d)
    if N == 0:
        return 1 + 0j if M == 0 else 0j
    dN, lN, tN = d[-1], ell[-1], t[-1]
    if dN > M:
        return 0j
    total = 0j
    for Jc in combinations(range(M), dN):
        J = [i for i in range(M) if i not in Jc]
        term = 1 + 0j
        for i in Jc:
            term *= -np.sinh(eta) / np.sinh(tN - xs[i] - (0.5 + lN) * eta)
        for i in J:
            term *= np.sinh(tN - xs[i] - (0.5 - lN) * eta) / np.sinh(tN - xs[i] - (0.5 + lN) * eta)
            for j in Jc:
                term *= np.sinh(xs[i] - xs[j] + eta) / np.sinh(xs[i] - xs[j])
        term *= _typeA_recursion(d[:-1], [xs[i] for i in J], t[:-1], ell[:-1], eta)
        total += term
    return np.exp(dN * (dN / 2 - lN) * eta) * total


def bethe_vector_closed(xs, t, params):
    return beta_matrix(np.asarray(xs, dtype=complex).reshape(1, -1), t, params)[0]


def bethe_vector_from_ordinary(xs, t, params):
    """Boundary Bethe vector expanded as an eps-sum of one-row Bethe vectors.

    The one-row vectors are evaluated with the type-A closed form.
    """
    M, eta, xtm = len(xs), params.eta, params.xi_tilde_minus
    space = WeightSpace(params.N, M)
    out = np.zeros(space.dim, dtype=complex)
    for eps in product((1, -1), repeat=M):
        ex = [e * x for e, x in zip(eps, xs)]
        c = 1 + 0j
        for i in range(M):
            c *= eps[i] * np.sinh(xtm - ex[i]) / np.sinh(eta)
            for ts, l in zip(t, params.ell):
                c *= np.sinh(ts - ex[i] + l * eta) / np.sinh(ts - ex[i] - l * eta)
            for j in range(i + 1, M):
                c *= np.sinh(ex[i] + ex[j] + eta) / np.sinh(ex[i] + ex[j])
        args = [-y - eta / 2 for y in ex]
        for col, d in enumerate(space.comps):
            out[col] += c * _typeA_closed(d, args, list(t), list(params.ell), eta)
    return out
