"""Residual checks for every identity the package implements.

Each check returns report rows ``{check, anchor, params, residual, tolerance, pass}``.
``anchor`` names the identity in words so a report can be traced back to it.
"""
from itertools import product as iproduct

import numpy as np

from . import bethe, contour, qkz, quad, rkmat, weightfn
from .errors import IllConditioned
from .qseries import QBase
from .weightspace import Params, WeightSpace, enumerate_I, occupation

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def row(check, anchor, params, residual, tolerance, informational=False):
    out = {
        "check": check,
        "anchor": anchor,
        "params": params,
        "residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(residual < tolerance),
    }
    if informational:
        out["informational"] = True
    return out


def _c(z):
    return [float(np.real(z)), float(np.imag(z))]


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.abs(a - b).max() / max(np.abs(a).max(), np.abs(b).max(), 1e-300))


# ---- random admissible data --------------------------------------------------

def random_weight(rng):
    return complex(rng.uniform(0.3, 1.7), rng.uniform(-0.3, 0.3))


def random_eta(rng):
    return complex(rng.uniform(0.25, 0.9), rng.uniform(-0.4, 0.4))


def random_spectral(rng, scale=0.8):
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_params(rng, N, M, tau=None):
    tau = complex(rng.uniform(-1.2, -0.4), rng.uniform(-0.5, 0.5)) if tau is None else tau
    return Params(QBase(tau), random_eta(rng), random_spectral(rng, 0.5), random_spectral(rng, 0.5),
                  tuple(random_weight(rng) for _ in range(N)), M)


# ---- R, K and L identities ----------------------------------------------------

def ybe_residual(ells, x, y, M, eta):
    l1, l2, l3 = ells
    sp = WeightSpace(3, M)
    R12 = rkmat.embed_two_leg(rkmat.solve_R(l1, l2, x, M, eta), 0, 1, sp)
    R13 = rkmat.embed_two_leg(rkmat.solve_R(l1, l3, x + y, M, eta), 0, 2, sp)
    R23 = rkmat.embed_two_leg(rkmat.solve_R(l2, l3, y, M, eta), 1, 2, sp)
    return rel(R12 @ R13 @ R23, R23 @ R13 @ R12)


def reflection_residual(l1, l2, x, y, xi, M, eta):
    sp = WeightSpace(2, M)

    def R(z, a, b):
        # R^{a b} written on V^{l1} (x) V^{l2}; R^{l2 l1} is conjugated by the flip
        if (a, b) == (l1, l2):
            return rkmat.embed_two_leg(rkmat.solve_R(l1, l2, z, M, eta), 0, 1, sp)
        return rkmat.embed_two_leg(rkmat.solve_R(l2, l1, z, M, eta), 1, 0, sp)

    K1 = rkmat.embed_diag(rkmat.k_coefficients(l1, x, xi, M, eta), 0, sp)
    K2 = rkmat.embed_diag(rkmat.k_coefficients(l2, y, xi, M, eta), 1, sp)
    lhs = R(x - y, l1, l2) @ K1 @ R(x + y, l1, l2) @ K2
    rhs = K2 @ R(x + y, l1, l2) @ K1 @ R(x - y, l2, l1)
    return rel(lhs, rhs)


def unitarity_residual(l1, l2, x, M, eta):
    A = rkmat.solve_R(l1, l2, x, M, eta)
    B = rkmat.r_inverse(l1, l2, x, M, eta)
    return max(np.abs(a @ b - np.eye(len(a))).max() for a, b in zip(A, B))


def p_symmetry_residual(l1, l2, x, M, eta):
    A = rkmat.solve_R(l1, l2, x, M, eta)
    B = rkmat.flip(rkmat.solve_R(l2, l1, x, M, eta))
    return max(rel(a, b) for a, b in zip(A, B))


def spin_half_residual(x, eta):
    blocks = rkmat.solve_R(0.5, 0.5, x, 2, eta)
    dense = np.zeros((4, 4), dtype=complex)
    for d1, d2 in iproduct(range(2), repeat=2):
        m = d1 + d2
        for a in range(2):
            if 0 <= m - a <= 1:
                dense[2 * a + (m - a), 2 * d1 + d2] = blocks[m][a, d1]
    return float(np.abs(dense - rkmat.rbar_spinhalf(x, eta)).max())


def _aux_pair(op2x2, slot, nq):
    """Dense operator on C^2 (x) C^2 (x) Q from a 2x2 array of Q-operators on aux ``slot``."""
    out = np.zeros((4 * nq, 4 * nq), dtype=complex)
    for a, b in iproduct(range(2), repeat=2):
        E = np.zeros((2, 2))
        E[a, b] = 1
        aux = np.kron(E, np.eye(2)) if slot == 0 else np.kron(np.eye(2), E)
        out += np.kron(aux, op2x2[a][b])
    return out


def _low_columns(N, D, wmax):
    depths = np.array(list(iproduct(range(D + 1), repeat=N)))
    q = np.flatnonzero(depths.sum(axis=1) <= wmax)
    return np.concatenate([q + j * (D + 1) ** N for j in range(4)])


def rll_residual(ell, x, y, eta, D=4):
    nq = D + 1
    L0 = _aux_pair(rkmat.l_op(ell, x, D, eta), 0, nq)
    L1 = _aux_pair(rkmat.l_op(ell, y, D, eta), 1, nq)
    R = np.kron(rkmat.rbar_spinhalf(x - y, eta), np.eye(nq))
    cols = _low_columns(1, D, D - 2)
    return rel((R @ L0 @ L1)[:, cols], (L1 @ L0 @ R)[:, cols])


def crossing_residual(ell, x, eta, D=3):
    L = rkmat.l_op(ell, x, D, eta)
    Lc = rkmat.l_op(ell, -x - eta, D, eta)
    f = np.sinh(x + (0.5 - ell) * eta) / np.sinh(x + (0.5 + ell) * eta)
    worst = 0.0
    for a, b in iproduct(range(2), repeat=2):
        # (sigma_y M^t sigma_y)_{ab} = sum_{cd} sy[a,c] M[d][c] sy[d,b]
        rhs = sum(SIGMA_Y[a, c] * Lc[d][c] * SIGMA_Y[d, b] for c, d in iproduct(range(2), repeat=2))
        worst = max(worst, np.abs(L[a][b][:D, :D] - f * rhs[:D, :D]).max())
    return worst / max(np.abs(L[a][b]).max() for a, b in iproduct(range(2), repeat=2))


def rtt_residual(p, x, y, t, D=3):
    nq = (D + 1) ** p.N
    T0 = _aux_pair(bethe.monodromy(x, t, p, D), 0, nq)
    T1 = _aux_pair(bethe.monodromy(y, t, p, D), 1, nq)
    R = np.kron(rkmat.rbar_spinhalf(x - y, p.eta), np.eye(nq))
    cols = _low_columns(p.N, D, D - 2)
    return rel((R @ T0 @ T1)[:, cols], (T1 @ T0 @ R)[:, cols])


def rtrt_residual(p, x, y, t, D=5):
    nq = (D + 1) ** p.N
    T0 = _aux_pair(bethe.reflection_monodromy(x, t, p, D), 0, nq)
    T1 = _aux_pair(bethe.reflection_monodromy(y, t, p, D), 1, nq)
    Rm = np.kron(rkmat.rbar_spinhalf(x - y, p.eta), np.eye(nq))
    Rp = np.kron(rkmat.rbar_spinhalf(x + y, p.eta), np.eye(nq))
    cols = _low_columns(p.N, D, 1)
    return rel((Rm @ T0 @ Rp @ T1)[:, cols], (T1 @ Rp @ T0 @ Rm)[:, cols])


def algebra_suite(rng, draws=20, M=3):
    rows = []
    n = 0
    while n < draws:
        eta = random_eta(rng)
        ells = [random_weight(rng) for _ in range(3)]
        x, y, xi = random_spectral(rng), random_spectral(rng), random_spectral(rng, 0.5)
        info = {"eta": _c(eta), "ell": [_c(l) for l in ells], "x": _c(x), "y": _c(y)}
        try:
            p = Params(QBase(-0.5), eta, xi, xi, tuple(ells[:2]), 1)
            t = [random_spectral(rng) for _ in range(2)]
            res = [
                ("yang-baxter", "Yang-Baxter equation", ybe_residual(ells, x, y, M, eta)),
                ("reflection", "reflection equation with diagonal K", reflection_residual(ells[0], ells[1], x, y, xi, M, eta)),
                ("unitarity", "R(x)^{-1} = P R21(-x) P", unitarity_residual(ells[0], ells[1], x, M, eta)),
                ("p-symmetry", "P R21(x) P = R(x)", p_symmetry_residual(ells[0], ells[1], x, M, eta)),
                ("rll", "RLL relation", rll_residual(ells[0], x, y, eta)),
                ("crossing", "crossing symmetry of L", crossing_residual(ells[0], x, eta)),
                ("rtt", "RTT relation", rtt_residual(p, x, y, t)),
                ("rtrt", "boundary reflection algebra for the double-row monodromy", rtrt_residual(p, x, y, t)),
                ("spin-half", "spin-1/2 R-matrix entries", spin_half_residual(x, eta)),
            ]
        except IllConditioned:
            continue
        n += 1
        for name, anchor, r in res:
            rows.append(row(name, anchor, info, r, 1e-12 if name == "spin-half" else 1e-10))
    return rows


# ---- weight functions ----------------------------------------------------------

def fgh_shift_residuals(p, x, t, r, k, i):
    """Defects of the single-variable difference equations for F, g, h and u."""
    eta, tau = p.eta, p.tau
    t = np.asarray(t, dtype=complex)
    tr = t.copy()
    tr[r - 1] += tau
    l = p.ell[r - 1]
    sh = np.sinh
    out = {}
    pred = np.exp(4 * l * eta)
    for sgn in (1, -1):
        pred *= sh(t[r - 1] + sgn * x - l * eta + tau) / sh(t[r - 1] + sgn * x + l * eta + tau)
    out["F t-shift"] = rel(weightfn.F_fn(x, tr, p), pred * weightfn.F_fn(x, t, p))
    pred = 1 + 0j
    for ts, ls in zip(t, p.ell):
        pred *= sh(ts - x - ls * eta + tau) / sh(ts - x + ls * eta + tau)
        pred *= sh(ts + x + ls * eta) / sh(ts + x - ls * eta)
    out["F x-shift"] = rel(weightfn.F_fn(x - tau, t, p), pred * weightfn.F_fn(x, t, p))
    xp, xm = p.xi_tilde_plus, p.xi_tilde_minus
    pred = (np.exp(-2 * tau) * np.exp(-2 * (xp + xm)) * sh(x + xp) / sh(x - xp - tau)
            * sh(x + xm) / sh(x - xm - tau))
    out["g x-shift"] = rel(weightfn.g_fn(x - tau, p), pred * weightfn.g_fn(x, p))
    pred = np.exp(2 * eta) * sh(x - tau) / sh(x) * sh(x - eta) / sh(x + eta - tau)
    out["h x-shift"] = rel(weightfn.h_fn(x - tau, p), pred * weightfn.h_fn(x, p))
    M, ki = len(k), k[i - 1]
    if r < ki:
        fac = 1
    elif r == ki:
        fac = np.exp(2 * (p.xi_plus + p.xi_minus - eta) + 4 * (sum(p.ell[ki:]) - M + i) * eta)
    else:
        fac = np.exp(-4 * l * eta)
    out["u t-shift"] = rel(weightfn.u_fn(k, i, x, tr, p), fac * weightfn.u_fn(k, i, x, t, p))
    pred = np.exp(2 * tau) * np.exp(2 * (xp + xm) - 4 * (M - i) * eta)
    out["u x-shift"] = rel(weightfn.u_fn(k, i, x - tau, t, p), pred * weightfn.u_fn(k, i, x, t, p))
    return out


def weightfn_suite(rng, draws=50):
    rows = []
    for _ in range(draws):
        N, M = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        p = random_params(rng, N, M)
        t = np.sort(rng.uniform(0.3, 2.5, N))[::-1] + 1j * rng.uniform(-0.5, 0.5, N)
        k = enumerate_I(M, N)[int(rng.integers(len(enumerate_I(M, N))))]
        xs = np.array([random_spectral(rng) for _ in range(M)])
        r, i, j = int(rng.integers(1, N + 1)), int(rng.integers(1, M + 1)), int(rng.integers(M))
        info = {"N": N, "M": M, "k": list(k), "r": r}
        for name, res in fgh_shift_residuals(p, xs[0], t, r, k, i).items():
            rows.append(row(name, "building-block difference equation", info, res, 1e-10))
        rt, rx = weightfn.w_shift_residuals(k, xs, t, p, r=r, j=j)
        rows.append(row("w t-shift", "weight-function difference equation in t", info, rt, 1e-10))
        rows.append(row("w x-shift", "weight-function difference equation in x", info, rx, 1e-10))
        a = weightfn.w_fn(k, xs, t, p, "definition")
        b = weightfn.w_fn(k, xs, t, p, "expanded")
        rows.append(row("w dual route", "weight function: definition vs cancelled form", info, rel(a, b), 1e-11))
        t2 = t.copy()
        t2[r - 1] += p.tau
        rows.append(row("Phi shift", "scalar difference equation for Phi_k", info,
                        rel(weightfn.phi_k(k, t2, p), weightfn.varphi(k, r, p) * weightfn.phi_k(k, t, p)), 1e-10))
    return rows


# ---- Bethe vectors ----------------------------------------------------------------

def bethe_suite(rng, draws=10):
    rows = []
    for M, N in iproduct(range(1, 4), range(1, 4)):
        for _ in range(draws):
            p = random_params(rng, N, M)
            t = [random_spectral(rng) for _ in range(N)]
            xs = [random_spectral(rng) for _ in range(M)]
            info = {"M": M, "N": N}
            op = bethe.bethe_vector(xs, t, p)
            rows.append(row("bethe closed form", "boundary Bethe vector expansion coefficients", info,
                            rel(op, bethe.bethe_vector_closed(xs, t, p)), 1e-10))
            rows.append(row("bethe via one-row vectors", "boundary vector as eps-sum of one-row vectors", info,
                            rel(op, bethe.bethe_vector_from_ordinary(xs, t, p)), 1e-10))
            sp = WeightSpace(N, M)
            closed = np.array([bethe.typeA_coeffs(d, xs, t, p.ell, p.eta) for d in sp.comps])
            rec = np.array([bethe.typeA_coeffs(d, xs, t, p.ell, p.eta, "recursion") for d in sp.comps])
            ordinary = bethe.ordinary_bethe_vector(xs, t, p)
            rows.append(row("type-A recursion", "one-row coefficients: recursion vs closed form", info,
                            rel(rec, closed), 1e-10))
            rows.append(row("type-A operator", "one-row coefficients: operator product vs closed form", info,
                            rel(ordinary, closed), 1e-10))
    p = random_params(rng, 2, 1)
    x, t = random_spectral(rng), [random_spectral(rng) for _ in range(2)]
    A = bethe.btilde(x, t, p, 3)
    cols = [0, 1, 4]  # total weight <= 1 in the depth-3 kron space of two legs
    rows.append(row("btilde reflection route", "creation operator from the double-row monodromy", {"N": 2},
                    rel(A[:, cols], bethe.btilde_via_reflection(x, t, p, 3)[:, cols]), 1e-10))
    return rows


# ---- integrals ------------------------------------------------------------------------

def integral_suite(rng, draws=10, settings=quad.QuadratureSettings(64, refine=True), margin=0.2):
    rows = []
    done = 0
    while done < draws:
        N = 2
        p = random_params(rng, N, 2)
        # keep poles a fixed distance from the contours so the trapezoid converges quickly
        keys = enumerate_I(2, N)
        if min(min(contour.in_domain(p, k).margins.values()) for k in keys) < margin:
            continue
        done += 1
        info = {"eta": _c(p.eta), "tau": _c(p.tau), "ell": [_c(l) for l in p.ell]}
        for k in keys + [(1,), (2,)]:
            pk = p.with_M(len(k))
            for r in range(1, N + 1):
                if occupation(k, r) == 0:
                    continue
                mu = quad.mu_integral(pk, k, r, settings).value
                upward = (-1) ** occupation(k, r) * weightfn.nu_r(k, r, pk)
                rows.append(row(f"mu_r k={k} r={r}", "per-leg integral with upward orientation", info,
                                rel(mu, upward), 1e-8))
                rows.append(row(f"mu_r printed k={k} r={r}", "per-leg integral vs product as printed", info,
                                rel(mu, weightfn.nu_r(k, r, pk)), 1e-8, informational=True))
            mu = quad.mu_integral(pk, k, None, settings).value
            rows.append(row(f"mu_k k={k}", "leading-coefficient integral evaluation", info,
                            rel(mu, weightfn.nu_k(k, pk, consistent=True)), 1e-8))
    return rows


def default_qkz_points(p):
    """Two points just inside A_tilde_tau and one slightly deeper."""
    lam = max((l * p.eta).real for l in p.ell)
    gap = 2 * lam + max(p.eta.real, 0) - p.tau.real
    low = lam + max(p.eta.real / 2, 0, -p.xi_tilde_plus.real, -p.xi_tilde_minus.real) - p.tau.real
    pts = []
    for extra, im in ((0.15, (0.2, -0.1)), (0.35, (-0.3, 0.25)), (0.8, (0.6, -0.4))):
        t = [low + extra + (p.N - 1 - s) * (gap + extra) + 1j * im[s % 2] for s in range(p.N)]
        pts.append(np.array(t))
    return pts


def qkz_suite(p, points=None, settings=quad.QuadratureSettings(128)):
    rows = []
    points = default_qkz_points(p) if points is None else points
    for t in points:
        for k in enumerate_I(p.M, p.N):
            for r in range(1, p.N + 1):
                res = qkz.qkz_residual(p, k, t, r, settings)
                rows.append(row(f"qkz k={k} r={r}", "boundary qKZ equation",
                                {"t": [_c(z) for z in t], "n_per_dim": settings.n_per_dim}, res, 1e-6))
        for r in range(1, p.N + 1):
            for s in range(r + 1, p.N + 1):
                rows.append(row(f"compatibility r={r} s={s}", "consistency of transport operators",
                                {"t": [_c(z) for z in t]}, qkz.compatibility_residual(p, r, s, t), 1e-9))
    return rows


def asymptotics_suite(p, t0=None, direction=None, depths=(0, 2, 4, 6, 8),
                      settings=quad.QuadratureSettings(64)):
    rows = []
    t0 = default_qkz_points(p)[0] if t0 is None else np.asarray(t0)
    direction = np.arange(p.N, 0, -1, dtype=float) if direction is None else np.asarray(direction)
    for k in enumerate_I(p.M, p.N):
        res = quad.asymptotic_leading(p, k, t0, direction, depths, settings)
        last = res["values"][-1][enumerate_I(p.M, p.N).index(k)]
        rows.append(row(f"decay k={k}", "approach to the leading term", {"depths": list(depths)},
                        0.0 if res["monotone"] else 1.0, 0.5))
        rows.append(row(f"leading coefficient k={k}", "leading coefficient of Theta_k",
                        {"depth": depths[-1]}, abs(last - res["nu"]) / abs(res["nu"]), 1e-4))
    rows.append(r_limit_row(p.ell[0], p.ell[-1], p.M, p.eta))
    for r in range(1, p.N + 1):
        rows.append(row(f"asymptotic transport r={r}", "limit of the transport operator vs varphi", {},
                        rel(qkz.asymptotic_transport(p, r), qkz.varphi_diagonal(p, r)), 1e-10))
        dist = [np.abs(qkz.transport(p, r, t0 + s * direction) - qkz.varphi_diagonal(p, r)).max() for s in depths]
        rows.append(row(f"transport limit r={r}", "transport operator approaches its limit",
                        {"distances": dist}, 0.0 if np.all(np.diff(dist) < 0) else 1.0, 0.5))
    return rows


def r_limit_distances(l1, l2, M, eta, reals=(4.0, 6.0, 8.0, 10.0), imag=0.3):
    lim = rkmat.r_infinity(l1, l2, M, eta)
    out = []
    for a in reals:
        blocks = rkmat.solve_R(l1, l2, complex(a, imag), M, eta)
        out.append(max(float(np.abs(b - c).max()) for b, c in zip(blocks, lim)))
    return out


def r_limit_row(l1, l2, M, eta):
    dist = r_limit_distances(l1, l2, M, eta)
    return row("R limit", "R(x) approaches its diagonal limit", {"distances": dist},
               0.0 if np.all(np.diff(dist) < 0) else 1.0, 0.5)


def completeness_suite(p, t=None, settings=quad.QuadratureSettings(64)):
    t = default_qkz_points(p)[1] if t is None else t
    res = qkz.completeness_matrix(p, t, settings)
    info = {"t": [_c(z) for z in t], "abs_det": abs(res["det"]), "cond_scaled": res["cond_scaled"]}
    return [
        row("completeness det", "solutions form a basis", info, 0.0 if abs(res["det"]) > 0 else 1.0, 0.5),
        row("completeness cond", "solutions form a basis", info, res["cond"], 1e6),
    ]


def finite_dim_suite(p, t=None, settings=quad.QuadratureSettings(128)):
    from .weightspace import finite_keys
    rows = []
    t = default_qkz_points(p)[0] if t is None else t
    for k in finite_keys(p.ell, p.M):
        for r in range(1, p.N + 1):
            rows.append(row(f"projected qkz k={k} r={r}", "projected boundary qKZ equation",
                            {"t": [_c(z) for z in t]}, qkz.projected_qkz_check(p, k, t, r, settings), 1e-6))
    for r in range(1, p.N + 1):
        rows.append(row(f"projection commutes r={r}", "transport preserves the kernel of the projection", {},
                        qkz.projection_commutation_residual(p, r, t), 1e-12))
    return rows
