"""Scalar weight-function building blocks and the leading-coefficient products.

Functions of the integration variables accept numpy arrays, so that a whole
quadrature grid can be evaluated in one call. Multi-indices ``k`` use 1-based
leg labels; the position ``i`` in ``psi`` and ``u_fn`` is 1-based as well.
"""
import numpy as np

from .errors import SingularPoint
from .qseries import log_theta, qpoch, theta_from_log
from .weightspace import occupation


def psi(k, i, p):
    """Shift inside the theta factor of u_{k;i}."""
    M, eta, ell = len(k), p.eta, p.ell
    ki = k[i - 1]
    tail = sum(ell[ki:])  # legs s > k_i
    return (p.xi_tilde_plus + p.xi_tilde_minus + p.tau + ell[ki - 1] * eta
            + 2 * (tail - M + i) * eta)


def omega(k, r, p):
    eta, ell = p.eta, p.ell
    tail = sum(ell[s - 1] - occupation(k, s) for s in range(r + 1, p.N + 1))
    return (p.xi_plus + p.xi_minus + p.tau + (ell[r - 1] - occupation(k, r)) * eta
            + 2 * tail * eta)


def varphi(k, r, p):
    """Eigenvalue of the leading transport term on Omega_k."""
    M, eta, ell = len(k), p.eta, p.ell
    tail = sum(ell[r - 1:])
    expo = 0j
    for i, ki in enumerate(k, start=1):
        if ki == r:
            expo += 2 * (eta - p.xi_plus - p.xi_minus) + 4 * (M - i - tail) * eta
    above = sum(1 for ki in k if ki > r)
    return np.exp(expo - 4 * ell[r - 1] * above * eta)


def log_phi_k(k, t, p):
    out = 0j
    for r in range(1, p.N + 1):
        lv = np.log(varphi(k, r, p))
        out += log_theta(2 * t[r - 1], p.base) - log_theta(lv + 2 * t[r - 1], p.base)
    return out


def phi_k(k, t, p):
    """Phi_k(t) = prod_r theta(e^{2 t_r}) / theta(varphi_{k;r} e^{2 t_r})."""
    out = 1 + 0j
    for r in range(1, p.N + 1):
        lv = np.log(varphi(k, r, p))
        den = theta_from_log(lv + 2 * t[r - 1], p.base)
        if den == 0:
            raise SingularPoint(f"Phi_k has a pole at t={t}")
        out *= theta_from_log(2 * t[r - 1], p.base) / den
    return out


def _qp(logz, p):
    return qpoch(np.exp(logz), p.base)


def F_fn(x, t, p):
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    for ts, l in zip(t, p.ell):
        for sgn in (1, -1):
            out = out * _qp(-2 * (ts + sgn * x - l * p.eta), p) / _qp(-2 * (ts + sgn * x + l * p.eta), p)
    return out


def g_fn(x, p):
    x = np.asarray(x, dtype=complex)
    tau, xp, xm = p.tau, p.xi_tilde_plus, p.xi_tilde_minus
    num = _qp(2 * tau + 2 * (xp - x), p) * _qp(2 * tau + 2 * (xm - x), p)
    den = _qp(2 * (-xp - x), p) * _qp(2 * (-xm - x), p)
    return num / den


def h_fn(x, p):
    x = np.asarray(x, dtype=complex)
    return (1 - np.exp(-2 * x)) * _qp(2 * p.tau - 2 * (x + p.eta), p) / _qp(-2 * (x - p.eta), p)


def u_fn(k, i, x, t, p):
    x = np.asarray(x, dtype=complex)
    ki = k[i - 1]
    eta, ell = p.eta, p.ell
    out = np.exp(-t[ki - 1]) * theta_from_log(2 * (x - t[ki - 1] + psi(k, i, p)), p.base)
    for s in range(ki + 1, p.N + 1):
        out = out * theta_from_log(2 * (x - t[s - 1] - ell[s - 1] * eta), p.base)
    for s in range(ki, p.N + 1):
        out = out / theta_from_log(2 * (x - t[s - 1] + ell[s - 1] * eta), p.base)
    return out


def w_fn(k, xs, t, p, route="expanded"):
    """The weight function w_k(x; t).

    ``route="definition"`` multiplies the building blocks F, g, u, h;
    ``route="expanded"`` uses the cancelled product form.
    """
    xs = np.asarray(xs, dtype=complex)
    if route == "definition":
        val = phi_k(k, t, p)
        M = len(k)
        for i in range(M):
            val = val * F_fn(xs[..., i], t, p) * g_fn(xs[..., i], p) * u_fn(k, i + 1, xs[..., i], t, p)
        for i in range(M):
            for j in range(i + 1, M):
                val = val * h_fn(xs[..., i] + xs[..., j], p) * h_fn(xs[..., i] - xs[..., j], p)
        return val
    if route == "expanded":
        return phi_k(k, t, p) * w_over_phi(k, xs, t, p)
    raise ValueError(f"unknown route {route!r}")


def w_over_phi(k, X, t, p):
    """w_k / Phi_k in the cancelled form, vectorized over the leading axes of X."""
    X = np.asarray(X, dtype=complex)
    M = len(k)
    eta, ell, tau = p.eta, p.ell, p.tau
    xp, xm = p.xi_tilde_plus, p.xi_tilde_minus
    out = np.ones(X.shape[:-1], dtype=complex)
    for i in range(M):
        x = X[..., i]
        kappa = k[i]
        fac = np.exp(-t[kappa - 1]) * theta_from_log(2 * (x - t[kappa - 1] + psi(k, i + 1, p)), p.base)
        for s in range(1, p.N + 1):
            ts, l = t[s - 1], ell[s - 1]
            if s < kappa:
                fac = fac * _qp(2 * (x - ts + l * eta), p)
            if s <= kappa:
                fac = fac / _qp(2 * (x - ts - l * eta), p)
            if s > kappa:
                fac = fac * _qp(2 * tau + 2 * (ts - x + l * eta), p)
            if s >= kappa:
                fac = fac / _qp(2 * tau + 2 * (ts - x - l * eta), p)
            fac = fac * _qp(-2 * (ts + x - l * eta), p) / _qp(-2 * (ts + x + l * eta), p)
        fac = fac * _qp(2 * tau + 2 * (xp - x), p) * _qp(2 * tau + 2 * (xm - x), p)
        fac = fac / (_qp(2 * (-xp - x), p) * _qp(2 * (-xm - x), p))
        out = out * fac
    for i in range(M):
        for j in range(i + 1, M):
            for sgn in (1, -1):
                z = X[..., i] + sgn * X[..., j]
                out = out * (1 - np.exp(-2 * z)) * _qp(2 * tau - 2 * (z + eta), p) / _qp(-2 * (z - eta), p)
    return out


def _sh_ratio(a, b):
    return np.sinh(a) / np.sinh(b)


def w_t_shift_product(xs, t, r, p):
    eta, tau, l = p.eta, p.tau, p.ell[r - 1]
    tr = t[r - 1]
    out = 1 + 0j
    for x in xs:
        for sgn in (1, -1):
            out *= _sh_ratio(tr + sgn * x - l * eta + tau, tr + sgn * x + l * eta + tau)
    return out


def w_x_shift_product(xs, j, t, p):
    """Predicted ratio w(x - tau e_j; t) / w(x; t); j is 0-based here."""
    eta, tau = p.eta, p.tau
    xj = xs[j]
    out = 1 + 0j
    for ts, l in zip(t, p.ell):
        out *= _sh_ratio(ts + xj + l * eta, ts + xj - l * eta)
        out *= _sh_ratio(ts - xj - l * eta + tau, ts - xj + l * eta + tau)
    for xt in (p.xi_tilde_plus, p.xi_tilde_minus):
        out *= _sh_ratio(xj + xt, xj - xt - tau)
    for i, xi in enumerate(xs):
        if i == j:
            continue
        for sgn in (1, -1):
            z = xj + sgn * xi
            out *= _sh_ratio(z - tau, z) * _sh_ratio(z - eta, z + eta - tau)
    return out


def w_shift_residuals(k, xs, t, p, r=1, j=0, route="expanded"):
    """Relative defects of the two w difference equations (shift t_r, shift x_j)."""
    xs = np.asarray(xs, dtype=complex)
    t = np.asarray(t, dtype=complex)
    w0 = w_fn(k, xs, t, p, route)
    tr = t.copy()
    tr[r - 1] += p.tau
    pred_t = w_t_shift_product(xs, t, r, p)
    res_t = abs(w_fn(k, xs, tr, p, route) / w0 - pred_t) / abs(pred_t)
    xj = xs.copy()
    xj[j] -= p.tau
    pred_x = w_x_shift_product(xs, j, t, p)
    res_x = abs(w_fn(k, xj, t, p, route) / w0 - pred_x) / abs(pred_x)
    return res_t, res_x


def nu_r(k, r, p, consistent=False):
    """Closed-form value of the n_k(r)-fold integral attached to leg r.

    The default is the product exactly as printed. ``consistent=True`` uses
    omega - tau in place of omega and +pi*i per variable, which is what the
    integral over upward-oriented segments actually evaluates to.
    """
    n, eta, tau = occupation(k, r), p.eta, p.tau
    l, om = p.ell[r - 1], omega(k, r, p) - (tau if consistent else 0)
    unit = np.pi * 1j if consistent else -np.pi * 1j
    q2 = p.base.qsq
    out = 1 + 0j
    for m in range(1, n + 1):
        num = (qpoch(q2 * np.exp(-2 * m * eta), p.base)
               * qpoch(np.exp(tau + 2 * ((m - 1 - l) * eta + om)), p.base)
               * qpoch(np.exp(tau + 2 * ((m - 1 - l) * eta - om)), p.base))
        den = (qpoch(q2, p.base) * qpoch(q2 * np.exp(-2 * eta), p.base)
               * qpoch(np.exp(2 * (m - 1 - 2 * l) * eta), p.base))
        out *= unit * num / den
    return out


def nu_prefactor(k, p):
    """prod_i -exp(xi_- + 2 sum_{s<k_i} ell_s eta)."""
    out = 1 + 0j
    for ki in k:
        out *= -np.exp(p.xi_minus + 2 * sum(p.ell[:ki - 1]) * p.eta)
    return out


def nu_k(k, p, consistent=False):
    """Leading coefficient of Theta_k deep in the asymptotic sector.

    See ``nu_r`` for the meaning of ``consistent``; the two variants differ
    by the sign (-1)^M and by omega -> omega - tau.
    """
    eta, ell, tau = p.eta, p.ell, p.tau
    q2 = p.base.qsq
    sign = -1 if consistent else 1
    out = (sign * np.pi * 1j * np.exp(p.xi_minus)) ** len(k)
    for r in range(1, p.N + 1):
        for s in range(r + 1, p.N + 1):
            out *= np.exp(2 * ell[r - 1] * occupation(k, s) * eta)
    for r in range(1, p.N + 1):
        l, om = ell[r - 1], omega(k, r, p) - (tau if consistent else 0)
        for m in range(1, occupation(k, r) + 1):
            out *= (qpoch(q2 * np.exp(-2 * m * eta), p.base)
                    * qpoch(np.exp(tau + 2 * ((m - 1 - l) * eta + om)), p.base)
                    * qpoch(np.exp(tau + 2 * ((m - 1 - l) * eta - om)), p.base))
            out /= (qpoch(q2, p.base) * qpoch(q2 * np.exp(-2 * eta), p.base)
                    * qpoch(np.exp(2 * (m - 1 - 2 * l) * eta), p.base))
    return out
