"""Contour quadrature and the integral solutions Theta_k, Psi_k.

Every integrand here is pi*i-periodic along vertical segments and analytic
nearby, so the equally spaced trapezoidal rule converges geometrically.
"""
from dataclasses import dataclass

import numpy as np

from .bethe import beta_matrix, bethe_vector
from .contour import check_separation, find_gamma, in_domain, in_sector
from .errors import DomainError, NotConverged, SectorViolation
from .qseries import qpoch, theta_from_log
from .weightfn import omega, phi_k, psi, w_over_phi
from .weightspace import WeightSpace, occupation, position_index

CHUNK = 1 << 15


@dataclass(frozen=True)
class QuadratureSettings:
    n_per_dim: int = 64
    refine: bool = False
    rel_tol: float = 1e-9
    max_n: int = 1024

    def __post_init__(self):
        if self.n_per_dim < 8 or self.n_per_dim & (self.n_per_dim - 1):
            raise ValueError("n_per_dim must be a power of two, at least 8")


@dataclass
class IntegralResult:
    value: object
    error: float
    n_per_dim: int


def _trapezoid(f, starts, n):
    """Trapezoid sums on the n-grid and on its every-other-node subgrid."""
    M = len(starts)
    starts = np.asarray(starts, dtype=complex)
    total = 0
    half = 0
    offsets = 1j * np.pi * np.arange(n) / n
    count = n ** M
    for lo in range(0, count, CHUNK):
        idx = np.arange(lo, min(lo + CHUNK, count))
        multi = np.array(np.unravel_index(idx, (n,) * M)).T
        X = starts[None, :] + offsets[multi]
        vals = f(X)
        total = total + vals.sum(axis=0)
        even = np.all(multi % 2 == 0, axis=1)
        half = half + vals[even].sum(axis=0)
    h = (1j * np.pi / n) ** M
    return total * h, half * h * 2 ** M


def periodic_contour_integral(f, starts, settings=QuadratureSettings()):
    """Integrate f over prod_i (starts_i + i[0, pi]) by the tensor trapezoidal rule.

    ``f`` maps an array of points of shape (npoints, M) to values of shape
    (npoints,) or (npoints, dim). The error estimate is the change against
    the half-resolution grid.
    """
    n = settings.n_per_dim
    while True:
        value, coarse = _trapezoid(f, starts, n)
        scale = max(np.max(np.abs(value)), 1e-300)
        err = float(np.max(np.abs(value - coarse)))
        if not settings.refine or err <= settings.rel_tol * scale:
            return IntegralResult(value, err, n)
        if 2 * n > settings.max_n:
            raise NotConverged(f"quadrature error {err:.2e} at n={n}")
        n *= 2


def _prepare(p, k, t, gamma, check):
    k = tuple(k)
    t = np.asarray(t, dtype=complex)
    if check:
        dom = in_domain(p, k)
        if not dom.ok:
            raise DomainError(f"parameters outside the domain for k={k}: {dom.violated}")
        sec = in_sector(t, "A_tilde", p)
        if not sec.ok:
            raise SectorViolation(f"t={t} outside A_tilde: {sec.violated}")
    spec = find_gamma(p, k) if gamma is None else gamma
    if check:
        check_separation(spec, t, p)
    return k, t, spec


def theta_integrand(p, k, t, route="closed_form"):
    """The vector integrand (w_k / Phi_k) B~(x;t) Omega as a function of grid points."""
    if route == "closed_form":
        return lambda X: w_over_phi(k, X, t, p)[:, None] * beta_matrix(X, t, p)
    if route == "operator":
        def f(X):
            vecs = np.array([bethe_vector(list(x), t, p) for x in X])
            return w_over_phi(k, X, t, p)[:, None] * vecs
        return f
    raise ValueError(f"unknown route {route!r}")


def theta_solution(p, k, t, settings=QuadratureSettings(), gamma=None, check=True,
                   route="closed_form"):
    """Theta_k(t) = integral over the anchored cycle of (w_k/Phi_k) B~(x;t) Omega."""
    k, t, spec = _prepare(p, k, t, gamma, check)
    if len(k) == 0:
        return IntegralResult(np.ones(1, dtype=complex), 0.0, settings.n_per_dim)
    starts = [a for a, _ in spec.anchored(t)]
    return periodic_contour_integral(theta_integrand(p, k, t, route), starts, settings)


def psi_solution(p, k, t, settings=QuadratureSettings(), gamma=None, check=True):
    """Psi_k(t) = Phi_k(t) Theta_k(t)."""
    res = theta_solution(p, k, t, settings, gamma, check)
    ph = phi_k(k, t, p)
    return IntegralResult(ph * res.value, abs(ph) * res.error, res.n_per_dim)


def leading_density(p, k, Y):
    """Scalar coefficient of Omega_k in the leading term of the integrand, at points Y."""
    Y = np.asarray(Y, dtype=complex)
    M = len(k)
    eta, ell = p.eta, p.ell
    out = np.ones(Y.shape[:-1], dtype=complex)
    for i in range(M):
        y, ki = Y[..., i], k[i]
        l = ell[ki - 1]
        out = out * (-np.exp(p.xi_minus + 2 * sum(ell[:ki - 1]) * eta))
        out = out * theta_from_log(2 * (y + psi(k, i + 1, p)), p.base)
        out = out / (qpoch(np.exp(2 * (y - l * eta)), p.base) * qpoch(np.exp(2 * (-y - l * eta)), p.base))
    for i in range(M):
        for j in range(i + 1, M):
            if k[i] != k[j]:
                continue
            z = Y[..., j] - Y[..., i]
            out = out * (1 - np.exp(2 * z)) * qpoch(np.exp(2 * (z - eta)) * p.base.qsq, p.base)
            out = out / qpoch(np.exp(2 * (z + eta)), p.base)
    return out


def _leg_density(p, k, r, Z):
    n = occupation(k, r)
    eta, l, om = p.eta, p.ell[r - 1], omega(k, r, p)
    out = np.ones(Z.shape[:-1], dtype=complex)
    for m in range(1, n + 1):
        z = Z[..., m - 1]
        out = out * theta_from_log(p.tau + 2 * (z + om + (2 * m - n - 1) * eta), p.base)
        out = out / (qpoch(np.exp(2 * (z - l * eta)), p.base) * qpoch(np.exp(2 * (-z - l * eta)), p.base))
    for a in range(n):
        for b in range(a + 1, n):
            z = Z[..., b] - Z[..., a]
            out = out * (1 - np.exp(2 * z)) * qpoch(p.base.qsq * np.exp(2 * (z - eta)), p.base)
            out = out / qpoch(np.exp(2 * (z + eta)), p.base)
    return out


def mu_integral(p, k, r=None, settings=QuadratureSettings(), gamma=None):
    """The integral of the leading density over the base cycle.

    With ``r`` given, only the n_k(r)-fold factor attached to leg r.
    """
    k = tuple(k)
    spec = find_gamma(p, k) if gamma is None else gamma
    if r is None:
        if not k:
            return IntegralResult(1 + 0j, 0.0, settings.n_per_dim)
        return periodic_contour_integral(lambda Y: leading_density(p, k, Y), list(spec.gamma), settings)
    n = occupation(k, r)
    if n == 0:
        return IntegralResult(1 + 0j, 0.0, settings.n_per_dim)
    starts = [spec.gamma[position_index(k, m, r) - 1] for m in range(1, n + 1)]
    return periodic_contour_integral(lambda Z: _leg_density(p, k, r, Z), starts, settings)


def asymptotic_leading(p, k, t0, direction, depths, settings=QuadratureSettings(),
                       consistent=True):
    """Sample Theta_k along t0 + s*direction and measure the approach to nu_k Omega_k.

    Returns a dict with the sampled vectors, the distances to the leading
    term, their log-linear slope per unit depth, and whether they decrease.
    """
    from .weightfn import nu_k
    k = tuple(k)
    space = WeightSpace(p.N, len(k))
    target = nu_k(k, p, consistent) * space.omega(k)
    values, dist = [], []
    for s in depths:
        t = np.asarray(t0, dtype=complex) + s * np.asarray(direction, dtype=float)
        v = theta_solution(p, k, t, settings).value
        values.append(v)
        dist.append(float(np.linalg.norm(v - target)))
    dist = np.array(dist)
    positive = dist > 0
    slope = (np.polyfit(np.asarray(depths, float)[positive], np.log(dist[positive]), 1)[0]
             if positive.sum() >= 2 else float("nan"))
    return {
        "depths": list(depths),
        "values": values,
        "distance": dist,
        "slope": slope,
        "monotone": bool(np.all(np.diff(dist) < 0)),
        "nu": complex(target[space.basis.index(k)]) if k else 1 + 0j,
    }
