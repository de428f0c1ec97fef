"""q-series primitives: q^2-shifted factorials and the renormalized theta function.

All functions accept scalars or numpy arrays. The nome is given through its
logarithm ``tau`` (so ``q = exp(tau)``), which must have negative real part.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidBase, TruncationNotConverged, ZeroArgument


@dataclass(frozen=True)
class QBase:
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if not self.tau.real < 0:
            raise InvalidBase(f"need Re(tau) < 0, got tau={self.tau}")

    @property
    def q(self):
        return np.exp(self.tau)

    @property
    def qsq(self):
        return np.exp(2 * self.tau)


@dataclass(frozen=True)
class SeriesTolerance:
    rel_tol: float = 1e-15
    max_terms: int = 500

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be positive")


DEFAULT_TOL = SeriesTolerance()


def _n_terms(zmax, qabs2, tol):
    # smallest K >= 3 with zmax * |q^2|^K < rel_tol
    if zmax == 0:
        return 1
    need = np.log(tol.rel_tol / zmax) / np.log(qabs2)
    K = max(3, int(np.ceil(need)) + 1)
    if K > tol.max_terms:
        raise TruncationNotConverged(
            f"|z|={zmax:.3g} needs {K} factors, more than max_terms={tol.max_terms}")
    return K


def qpoch(z, base, tol=DEFAULT_TOL, return_error=False):
    """The q^2-shifted factorial (z; q^2)_inf = prod_{m>=0} (1 - z q^{2m}).

    Parameters
    ----------
    z : complex or array of complex
    base : QBase
    tol : SeriesTolerance
    return_error : bool
        If true, also return a bound on the absolute truncation error.
    """
    qsq = base.qsq
    qabs2 = abs(qsq)
    if not qabs2 < 1:
        raise InvalidBase("|q^2| must be < 1")
    z = np.asarray(z, dtype=complex)
    zmax = float(np.max(np.abs(z))) if z.size else 0.0
    K = _n_terms(zmax, qabs2, tol)
    powers = qsq ** np.arange(K)
    value = np.prod(1 - z[..., None] * powers, axis=-1)
    if z.ndim == 0:
        value = complex(value)
    if not return_error:
        return value
    # |prod_{m>=K}(1 - w_m) - 1| <= exp(s) - 1 with s = sum |w_m|
    s = zmax * qabs2 ** K / (1 - qabs2)
    return value, np.abs(value) * np.expm1(s)


def _reduce(logz, base):
    # write z = q^{2n} z' with |q^2| < |z'| <= 1
    tau = base.tau
    a = np.real(logz) / (2 * tau.real)
    n = np.floor(a)
    return n, logz - 2 * n * tau


def theta_from_log(logz, base, tol=DEFAULT_TOL):
    """theta(exp(logz)); safe for |z| far from 1 where exp(logz) would overflow."""
    logz = np.asarray(logz, dtype=complex)
    n, logzr = _reduce(logz, base)
    zr = np.exp(logzr)
    core = qpoch(zr, base, tol) * qpoch(base.qsq / zr, base, tol)
    # theta(q^{2n} z) = (-1)^n z^{-n} q^{-n(n-1)} theta(z)
    factor = np.exp(1j * np.pi * n - n * logzr - n * (n - 1) * base.tau)
    out = factor * core
    return complex(out) if out.ndim == 0 else out


def log_theta(logz, base, tol=DEFAULT_TOL):
    """Logarithm of theta(exp(logz)), on an unspecified branch."""
    logz = np.asarray(logz, dtype=complex)
    n, logzr = _reduce(logz, base)
    zr = np.exp(logzr)
    core = qpoch(zr, base, tol) * qpoch(base.qsq / zr, base, tol)
    out = 1j * np.pi * n - n * logzr - n * (n - 1) * base.tau + np.log(core)
    return complex(out) if out.ndim == 0 else out


def theta(z, base, tol=DEFAULT_TOL):
    """Renormalized Jacobi theta function (z; q^2)_inf (q^2/z; q^2)_inf."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise ZeroArgument("theta is undefined at z = 0")
    return theta_from_log(np.log(z), base, tol)


def pm_product(f, x):
    """f(x) * f(-x)."""
    return f(x) * f(-x)
