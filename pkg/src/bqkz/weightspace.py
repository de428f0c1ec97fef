"""Weight-space combinatorics and Verma-module generator matrices.

A weight-M vector of the N-fold tensor product is stored as a numpy array
indexed by the weakly increasing multi-indices ``k`` of ``enumerate_I(M, N)``,
in lexicographic order. The multi-index ``k`` labels the basis vector
``v_{n_k(1)} (x) ... (x) v_{n_k(N)}``.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb

import numpy as np

from .errors import NotHalfInteger, OutOfRange
from .qseries import QBase


@dataclass(frozen=True)
class Params:
    """Scalar model data.

    ``ell`` holds the highest weights of the N tensor legs, ``M`` the total weight.
    """
    base: QBase
    eta: complex
    xi_plus: complex
    xi_minus: complex
    ell: tuple
    M: int

    def __post_init__(self):
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "xi_plus", complex(self.xi_plus))
        object.__setattr__(self, "xi_minus", complex(self.xi_minus))
        object.__setattr__(self, "ell", tuple(complex(l) for l in self.ell))
        if not self.ell:
            raise ValueError("need at least one tensor leg")
        if self.M < 0:
            raise ValueError("M must be nonnegative")
        for j in range(1, 2 * self.M + 3):
            if abs(np.exp(j * self.eta) - 1) <= 1e-8:
                raise ValueError(f"exp(eta) is numerically a root of unity (order {j})")

    @property
    def N(self):
        return len(self.ell)

    @property
    def tau(self):
        return self.base.tau

    @property
    def xi_tilde_plus(self):
        return self.xi_plus - self.eta / 2 - self.base.tau / 2

    @property
    def xi_tilde_minus(self):
        return self.xi_minus - self.eta / 2

    def with_M(self, M):
        return Params(self.base, self.eta, self.xi_plus, self.xi_minus, self.ell, M)


def enumerate_I(M, N):
    """Weakly increasing M-tuples with entries in 1..N, lexicographically."""
    return list(combinations_with_replacement(range(1, N + 1), M))


def occupation(k, r):
    """n_k(r): how many entries of k equal r."""
    return sum(1 for ki in k if ki == r)


def zeta(k, N):
    return tuple(occupation(k, r) for r in range(1, N + 1))


def zeta_inv(d):
    return tuple(r for r, dr in enumerate(d, start=1) for _ in range(dr))


def position_index(k, m, r):
    """The (1-based) position of the m-th entry of k equal to r."""
    n = occupation(k, r)
    if not 1 <= m <= n:
        raise OutOfRange(f"m={m} outside 1..{n} for r={r}")
    return sum(1 for ki in k if ki < r) + m


class WeightSpace:
    """The total-weight-M subspace of an N-leg tensor product, basis in lex order."""

    def __init__(self, N, M):
        self.N = N
        self.M = M
        self.basis = enumerate_I(M, N)
        self.comps = [zeta(k, N) for k in self.basis]
        self.index = {d: i for i, d in enumerate(self.comps)}
        assert len(self.basis) == comb(M + N - 1, M)

    @property
    def dim(self):
        return len(self.basis)

    def omega(self, k):
        """The basis vector Omega_k."""
        v = np.zeros(self.dim, dtype=complex)
        v[self.basis.index(tuple(k))] = 1
        return v

    def as_dict(self, vec):
        return {k: complex(c) for k, c in zip(self.basis, vec)}

    def from_dict(self, coeffs):
        v = np.zeros(self.dim, dtype=complex)
        for k, c in coeffs.items():
            v[self.basis.index(tuple(k))] = c
        return v

    @cached_property
    def flat_index(self):
        """Map from per-leg depths to positions in a kron space of depth M per leg."""
        D = self.M + 1
        return np.array([np.ravel_multi_index(d, (D,) * self.N) for d in self.comps])


def e1_coefficient(ell, d, eta):
    return np.sinh(d * eta) * np.sinh((2 * ell + 1 - d) * eta) / np.sinh(eta) ** 2


def verma_generators(ell, z, d_max, eta):
    """Matrices of exp(z h_1), e_1 and f_1 on span{v_0, ..., v_{d_max}}.

    f_1 v_{d_max} is cut off (the truncation boundary).
    """
    d = np.arange(d_max + 1)
    Kz = np.diag(np.exp(2 * (ell - d) * z)).astype(complex)
    E = np.zeros((d_max + 1, d_max + 1), dtype=complex)
    F = np.zeros((d_max + 1, d_max + 1), dtype=complex)
    for j in range(1, d_max + 1):
        E[j - 1, j] = e1_coefficient(ell, j, eta)
        F[j, j - 1] = 1
    return Kz, E, F


def is_half_integer(ell):
    two = 2 * complex(ell)
    return abs(two.imag) < 1e-12 and abs(two.real - round(two.real)) < 1e-12 and round(two.real) > 0


def finite_keys(ell, M):
    """Multi-indices surviving the projection onto the finite-dimensional quotient."""
    for l in ell:
        if not is_half_integer(l):
            raise NotHalfInteger(f"{l} is not in (1/2)Z_{{>0}}")
    caps = [round(2 * complex(l).real) for l in ell]
    return [k for k in enumerate_I(M, len(ell))
            if all(occupation(k, r + 1) <= caps[r] for r in range(len(ell)))]


def project_finite(v, ell):
    """Drop every coefficient whose occupation exceeds 2*ell_r on some leg.

    ``v`` maps multi-indices to coefficients.
    """
    if not v:
        return {}
    M = len(next(iter(v)))
    keep = set(finite_keys(ell, M))
    return {k: c for k, c in v.items() if tuple(k) in keep}
