"""Parameter domains, integration base points, sectors and pole bookkeeping."""
from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, PoleOnContour
from .weightspace import occupation, position_index


@dataclass
class Check:
    """Outcome of a family of strict inequalities; ``margins`` holds every slack."""
    ok: bool
    margins: dict = field(default_factory=dict)

    @property
    def violated(self):
        return [name for name, m in self.margins.items() if not m > 0]


def in_domain(p, k):
    """Re(ell_r eta) > max(0, (n_k(r)-1)/2 Re(eta)) for every leg r."""
    margins = {}
    for r in range(1, p.N + 1):
        n = occupation(k, r)
        lhs = (p.ell[r - 1] * p.eta).real
        margins[f"Re(ell_{r} eta) > 0"] = lhs
        margins[f"Re(ell_{r} eta) > (n-1)/2 Re(eta)"] = lhs - (n - 1) / 2 * p.eta.real
    return Check(all(m > 0 for m in margins.values()), margins)


def in_domain_all(p, keys):
    return all(in_domain(p, k).ok for k in keys)


def tau_inequality(p, k):
    """The step-size condition on -Re(tau) relative to the weights."""
    mt = -p.tau.real
    margins = {"-Re(tau) <= min Re(ell eta)": min((l * p.eta).real for l in p.ell) - mt}
    vals = [((2 * p.ell[r - 1] + 1 - occupation(k, r)) * p.eta).real / (occupation(k, r) + 1)
            for r in range(1, p.N + 1)]
    margins["-Re(tau) < min Re((2 ell + 1 - n) eta)/(n+1)"] = min(vals) - mt
    ok = margins["-Re(tau) <= min Re(ell eta)"] >= 0 and margins[
        "-Re(tau) < min Re((2 ell + 1 - n) eta)/(n+1)"] > 0
    return Check(ok, margins)


@dataclass(frozen=True)
class ContourSpec:
    """Base points gamma; the cycle at t is prod_i (t_{k_i} + gamma_i + i[0, pi])."""
    k: tuple
    gamma: tuple

    def anchored(self, t):
        starts = [t[ki - 1] + g for ki, g in zip(self.k, self.gamma)]
        return [(a, a + np.pi * 1j) for a in starts]


def gamma_violations(p, k, gamma, strict_tau=False):
    """Names of the base-point constraints that fail (empty when admissible)."""
    bad = []
    shift = p.tau.real if strict_tau else 0.0
    gap = (p.eta - p.tau).real if strict_tau else p.eta.real
    for i, (ki, g) in enumerate(zip(k, gamma), start=1):
        bound = (p.ell[ki - 1] * p.eta).real + shift
        if not abs(g.real) < bound:
            bad.append(f"|Re gamma_{i}| < {bound:.4g}")
    for r in range(1, p.N + 1):
        for s in range(1, occupation(k, r)):
            a = gamma[position_index(k, s, r) - 1].real
            b = gamma[position_index(k, s + 1, r) - 1].real
            if not b <= a:
                bad.append(f"ordering at leg {r}, s={s}")
            if not b + gap < a:
                bad.append(f"gap at leg {r}, s={s}")
    return bad


def find_gamma(p, k, strict_tau=False):
    """Deterministic admissible base points: per leg, symmetric and evenly spaced.

    With ``strict_tau`` the bounds are tightened by tau as needed for a
    shifted contour.
    """
    k = tuple(k)
    shift = p.tau.real if strict_tau else 0.0
    gap0 = max((p.eta - p.tau).real if strict_tau else p.eta.real, 0.0)
    gamma = [0j] * len(k)
    for r in range(1, p.N + 1):
        n = occupation(k, r)
        if n == 0:
            continue
        bound = (p.ell[r - 1] * p.eta).real + shift
        if not bound > 0:
            raise Infeasible(f"leg {r}: need Re(ell eta) {'+ Re tau ' if strict_tau else ''}> 0")
        if n == 1:
            gap = 0.0
        else:
            gmax = 2 * bound / (n - 1)
            slack = gmax - gap0
            if not slack > 0:
                raise Infeasible(f"leg {r}: {n} base points need spacing > {gap0:.4g}, "
                                 f"room for at most {gmax:.4g}")
            gap = gap0 + slack / (n + 1)
        for s in range(1, n + 1):
            gamma[position_index(k, s, r) - 1] = complex(((n + 1) / 2 - s) * gap)
    gamma = tuple(gamma)
    bad = gamma_violations(p, k, gamma, strict_tau)
    if bad:
        raise Infeasible("; ".join(bad))
    return ContourSpec(k, gamma)


def in_sector(t, variant, p):
    """Membership of t in A, A_tilde or A_tilde_tau, with per-inequality slacks."""
    t = np.asarray(t, dtype=complex)
    N = len(t)
    margins = {}
    for s in range(N - 1):
        margins[f"Re(t_{s + 1} - t_{s + 2}) > 0"] = (t[s] - t[s + 1]).real
    margins[f"Re(t_{N}) > 0"] = t[-1].real
    if variant in ("A_tilde", "A_tilde_tau"):
        lam = max((l * p.eta).real for l in p.ell)
        extra = -p.tau.real if variant == "A_tilde_tau" else 0.0
        gap = 2 * lam + max(p.eta.real, 0.0) + extra
        for s in range(N - 1):
            margins[f"Re(t_{s + 1} - t_{s + 2}) > {gap:.4g}"] = (t[s] - t[s + 1]).real - gap
        low = lam + max(p.eta.real / 2, 0.0, -p.xi_tilde_plus.real, -p.xi_tilde_minus.real) + extra
        margins[f"Re(t_{N}) > {low:.4g}"] = t[-1].real - low
    elif variant != "A":
        raise ValueError(f"unknown sector {variant!r}")
    return Check(all(m > 0 for m in margins.values()), margins)


def pole_sets(k, j, t, xs, p):
    """Anchors of the right-moving (P+) and left-moving (P-) pole sequences in x_j.

    ``j`` is 1-based; entries of ``xs`` other than x_j are used as given.
    """
    eta, ell = p.eta, p.ell
    kj = k[j - 1]
    plus = [t[s - 1] + ell[s - 1] * eta for s in range(1, kj + 1)]
    plus += [xs[i - 1] - eta for i in range(1, j)]
    minus = [t[s - 1] - ell[s - 1] * eta for s in range(kj, p.N + 1)]
    minus += [-t[s] - ell[s] * eta for s in range(p.N)]
    minus += [-p.xi_tilde_plus, -p.xi_tilde_minus]
    minus += [xs[i - 1] + eta for i in range(j + 1, len(k) + 1)]
    minus += [-xs[i - 1] + eta for i in range(1, len(k) + 1) if i != j]
    return plus, minus


def separation_margin(spec, t, p):
    """Smallest real-part distance between a contour line and its pole anchors."""
    k = spec.k
    starts = [a for a, _ in spec.anchored(t)]
    worst = np.inf
    for j in range(1, len(k) + 1):
        plus, minus = pole_sets(k, j, t, starts, p)
        line = starts[j - 1].real
        for z in plus:
            worst = min(worst, z.real - line)
        for z in minus:
            worst = min(worst, line - z.real)
    return worst


def check_separation(spec, t, p):
    m = separation_margin(spec, t, p)
    if not m > 0:
        raise PoleOnContour(f"contour does not separate the pole sequences (margin {m:.3g})")
    return m
