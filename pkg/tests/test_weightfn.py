import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bqkz import harness, quad, weightfn
from bqkz.weightspace import enumerate_I, occupation

from conftest import standard_params

# mu_k for M = 1 at the standard parameters, from a 25-digit mpmath.quad of the
# leading density written directly with mpmath.qp (independent of this package)
MU_ORACLE = {
    (1,): -4032.9748610695001723 + 4660.352887061345203j,
    (2,): 35.150071575525040029 - 7.0644508992892856096j,
}


def draw(seed):
    rng = np.random.default_rng(seed)
    N, M = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    p = harness.random_params(rng, N, M)
    t = np.sort(rng.uniform(0.3, 2.5, N))[::-1] + 1j * rng.uniform(-0.5, 0.5, N)
    keys = enumerate_I(M, N)
    k = keys[int(rng.integers(len(keys)))]
    xs = np.array([harness.random_spectral(rng) for _ in range(M)])
    return rng, p, t, k, xs


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_building_block_difference_equations(seed):
    rng, p, t, k, xs = draw(seed)
    r, i = int(rng.integers(1, p.N + 1)), int(rng.integers(1, len(k) + 1))
    for name, res in harness.fgh_shift_residuals(p, xs[0], t, r, k, i).items():
        assert res < 1e-10, name


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_weight_function_difference_equations(seed):
    rng, p, t, k, xs = draw(seed)
    r, j = int(rng.integers(1, p.N + 1)), int(rng.integers(len(k)))
    rt, rx = weightfn.w_shift_residuals(k, xs, t, p, r=r, j=j)
    assert rt < 1e-10 and rx < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_definition_and_cancelled_form_agree(seed):
    _, p, t, k, xs = draw(seed)
    a = weightfn.w_fn(k, xs, t, p, "definition")
    b = weightfn.w_fn(k, xs, t, p, "expanded")
    assert abs(a - b) <= 1e-11 * abs(a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_phi_multipliers(seed):
    rng, p, t, k, _ = draw(seed)
    r = int(rng.integers(1, p.N + 1))
    shifted = t.copy()
    shifted[r - 1] += p.tau
    lhs = weightfn.phi_k(k, shifted, p)
    assert abs(lhs - weightfn.varphi(k, r, p) * weightfn.phi_k(k, t, p)) <= 1e-10 * abs(lhs)


def test_w_over_phi_matches_ratio():
    p = standard_params(M=2)
    t = np.array([1.7 + 0.1j, 0.6 - 0.2j])
    X = np.array([[0.2 + 0.3j, -0.1 + 1.0j], [0.4 - 0.2j, 0.3 + 0.1j]])
    for k in enumerate_I(2, 2):
        vals = weightfn.w_over_phi(k, X, t, p)
        for x, v in zip(X, vals):
            ref = weightfn.w_fn(k, x, t, p, "definition") / weightfn.phi_k(k, t, p)
            assert abs(v - ref) < 1e-11 * abs(ref)


def test_varphi_is_exponential_in_weights():
    p = standard_params(M=2)
    # legs below every entry of k see only the e^{-4 ell_r eta} factors
    assert weightfn.varphi((2, 2), 1, p) == pytest.approx(np.exp(-8 * p.ell[0] * p.eta))
    assert weightfn.varphi((1, 1), 2, p) == pytest.approx(1)


@pytest.mark.parametrize("k", [(1,), (2,)])
def test_leading_coefficient_against_mpmath_oracle(k):
    p = standard_params(M=1)
    ref = MU_ORACLE[k]
    assert abs(weightfn.nu_k(k, p, consistent=True) - ref) < 1e-12 * abs(ref)
    assert abs(quad.mu_integral(p, k).value - ref) < 1e-8 * abs(ref)


@pytest.mark.parametrize("k", [(1,), (2,)])
def test_printed_leading_coefficient_differs_from_oracle(k):
    # the literal product form with omega and -pi*i is not what the integral gives
    p = standard_params(M=1)
    ref = MU_ORACLE[k]
    assert abs(weightfn.nu_k(k, p) - ref) > 0.5 * abs(ref)


@pytest.mark.parametrize("k", enumerate_I(2, 2))
def test_leading_integral_for_two_variables(k):
    p = standard_params(M=2)
    mu = quad.mu_integral(p, k, settings=quad.QuadratureSettings(64, refine=True)).value
    assert abs(mu - weightfn.nu_k(k, p, consistent=True)) < 1e-8 * abs(mu)
    for r in (1, 2):
        n = occupation(k, r)
        if n:
            per_leg = quad.mu_integral(p, k, r).value
            assert abs(per_leg - (-1) ** n * weightfn.nu_r(k, r, p)) < 1e-8 * abs(per_leg)


def test_nu_for_empty_key():
    p = standard_params(M=0)
    assert weightfn.nu_k((), p) == 1
    assert weightfn.nu_k((), p, consistent=True) == 1
