import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bqkz import harness, rkmat
from bqkz.errors import IllConditioned, SingularPoint
from bqkz.weightspace import WeightSpace

weights = st.builds(complex, st.floats(0.3, 1.7), st.floats(-0.3, 0.3))
etas = st.builds(complex, st.floats(0.25, 0.9), st.floats(-0.4, 0.4))
spectral = st.builds(complex, st.floats(-0.8, 0.8), st.floats(-0.8, 0.8))


def solvable(f):
    try:
        return f()
    except (IllConditioned, SingularPoint):
        return None


def test_spin_half_matrix_entries():
    x, eta = 0.3 + 0.2j, 0.5 - 0.1j
    R = rkmat.rbar_spinhalf(x, eta)
    a = np.sinh(x) / np.sinh(x + eta)
    b = np.sinh(eta) / np.sinh(x + eta)
    expected = np.array([[1, 0, 0, 0], [0, a, b, 0], [0, b, a, 0], [0, 0, 0, 1]])
    assert np.allclose(R, expected, rtol=0, atol=1e-15)
    with pytest.raises(SingularPoint):
        rkmat.rbar_spinhalf(-eta, eta)


@settings(max_examples=50, deadline=None)
@given(spectral.filter(lambda z: abs(z) > 0.05), etas)
def test_verma_r_projects_to_spin_half(x, eta):
    # the construction loses about log10(1/|x|) digits as x -> 0, where the system degenerates
    try:
        res = harness.spin_half_residual(x, eta)
    except (SingularPoint, IllConditioned):
        return
    assert res < 1e-12


@settings(max_examples=30, deadline=None)
@given(weights, weights, spectral, etas)
def test_intertwining_with_every_generator(l1, l2, x, eta):
    # only f_1 and e_0 enter the construction; e_1, f_0 and h_1 are independent checks
    res = solvable(lambda: rkmat.intertwining_residual(l1, l2, x, 3, eta))
    assert res is None or res < 1e-10


@settings(max_examples=20, deadline=None)
@given(weights, weights, weights, spectral, spectral, etas)
def test_yang_baxter(l1, l2, l3, x, y, eta):
    res = solvable(lambda: harness.ybe_residual((l1, l2, l3), x, y, 3, eta))
    assert res is None or res < 1e-10


@settings(max_examples=20, deadline=None)
@given(weights, weights, spectral, spectral, spectral, etas)
def test_reflection_equation(l1, l2, x, y, xi, eta):
    res = solvable(lambda: harness.reflection_residual(l1, l2, x, y, xi, 3, eta))
    assert res is None or res < 1e-10


@settings(max_examples=30, deadline=None)
@given(weights, weights, spectral, etas)
def test_unitarity_and_p_symmetry(l1, l2, x, eta):
    res = solvable(lambda: (harness.unitarity_residual(l1, l2, x, 3, eta),
                            harness.p_symmetry_residual(l1, l2, x, 3, eta)))
    assert res is None or max(res) < 1e-10


def test_normalization_and_ice_rule():
    blocks = rkmat.solve_R(1.2, 0.7 + 0.1j, 0.4, 3, 0.6)
    assert blocks[0][0, 0] == 1
    assert [b.shape for b in blocks] == [(1, 1), (2, 2), (3, 3), (4, 4)]
    dense = rkmat.blocks_to_dense(blocks, 4)
    d1, d2 = np.divmod(np.arange(25), 5)
    wt = d1 + d2
    assert np.all(dense[wt[:, None] != wt[None, :]] == 0)


def test_blocks_are_cached_and_read_only():
    a = rkmat.solve_R(1.1, 0.9, 0.2, 2, 0.5)
    b = rkmat.solve_R(1.1, 0.9, 0.2, 2, 0.5)
    assert a[2] is b[2]
    with pytest.raises(ValueError):
        a[2][0, 0] = 5


def test_resonant_weights_are_reported():
    # ell_1 + ell_2 at a pole of the intertwiner makes the stacked system rank deficient
    with pytest.raises(IllConditioned):
        rkmat.solve_R(0.5, 0.5, -0.5, 3, 0.5)


@settings(max_examples=30, deadline=None)
@given(weights, spectral, spectral, etas)
def test_k_matrix_unitarity_and_vacuum(ell, x, xi, eta):
    try:
        a = rkmat.k_coefficients(ell, x, xi, 4, eta)
        b = rkmat.k_coefficients(ell, -x, xi, 4, eta)
    except SingularPoint:
        return
    assert a[0] == 1
    assert np.allclose(a * b, 1, rtol=1e-10)


def test_spin_half_quotient_is_invariant():
    # v_{>=2} of the spin-1/2 Verma module is a submodule
    assert rkmat.quotient_leak(1.3 + 0.1j, 0.2 - 0.3j, 4, 0.6 + 0.1j) < 1e-12


@settings(max_examples=15, deadline=None)
@given(weights, spectral, spectral, etas)
def test_rll_and_crossing(ell, x, y, eta):
    res = solvable(lambda: (harness.rll_residual(ell, x, y, eta), harness.crossing_residual(ell, x, eta)))
    assert res is None or max(res) < 1e-10


def test_r_limit_decays_to_diagonal():
    dist = harness.r_limit_distances(1.5 + 0.2j, 1.4 - 0.1j, 2, 0.8 + 0.1j)
    assert np.all(np.diff(dist) < 0)
    # each step of 2 in Re x gains roughly exp(-2 Re(2 x)) ~ e^-4 against the leading correction
    assert dist[-1] < 1e-4


def test_k_limit():
    ell, xi, eta = 1.3, 0.2 + 0.1j, 0.5
    far = rkmat.k_coefficients(ell, 25.0 + 0.4j, xi, 3, eta)
    assert np.allclose(far, rkmat.k_infinity(ell, xi, 3, eta), rtol=1e-12)


def test_embedding_matches_kron_on_two_legs():
    sp = WeightSpace(2, 2)
    blocks = rkmat.solve_R(1.1, 0.8, 0.3, 2, 0.5)
    emb = rkmat.embed_two_leg(blocks, 0, 1, sp)
    dense = rkmat.blocks_to_dense(blocks, 3)
    idx = [np.ravel_multi_index(d, (4, 4)) for d in sp.comps]
    assert np.allclose(emb, dense[np.ix_(idx, idx)])
    swapped = rkmat.embed_two_leg(rkmat.flip(blocks), 1, 0, sp)
    assert np.allclose(swapped, emb)
