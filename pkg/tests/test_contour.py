import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bqkz import contour, harness, quad
from bqkz.errors import DomainError, Infeasible, PoleOnContour, SectorViolation
from bqkz.qseries import QBase
from bqkz.weightspace import Params, enumerate_I, occupation, position_index

from conftest import STANDARD_POINTS, standard_params


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_base_points_are_admissible_and_symmetric(seed):
    rng = np.random.default_rng(seed)
    N, M = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    p = harness.random_params(rng, N, M)
    for k in enumerate_I(M, N):
        # base points only constrain occupied legs; the domain covers every leg
        occupied_fail = any(f"ell_{r}" in name for name in contour.in_domain(p, k).violated
                            for r in range(1, N + 1) if occupation(k, r))
        if occupied_fail:
            with pytest.raises(Infeasible):
                contour.find_gamma(p, k)
            continue
        spec = contour.find_gamma(p, k)
        assert contour.gamma_violations(p, k, spec.gamma) == []
        for r in range(1, N + 1):
            g = [spec.gamma[position_index(k, s, r) - 1].real for s in range(1, occupation(k, r) + 1)]
            assert abs(sum(g)) < 1e-12
            assert g == sorted(g, reverse=True)


def test_domain_margins_name_the_failing_leg():
    p = Params(QBase(-0.5), 0.5, 0.1, 0.1, (1.0, -0.2), 1)
    check = contour.in_domain(p, (2,))
    assert not check.ok
    assert any("ell_2" in name for name in check.violated)


def test_tau_inequality_at_standard_parameters():
    p = standard_params()
    assert all(contour.tau_inequality(p, k).ok for k in enumerate_I(2, 2))
    p_far = Params(QBase(-3.0), p.eta, p.xi_plus, p.xi_minus, p.ell, 2)
    assert not contour.tau_inequality(p_far, (1, 1)).ok


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-2, 14), st.floats(-2, 2)), min_size=2, max_size=2))
def test_sectors_are_nested_and_shift_stable(pts):
    p = standard_params()
    t = np.array([complex(a, b) for a, b in pts])
    tau_ok = contour.in_sector(t, "A_tilde_tau", p).ok
    tilde_ok = contour.in_sector(t, "A_tilde", p).ok
    plain_ok = contour.in_sector(t, "A", p).ok
    assert not tau_ok or tilde_ok
    assert not tilde_ok or plain_ok
    if tau_ok:
        for r in range(2):
            s = t.copy()
            s[r] += p.tau
            assert contour.in_sector(s, "A_tilde", p).ok


def test_standard_points_sit_near_the_boundary():
    p = standard_params()
    for t in STANDARD_POINTS:
        check = contour.in_sector(t, "A_tilde_tau", p)
        assert check.ok
        assert min(check.margins.values()) < 1.0


@pytest.mark.parametrize("k", enumerate_I(2, 2))
def test_contours_separate_poles_at_standard_points(k):
    p = standard_params()
    spec = contour.find_gamma(p, k)
    for t in STANDARD_POINTS:
        assert contour.check_separation(spec, t, p) > 0


def test_pole_on_contour_is_reported():
    p = standard_params()
    spec = contour.ContourSpec((1, 2), (0j, 0j))
    t = np.array([1.0, 0.9])  # second leg poles cross the first contour
    with pytest.raises(PoleOnContour):
        contour.check_separation(spec, t, p)


def test_solution_refuses_points_outside_the_sector():
    p = standard_params()
    with pytest.raises(SectorViolation):
        quad.theta_solution(p, (1, 2), np.array([2.0, 1.0]))


def test_solution_refuses_parameters_outside_the_domain():
    p = Params(QBase(-0.5), 0.5, 0.1, 0.1, (1.0, -0.2), 1)
    with pytest.raises(DomainError):
        quad.theta_solution(p, (2,), np.array([8.0, 3.0]))


def test_anchored_segments_have_height_pi():
    spec = contour.ContourSpec((1, 2), (0.1 + 0j, -0.2 + 0j))
    segs = spec.anchored([3.0 + 0.5j, 1.0])
    assert segs[0][0] == 3.1 + 0.5j
    assert segs[1][1] - segs[1][0] == np.pi * 1j
