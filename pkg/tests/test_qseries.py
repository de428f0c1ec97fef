import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bqkz.errors import InvalidBase, ZeroArgument
from bqkz.qseries import QBase, SeriesTolerance, log_theta, pm_product, qpoch, theta

BASE = QBase(-0.4 + 0.3j)

# 30-digit values of (z; q^2)_inf and theta(z) at tau = -0.4+0.3i, from mpmath.qp
FROZEN = [
    (0.7 - 0.2j, 0.233285323178156586 + 0.052092939984206472j,
     0.145555556493518130 - 0.158905115199963507j),
    (-3.0 + 1.5j, 14.775004281161133435 + 6.993864195122188644j,
     13.601906654875323572 + 9.940938590846776479j),
]


def brute_qpoch(z, q2, terms=4000):
    out = 1 + 0j
    for m in range(terms):
        out *= 1 - z * q2 ** m
    return out


def series_theta(z, base, terms=60):
    # triple product: (q^2;q^2) theta(z) = sum_n (-1)^n q^{n(n-1)} z^n
    q = base.q
    s = sum((-1) ** n * q ** (n * (n - 1)) * z ** n for n in range(-terms, terms + 1))
    return s / qpoch(base.qsq, base)


def test_invalid_base():
    with pytest.raises(InvalidBase):
        QBase(0.1 + 1j)
    with pytest.raises(InvalidBase):
        QBase(0j)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        SeriesTolerance(rel_tol=0)


@pytest.mark.parametrize("z, pochhammer, th", FROZEN)
def test_frozen_values(z, pochhammer, th):
    assert abs(qpoch(z, BASE) - pochhammer) < 1e-14 * abs(pochhammer)
    assert abs(theta(z, BASE) - th) < 1e-14 * abs(th)


def test_qpoch_vectorized_matches_scalar():
    zs = np.array([0.3, 1j, -2 + 0.5j])
    vec = qpoch(zs, BASE)
    assert vec.shape == (3,)
    for z, v in zip(zs, vec):
        assert abs(qpoch(z, BASE) - v) < 1e-15 * abs(v)


def test_qpoch_error_estimate_is_small():
    value, err = qpoch(0.5 + 0.5j, BASE, return_error=True)
    assert err < 1e-14 * abs(value)


def test_qpoch_empty_product_at_zero():
    assert qpoch(0, BASE) == 1


@settings(max_examples=60, deadline=None)
@given(st.floats(-2, 2), st.floats(-3, 3), st.floats(-1.5, -0.3), st.floats(-1, 1))
def test_qpoch_against_brute_product(lr, arg, tre, tim):
    base = QBase(complex(tre, tim))
    z = cmath.exp(complex(lr, arg))
    exact = brute_qpoch(z, base.qsq)
    assert abs(qpoch(z, base) - exact) <= 1e-12 * max(abs(exact), 1e-3)


@settings(max_examples=60, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-3, 3))
def test_theta_triple_product(lr, arg):
    z = cmath.exp(complex(lr, arg))
    ref = series_theta(z, BASE)
    assert abs(theta(z, BASE) - ref) <= 1e-12 * max(abs(ref), 1)


@settings(max_examples=60, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-3, 3))
def test_theta_quasi_periodicity_and_inversion(lr, arg):
    z = cmath.exp(complex(lr, arg))
    q2 = BASE.qsq
    th = theta(z, BASE)
    assert abs(theta(q2 * z, BASE) + th / z) <= 1e-12 * max(abs(th / z), 1e-2)
    assert abs(theta(q2 / z, BASE) - th) <= 1e-12 * max(abs(th), 1e-2)


def test_theta_far_arguments_use_reduction():
    # theta(q^{2n} z) = (-1)^n z^{-n} q^{-n(n-1)} theta(z)
    z, n = 0.8 + 0.3j, 12
    lhs = theta(BASE.qsq ** n * z, BASE)
    rhs = (-1) ** n * z ** (-n) * BASE.q ** (-n * (n - 1)) * theta(z, BASE)
    assert abs(lhs - rhs) < 1e-11 * abs(rhs)


def test_log_theta_agrees():
    logz = 7.3 - 2.0j
    assert abs(np.exp(log_theta(logz, BASE)) - theta(np.exp(logz), BASE)) < 1e-11 * abs(
        theta(np.exp(logz), BASE))


def test_theta_zero_argument():
    with pytest.raises(ZeroArgument):
        theta(0, BASE)


def test_pm_product():
    f = lambda x: 2 + x
    assert pm_product(f, 0.5) == pytest.approx(2.5 * 1.5)
