import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfunction.errors import DomainError
from hfunction.moments import (
    MomentSource,
    alpha_closed,
    alpha_quadrature,
    alpha_recurrence,
    closed_form_moments,
    legendre_coeff_from_moments,
    quadrature_moments,
    recurrence_residual,
)


def test_closed_values():
    assert alpha_closed(0, 1.0) == 2.0
    assert alpha_closed(1, 0.75) == pytest.approx(2 / 3, abs=1e-15)
    assert alpha_closed(2, 1.0) == pytest.approx(0.625, abs=1e-15)
    assert alpha_closed(0, 0.0) == 1.0
    assert alpha_closed(1, 0.0) == 0.5
    assert alpha_closed(0, 0.75) == pytest.approx(2 / 0.75 * 0.5, abs=1e-15)


def test_closed_form_vector():
    v = closed_form_moments(0.5)
    assert v.source is MomentSource.CLOSED_FORM
    assert v.n_max == 2


def test_zero_albedo_recurrence_exact():
    m = alpha_recurrence(0.0, 30)
    assert all(m[n] == 1.0 / (n + 1) for n in range(31))


def test_conservative_recurrence():
    ref = [2.0, 1.0, 0.625, 5.25 / 12, 5.265625 / 16]
    assert np.allclose(alpha_recurrence(1.0, 4).alphas, ref, atol=1e-10, rtol=0)
    assert round(ref[4], 7) == 0.3291016


@pytest.mark.parametrize("omega", np.linspace(0, 1, 50))
def test_recurrence_matches_closed_forms(omega):
    m = alpha_recurrence(float(omega), 12)
    assert abs(m[0] - alpha_closed(0, omega)) <= 1e-12
    assert abs(m[1] - alpha_closed(1, omega)) <= 1e-12
    assert recurrence_residual(m) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(omega=st.floats(0.0, 1.0))
def test_recurrence_vector_shape(omega):
    a = np.array(alpha_recurrence(omega, 20).alphas)
    assert 1.0 <= a[0] <= 2.0
    assert np.all(a > 0)
    assert np.all(np.diff(a) < 0)


def test_alpha2_formula_only_agrees_at_unit_albedo():
    assert alpha_closed(2, 1.0) == pytest.approx(alpha_recurrence(1.0, 2)[2], abs=1e-14)
    assert alpha_recurrence(1e-8, 2)[2] == pytest.approx(1 / 3, abs=1e-8)
    assert alpha_closed(2, 1e-3) < 1e-3
    assert abs(alpha_closed(2, 0.5) - alpha_recurrence(0.5, 2)[2]) > 0.1


def test_bridge_low_orders():
    for w in (0.1, 0.6, 1.0):
        m = alpha_recurrence(w, 4)
        assert legendre_coeff_from_moments(0, m) == m[0]
        assert abs(legendre_coeff_from_moments(1, m)) < 1e-12
    m1 = alpha_recurrence(1.0, 2)
    assert legendre_coeff_from_moments(2, m1) == pytest.approx(-0.25, abs=1e-14)


def test_bridge_odd_vanish():
    for w in np.linspace(0.05, 1.0, 20):
        m = alpha_recurrence(float(w), 8)
        for n in (1, 3, 5, 7):
            assert abs(legendre_coeff_from_moments(n, m)) <= 1e-10


def test_bridge_errors():
    m = alpha_recurrence(0.5, 2)
    with pytest.raises(DomainError):
        legendre_coeff_from_moments(3, m)
    with pytest.raises(DomainError):
        legendre_coeff_from_moments(-1, m)
    with pytest.raises(DomainError):
        alpha_closed(3, 0.5)
    with pytest.raises(DomainError):
        alpha_recurrence(0.5, 65)
    with pytest.raises(DomainError):
        alpha_recurrence(-0.1, 3)


def test_quadrature_moments(grids):
    assert alpha_quadrature(0, grids(0.0)) == pytest.approx(1.0, abs=1e-14)
    assert abs(alpha_quadrature(0, grids(0.75)) - 4 / 3) < 1e-6
    # the oracle alpha_1 at unit albedo is 2/sqrt(3), not the value 1 of the alpha_1 formula
    assert alpha_quadrature(1, grids(1.0)) == pytest.approx(2 / math.sqrt(3), abs=1e-5)
    v = quadrature_moments(grids(0.5), 6)
    assert v.source is MomentSource.QUADRATURE
    assert np.all(np.diff(v.alphas) < 0)
    with pytest.raises(DomainError):
        alpha_quadrature(-1, grids(0.5))


def test_quadrature_moments_satisfy_alpha0_only(grids):
    # the oracle obeys the alpha_0 relation but not the higher-order recurrence
    g = grids(0.9)
    q = quadrature_moments(g, 3)
    rec = alpha_recurrence(0.9, 3)
    assert abs(q[0] - rec[0]) < 1e-10
    assert abs(q[1] - rec[1]) > 1e-2
