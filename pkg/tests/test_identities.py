import math

import numpy as np
import pytest

from hfunction.errors import DomainError
from hfunction.identities import (
    ASSERTED_IDS,
    DIAGNOSTIC_IDS,
    algebraic_residuals,
    weighted_pair_quadrature,
    run_identities,
    z0_quadrature,
    z1_quadrature,
    z2_quadrature,
)
from hfunction.numerics import gauss_legendre_unit

RULE = gauss_legendre_unit(64)
CHECK_MUS = [round(0.1 * i, 1) for i in range(1, 10)]


def ones(x):
    return np.ones_like(x)


def test_z1_pair_for_unit_h(grids):
    a, b = z1_quadrature(1.0, grids(0.0), RULE)
    assert abs(a - b) < 1e-12
    a, b = z1_quadrature(1.0, ones, RULE)
    assert abs(a - b) < 1e-12


def test_z1_pair_oracle(grids):
    a, b = z1_quadrature(0.5, grids(0.5), RULE)
    assert abs(a - b) < 1e-10


def test_z2_bounds_and_symmetry():
    z0 = z0_quadrature(1.0, ones, RULE)
    z2 = z2_quadrature(1.0, ones, RULE)
    assert 0 < z2 < z0**2
    assert z0 == pytest.approx(math.log(2.0), abs=1e-12)
    x = RULE.nodes
    t, u = x[:, None], x[None, :]
    ww = np.outer(RULE.weights, RULE.weights)
    swapped = float(np.sum(ww * u * t / ((1 + u) * (1 + t) * (t + u))))
    assert abs(z2 - swapped) < 1e-12


def test_unit_h_z0_expansion():
    r = algebraic_residuals(1.0, ones, 0.0, RULE)
    assert abs(r["z0_expansion"]) < 1e-10


@pytest.mark.parametrize("omega", [0.3, 0.6, 0.9])
def test_asserted_identities_oracle(grids, omega):
    for mu in CHECK_MUS:
        rep = run_identities(mu, grids(omega), RULE, closed_inputs=False)
        assert set(rep.asserted) == set(ASSERTED_IDS)
        assert rep.passed(1e-6), (mu, omega, rep.failures())


def test_report_fields(grids):
    rep = run_identities(0.5, grids(0.5), RULE)
    assert set(rep.residuals) == set(ASSERTED_IDS) | set(DIAGNOSTIC_IDS)
    assert abs(rep.closed_residuals["riccati_z0"]) < 1e-5
    assert set(rep.closed_residuals) == set(DIAGNOSTIC_IDS) | {"z0_closed_gap"}


def test_riccati_closed_inputs_on_check_grid(grids):
    for omega in (0.3, 0.6, 0.9):
        for mu in CHECK_MUS:
            rep = run_identities(mu, grids(omega), RULE)
            assert abs(rep.closed_residuals["riccati_z0"]) < 1e-5


def test_diagnostics_reported_not_asserted(grids):
    # the integral-equation solution does not satisfy the differentiated form
    rep = run_identities(0.5, grids(1.0), RULE, closed_inputs=False)
    assert all(math.isfinite(rep.residuals[k]) for k in DIAGNOSTIC_IDS)
    assert rep.passed()
    assert abs(rep.residuals["riccati_z0"]) > 1e-2


@pytest.mark.parametrize("mu", [0.1, 0.5, 1.0])
def test_h_independent_identities(grids, mu):
    rng = np.random.default_rng(int(mu * 10))
    coeffs = rng.uniform(0.1, 2.0, size=6)
    for h in (ones, lambda x: np.polyval(coeffs, x), grids(0.6), np.exp(RULE.nodes)):
        a, b = z1_quadrature(mu, h, RULE)
        assert abs(a - b) < 1e-10
        i10, i11 = weighted_pair_quadrature(mu, h, RULE)
        assert abs(i10 + i11 - z0_quadrature(mu, h, RULE) ** 2) < 1e-9
        r = algebraic_residuals(mu, h, 0.6, RULE)
        assert abs(r["z1_split"]) < 1e-9


def test_errors(grids):
    with pytest.raises(DomainError):
        run_identities(0.0, grids(0.5), RULE)
    with pytest.raises(DomainError):
        run_identities(0.1, grids(0.5), RULE, fd_step=0.2)
    with pytest.raises(DomainError):
        z0_quadrature(0.5, np.ones(3), RULE)
