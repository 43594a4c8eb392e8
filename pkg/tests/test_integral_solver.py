import math

import numpy as np
import pytest

from conftest import mp_h_integral
from hfunction.errors import ConvergenceError, DomainError
from hfunction.integral_solver import h_oracle, solve_grid, z0_oracle
from hfunction.numerics import gauss_legendre_unit

OMEGAS = [round(0.1 * i, 1) for i in range(1, 11)]
MUS = np.array([round(0.05 * i, 2) for i in range(1, 21)])


def test_zero_albedo_is_one_after_one_iteration():
    g = solve_grid(0.0)
    assert np.all(g.h_values == 1.0)
    assert g.iterations == 1


def test_tabulated_chr_values(grids):
    assert abs(h_oracle(0.5, grids(0.5)) - 1.18776) <= 2e-4
    assert abs(h_oracle(1.0, grids(1.0)) - 2.90780) <= 5e-4
    assert abs(h_oracle(0.2, grids(0.3)) - 1.06115) <= 2e-4
    assert abs(h_oracle(0.05, grids(0.9)) - 1.09990) <= 3e-4


@pytest.mark.parametrize("mu, omega", [(0.5, 0.5), (0.05, 0.9), (1.0, 0.9), (0.3, 0.99), (1.0, 0.2)])
def test_against_explicit_integral(grids, mu, omega):
    assert h_oracle(mu, grids(omega)) == pytest.approx(mp_h_integral(mu, omega), abs=1e-9)


def test_conservative_case_near_unit_albedo(grids):
    # the explicit integral is regular just below omega = 1; H is continuous there
    assert h_oracle(1.0, grids(1.0)) == pytest.approx(mp_h_integral(1.0, 1 - 1e-10), abs=1e-4)


def test_grid_invariants(grids):
    prev = None
    for w in OMEGAS:
        g = grids(w)
        assert np.all(g.h_values >= 1.0)
        assert np.all(np.diff(g.h_values) > 0)
        assert g.final_update < 1e-12
        h = h_oracle(MUS, g)
        if prev is not None:
            assert np.all(h > prev)
        prev = h


def test_refinement_stability(grids):
    for w in OMEGAS:
        d = np.max(np.abs(h_oracle(MUS, grids(w, 48)) - h_oracle(MUS, grids(w))))
        assert d < (1e-6 if w == 1.0 else 1e-8)


def test_alpha0_identity(grids):
    for w in OMEGAS:
        g = grids(w)
        a0 = g.rule.integrate(g.h_values)
        assert abs(a0 - 2 / w * (1 - math.sqrt(1 - w))) < (1e-4 if w == 1.0 else 1e-6)


def test_fixed_point_residual(grids):
    for w in (0.3, 0.9, 1.0):
        g = grids(w)
        x, wt, h = g.rule.nodes, g.rule.weights, g.h_values
        integral = (1.0 / (x[:, None] + x[None, :])) @ (wt * h)
        assert np.max(np.abs(h - 1 - 0.5 * w * x * h * integral)) < 1e-11


def test_oracle_extension(grids):
    g = grids(0.5)
    assert h_oracle(0.0, g) == 1.0
    assert np.allclose(h_oracle(g.nodes, g), g.h_values, atol=1e-12)
    assert g(0.5) == h_oracle(0.5, g)


def test_z0_oracle(grids):
    assert z0_oracle(0.5, grids(0.0)) == pytest.approx(math.log(3.0), abs=1e-10)
    from_table = 2 / (0.5 * 0.5) * (1 - 1 / 1.18776)
    assert z0_oracle(0.5, grids(0.5)) == pytest.approx(from_table, abs=2e-3)
    rng = np.random.default_rng(5)
    g = grids(0.7)
    for mu in rng.uniform(0.01, 1.0, 50):
        assert z0_oracle(mu, g) == pytest.approx(2 / (0.7 * mu) * (1 - 1 / h_oracle(mu, g)), abs=1e-10)


@pytest.mark.parametrize("acc", ["none", "aitken", "newton"])
def test_accelerations_agree(acc):
    ref = solve_grid(0.8, gauss_legendre_unit(32), acceleration="newton")
    g = solve_grid(0.8, gauss_legendre_unit(32), acceleration=acc)
    assert np.allclose(g.h_values, ref.h_values, atol=1e-11)
    assert g.acceleration == acc


def test_aitken_needs_fewer_iterations():
    rule = gauss_legendre_unit(32)
    assert solve_grid(0.95, rule, acceleration="aitken").iterations < solve_grid(
        0.95, rule, acceleration="none").iterations


def test_convergence_error_carries_last_iterate():
    with pytest.raises(ConvergenceError) as info:
        solve_grid(0.9, gauss_legendre_unit(16), max_iter=3, acceleration="none")
    err = info.value
    assert err.iterations == 3
    assert err.partial.h_values.shape == (16,)
    assert err.residual > 1e-12


def test_input_validation():
    with pytest.raises(DomainError):
        solve_grid(1.1)
    with pytest.raises(DomainError):
        solve_grid(0.5, gauss_legendre_unit(4))
    with pytest.raises(DomainError):
        solve_grid(0.5, tol=1e-16)
    with pytest.raises(DomainError):
        solve_grid(0.5, max_iter=0)
    with pytest.raises(DomainError):
        solve_grid(0.5, acceleration="magic")
    g = solve_grid(0.5, gauss_legendre_unit(16))
    with pytest.raises(DomainError):
        h_oracle(-0.1, g)
    with pytest.raises(DomainError):
        z0_oracle(0.0, g)


def test_grid_is_immutable(grids):
    with pytest.raises(ValueError):
        grids(0.5).h_values[0] = 2.0
