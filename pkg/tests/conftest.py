"""Shared fixtures and independent high-precision oracles.

The mpmath helpers below never touch the package: they recompute H from its
explicit integral representation and G from mpmath's own 2F1.
"""

import mpmath as mp
import pytest

from hfunction import gauss_legendre_unit, solve_grid

mp.mp.dps = 30


def mp_h_integral(mu, omega):
    """H from ln H = -(mu/pi) int_0^{pi/2} ln(1 - omega th cot th) / (cos^2 th + mu^2 sin^2 th) dth.

    Valid for 0 <= omega < 1.
    """
    mu = mp.mpf(mu)
    omega = mp.mpf(omega)

    def f(th):
        return mp.log(1 - omega * th * mp.cot(th)) / (mp.cos(th) ** 2 + mu**2 * mp.sin(th) ** 2)

    return float(mp.exp(-mu / mp.pi * mp.quad(f, [0, mp.pi / 4, mp.pi / 2])))


def mp_h_closed(mu, omega):
    """H = G / (G - 2 mu G') with G = mu^(-(1+s)/2) (1 + mu) 2F1(3/2+s/2, 1/2+s/2; 1+s; -1/mu)."""
    mu = mp.mpf(mu)
    s = mp.sqrt(1 - mp.mpf(omega))

    def g(m):
        return m ** (-(1 + s) / 2) * (1 + m) * mp.hyp2f1(1.5 + s / 2, 0.5 + s / 2, 1 + s, -1 / m)

    return float(g(mu) / (g(mu) - 2 * mu * mp.diff(g, mu)))


@pytest.fixture(scope="session")
def grids():
    """Oracle grids at the default order, built once per albedo."""
    cache = {}

    def get(omega, order=96):
        key = (omega, order)
        if key not in cache:
            cache[key] = solve_grid(omega, gauss_legendre_unit(order))
        return cache[key]

    return get


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
