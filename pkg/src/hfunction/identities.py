"""Numerical replay of the integral identities behind the Riccati form.

All double integrals over (t, u) in [0, 1]^2 use the tensor product of one
Gauss-Legendre rule.  With Z0(mu) = int H(t)/(mu + t) dt the quantities are

    Z1 = int int t H(t) H(u) / ((mu + t)(u + t))       (t-weighted form)
       = int int u H(t) H(u) / ((mu + u)(u + t))       (u-weighted form)
    Z2 = int int t u H(t) H(u) / ((mu + t)(mu + u)(u + t))

and the checked relations are

    z0_expansion  Z0 = log(1 + 1/mu) + (omega/2) Z1
    z1_symmetry   the two forms of Z1 agree
    t_weighted    int int t HH / ((mu+t)(mu+u)(u+t)) = Z0^2 / 2
    u_weighted    int int u HH / ((mu+t)(mu+u)(u+t)) = Z0^2 / 2
    z1_split      Z1 = (mu/2) Z0^2 + Z2
    dz1_dmu       dZ1/dmu = -Z0^2 / 2
    riccati_z0    dZ0/dmu + (omega/4) Z0^2 = -1 / (mu (1 + mu))
    riccati_h     dH/dmu - (1/(2mu) - omega/(2(1+mu))) H^2 = -1/(2mu)

z1_symmetry, z1_split and the sum of the two weighted integrals are
algebraic and hold for any H.  z0_expansion needs H to solve the integral
equation.  The last three are differentiated forms; they are only
reported, never asserted, because the integral-equation solution does not
satisfy them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .closed_form import MIN_CLOSED_MU, h_closed, z0_closed
from .errors import DomainError
from .integral_solver import HGrid, h_oracle, z0_oracle
from .numerics import QuadratureRule, gauss_legendre_unit

__all__ = [
    "ASSERTED_IDS",
    "DIAGNOSTIC_IDS",
    "IdentityReport",
    "z0_quadrature",
    "z1_quadrature",
    "z2_quadrature",
    "weighted_pair_quadrature",
    "run_identities",
]

ASSERTED_IDS = ("z0_expansion", "z1_symmetry", "t_weighted", "u_weighted", "z1_split")
DIAGNOSTIC_IDS = ("dz1_dmu", "riccati_z0", "riccati_h")
DEFAULT_IDENTITY_ORDER = 64


@dataclass(frozen=True)
class IdentityReport:
    """Residuals at one (mu, omega).

    ``residuals`` holds every identity evaluated with the integral-equation
    solution.  ``closed_residuals`` holds the diagnostic ids (plus ``z0_closed_gap``,
    the gap between the closed-form Z0 and the quadrature of the closed-form
    H) evaluated with closed-form input.
    """

    mu: float
    omega: float
    residuals: dict
    closed_residuals: dict = field(default_factory=dict)
    asserted: tuple = ASSERTED_IDS

    def failures(self, tol: float = 1e-6) -> list[str]:
        return [k for k in self.asserted if not abs(self.residuals[k]) < tol]

    def passed(self, tol: float = 1e-6) -> bool:
        return not self.failures(tol)


def _samples(h, rule: QuadratureRule) -> np.ndarray:
    """H at the nodes of ``rule``; ``h`` is an HGrid, a callable, or an array."""
    if isinstance(h, HGrid):
        return np.asarray(h_oracle(rule.nodes, h))
    if callable(h):
        return np.asarray(h(rule.nodes), dtype=float)
    arr = np.asarray(h, dtype=float)
    if arr.shape != rule.nodes.shape:
        raise DomainError("H samples must match the rule's node count")
    return arr


def _check_mu(mu):
    if not mu > 0.0:
        raise DomainError(f"identity checks need mu > 0, got {mu}")


def _default_rule(rule):
    return gauss_legendre_unit(DEFAULT_IDENTITY_ORDER) if rule is None else rule


def z0_quadrature(mu: float, h, rule: QuadratureRule | None = None) -> float:
    rule = _default_rule(rule)
    _check_mu(mu)
    hx = _samples(h, rule)
    return rule.integrate(hx / (mu + rule.nodes))


def _pair_arrays(mu, h, rule):
    rule = _default_rule(rule)
    _check_mu(mu)
    hx = _samples(h, rule)
    x = rule.nodes
    t = x[:, None]
    u = x[None, :]
    whh = np.outer(rule.weights * hx, rule.weights * hx)
    return t, u, whh


def z1_quadrature(mu: float, h, rule: QuadratureRule | None = None) -> tuple[float, float]:
    """Both orderings of the Z1 double integral, (t-weighted, u-weighted)."""
    t, u, whh = _pair_arrays(mu, h, rule)
    first = float(np.sum(whh * t / ((mu + t) * (u + t))))
    second = float(np.sum(whh * u / ((mu + u) * (u + t))))
    return first, second


def z2_quadrature(mu: float, h, rule: QuadratureRule | None = None) -> float:
    t, u, whh = _pair_arrays(mu, h, rule)
    return float(np.sum(whh * t * u / ((mu + t) * (mu + u) * (u + t))))


def weighted_pair_quadrature(mu: float, h, rule: QuadratureRule | None = None) -> tuple[float, float]:
    """The t- and u-weighted triple-denominator integrals."""
    t, u, whh = _pair_arrays(mu, h, rule)
    den = (mu + t) * (mu + u) * (u + t)
    return float(np.sum(whh * t / den)), float(np.sum(whh * u / den))


def _central(f, x, step):
    """Central difference refined by one Richardson step."""
    d1 = (f(x + step) - f(x - step)) / (2.0 * step)
    half = 0.5 * step
    d2 = (f(x + half) - f(x - half)) / (2.0 * half)
    return (4.0 * d2 - d1) / 3.0


def algebraic_residuals(mu: float, h, omega: float, rule: QuadratureRule | None = None) -> dict:
    """z0_expansion and the H-independent z1_symmetry-z1_split for any H sampler."""
    rule = _default_rule(rule)
    z0 = z0_quadrature(mu, h, rule)
    z1a, z1b = z1_quadrature(mu, h, rule)
    i10, i11 = weighted_pair_quadrature(mu, h, rule)
    z2 = z2_quadrature(mu, h, rule)
    return {
        "z0_expansion": z0 - math.log1p(1.0 / mu) - 0.5 * omega * z1b,
        "z1_symmetry": z1a - z1b,
        "t_weighted": i10 - 0.5 * z0 * z0,
        "u_weighted": i11 - 0.5 * z0 * z0,
        "z1_split": z1a - 0.5 * mu * z0 * z0 - z2,
    }


def _differential_residuals(mu, omega, h_fn, z0_fn, z1_fn, step):
    """Relative residuals of the differentiated forms for the given H, Z0 and Z1 evaluators."""
    z0 = z0_fn(mu)
    h = h_fn(mu)
    src21 = 1.0 / (mu * (1.0 + mu))
    out = {
        "riccati_z0": (_central(z0_fn, mu, step) + 0.25 * omega * z0 * z0 + src21) / src21,
        "riccati_h": (
            _central(h_fn, mu, step)
            - (0.5 / mu - 0.5 * omega / (1.0 + mu)) * h * h
            + 0.5 / mu
        ) * 2.0 * mu,
    }
    if z1_fn is not None:
        out["dz1_dmu"] = (_central(z1_fn, mu, step) + 0.5 * z0 * z0) / (0.5 * z0 * z0)
    return out


def run_identities(mu: float, grid: HGrid, rule: QuadratureRule | None = None,
                   fd_step: float | None = None, *, closed_inputs: bool = True) -> IdentityReport:
    """Evaluate every identity at ``mu`` for the solution held in ``grid``.

    The differential diagnostics are relative: riccati_z0 is divided by
    1/(mu(1+mu)), riccati_h by 1/(2mu), dz1_dmu by Z0^2/2.  With ``closed_inputs``
    the diagnostics are repeated with the closed-form H and Z0, together with
    ``z0_closed_gap`` = z0_closed(mu) - int h_closed(t)/(mu+t) dt.
    """
    rule = _default_rule(rule)
    _check_mu(mu)
    if fd_step is None:
        fd_step = 1e-4 * mu
    if not mu > fd_step:
        raise DomainError(f"fd_step {fd_step} too large for mu={mu}")
    omega = grid.omega

    residuals = algebraic_residuals(mu, grid, omega, rule)
    residuals.update(
        _differential_residuals(
            mu, omega,
            h_fn=lambda m: h_oracle(m, grid),
            z0_fn=lambda m: z0_oracle(m, grid),
            z1_fn=lambda m: z1_quadrature(m, grid, rule)[1],
            step=fd_step,
        )
    )

    closed = {}
    if closed_inputs and omega > 0.0:
        min_mu = min(MIN_CLOSED_MU, float(rule.nodes[0]))
        hx_closed = np.array([h_closed(x, omega, min_mu=min_mu) for x in rule.nodes])
        closed = _differential_residuals(
            mu, omega,
            h_fn=lambda m: h_closed(m, omega, tol=1e-15),
            z0_fn=lambda m: z0_closed(m, omega, tol=1e-15),
            z1_fn=lambda m: z1_quadrature(m, hx_closed, rule)[1],
            step=fd_step,
        )
        closed["z0_closed_gap"] = z0_closed(mu, omega) - z0_quadrature(mu, hx_closed, rule)
    return IdentityReport(mu=mu, omega=omega, residuals=residuals, closed_residuals=closed)
