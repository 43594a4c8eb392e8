"""Moments alpha_n = int_0^1 mu^n H(mu) dmu and their link to shifted-Legendre coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .numerics import shifted_legendre_p_coefficients

__all__ = [
    "MomentSource",
    "MomentVector",
    "alpha_closed",
    "alpha_recurrence",
    "closed_form_moments",
    "alpha_quadrature",
    "quadrature_moments",
    "legendre_coeff_from_moments",
    "recurrence_residual",
]

MAX_RECURRENCE_ORDER = 64


class MomentSource(str, Enum):
    CLOSED_FORM = "closed_form"
    RECURRENCE = "recurrence"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class MomentVector:
    omega: float
    alphas: tuple
    source: MomentSource

    @property
    def n_max(self) -> int:
        return len(self.alphas) - 1

    def __getitem__(self, n):
        return self.alphas[n]


def _check_omega(omega):
    if not 0.0 <= omega <= 1.0:
        raise DomainError(f"omega must lie in [0, 1], got {omega}")


def alpha_closed(n: int, omega: float) -> float:
    """The explicit moment formulas for n = 0, 1, 2.

    alpha_0 = 2 (1 - s) / omega and alpha_1 = 1 / (1 + s) with s = sqrt(1 - omega).
    alpha_0 is evaluated as 2 / (1 + s), which equals the above and has no
    0/0 at omega = 0.  alpha_2 is the formula

        (3 omega - 8 (1 - s)) / (4 (4 - 6 omega + (omega - 6) s))

    kept as given.  It agrees with the recurrence only at omega = 1; see
    :func:`alpha_recurrence`, which is the one to trust.
    """
    _check_omega(omega)
    s = math.sqrt(1.0 - omega)
    if n == 0:
        return 2.0 / (1.0 + s)
    if n == 1:
        return 1.0 / (1.0 + s)
    if n == 2:
        return (3.0 * omega - 8.0 * (1.0 - s)) / (4.0 * (4.0 - 6.0 * omega + (omega - 6.0) * s))
    raise DomainError(f"closed-form moments exist only for n in (0, 1, 2), got {n}")


def closed_form_moments(omega: float) -> MomentVector:
    alphas = tuple(alpha_closed(n, omega) for n in range(3))
    return MomentVector(omega=omega, alphas=alphas, source=MomentSource.CLOSED_FORM)


def alpha_recurrence(omega: float, n_max: int) -> MomentVector:
    """Moments from 4 (n + 1) alpha_n = 4 + omega sum_{m=0}^{n} alpha_m alpha_{n-m}.

    Solved for the newest moment as
    alpha_n = (4 + omega sum_{m=1}^{n-1} alpha_m alpha_{n-m}) / (4 (n+1) - 2 omega alpha_0),
    seeded with the root alpha_0 = 2 / (1 + s) that stays finite as omega -> 0.
    """
    _check_omega(omega)
    if not 0 <= n_max <= MAX_RECURRENCE_ORDER:
        raise DomainError(f"n_max must lie in [0, {MAX_RECURRENCE_ORDER}], got {n_max}")
    s = math.sqrt(1.0 - omega)
    alphas = [2.0 / (1.0 + s)]
    for n in range(1, n_max + 1):
        conv = math.fsum(alphas[m] * alphas[n - m] for m in range(1, n))
        alphas.append((4.0 + omega * conv) / (4.0 * (n + 1) - 2.0 * omega * alphas[0]))
    return MomentVector(omega=omega, alphas=tuple(alphas), source=MomentSource.RECURRENCE)


def recurrence_residual(moments: MomentVector) -> float:
    """Largest |4 (n+1) alpha_n - 4 - omega sum alpha_m alpha_{n-m}| over the vector."""
    a = moments.alphas
    worst = 0.0
    for n in range(len(a)):
        conv = math.fsum(a[m] * a[n - m] for m in range(n + 1))
        worst = max(worst, abs(4.0 * (n + 1) * a[n] - 4.0 - moments.omega * conv))
    return worst


def alpha_quadrature(n: int, grid) -> float:
    """Gauss quadrature of mu^n H(mu) over a converged :class:`~hfunction.integral_solver.HGrid`."""
    if n < 0:
        raise DomainError(f"moment order must be non-negative, got {n}")
    x = grid.rule.nodes
    return grid.rule.integrate(x**n * grid.h_values)


def quadrature_moments(grid, n_max: int) -> MomentVector:
    x = grid.rule.nodes
    alphas = tuple(grid.rule.integrate(x**n * grid.h_values) for n in range(n_max + 1))
    return MomentVector(omega=grid.omega, alphas=alphas, source=MomentSource.QUADRATURE)


def legendre_coeff_from_moments(n: int, moments: MomentVector) -> float:
    """A_n = int_0^1 P_n(2mu - 1) H(mu) dmu written as a combination of moments."""
    if n < 0:
        raise DomainError(f"coefficient index must be non-negative, got {n}")
    if moments.n_max < n:
        raise DomainError(f"need moments through alpha_{n}, have only {moments.n_max}")
    coeffs = shifted_legendre_p_coefficients(n)
    return math.fsum(c * a for c, a in zip(coeffs, moments.alphas[: n + 1]))
