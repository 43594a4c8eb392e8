"""Closed-form H-function through the hypergeometric solution of the linearised Riccati equation.

Writing Z0 = (4 / omega) G'/G turns the Riccati equation for Z0 into

    G'' + omega / (4 mu (1 + mu)) G = 0,

whose solution with the right behaviour at large mu is

    G(mu, omega) = mu^(-(1+s)/2) (1 + mu) 2F1(3/2 + s/2, 1/2 + s/2; 1 + s; -1/mu),

with s = sqrt(1 - omega).  The H-function then follows from
H = G / (G - 2 mu G').  Any constant factor on G cancels in that ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, PoleError
from .numerics import Hyp2F1Params, hyp2f1, hyp2f1_derivative

__all__ = [
    "EvalPoint",
    "GValue",
    "MIN_CLOSED_MU",
    "g_value",
    "h_closed",
    "z0_closed",
    "ode_residual",
]

#: Below this the transformed 2F1 argument 1/(1+mu) is so close to 1 that
#: the series needs tens of thousands of terms; refuse rather than crawl.
MIN_CLOSED_MU = 1e-3
DEFAULT_HYP_TOL = 1e-12


@dataclass(frozen=True)
class EvalPoint:
    """A validated (mu, omega) pair.

    ``mu`` may exceed 1 so the large-mu limit can be probed; ``physical``
    says whether the point lies on the physical domain mu <= 1.
    """

    mu: float
    omega: float
    s: float = field(init=False, repr=False)

    def __post_init__(self):
        mu, omega = float(self.mu), float(self.omega)
        if math.isnan(mu) or mu < 0.0 or math.isinf(mu):
            raise DomainError(f"mu must be a finite value >= 0, got {self.mu}")
        if not 0.0 <= omega <= 1.0:
            raise DomainError(f"omega must lie in [0, 1], got {self.omega}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "s", math.sqrt(1.0 - omega))

    @property
    def physical(self) -> bool:
        return self.mu <= 1.0


@dataclass(frozen=True)
class GValue:
    g: float
    dg_dmu: float
    mu: float
    omega: float

    @property
    def log_derivative(self) -> float:
        return self.dg_dmu / self.g


def _as_point(point, omega=None) -> EvalPoint:
    if isinstance(point, EvalPoint):
        return point
    return EvalPoint(point, omega)


def _log_derivative(mu: float, omega: float, tol: float) -> tuple[float, float]:
    """Return (log G, G'/G) without forming G itself."""
    s = math.sqrt(1.0 - omega)
    params = Hyp2F1Params.albedo_family(omega, -1.0 / mu)
    f = hyp2f1(params, tol=tol)
    df = hyp2f1_derivative(params, tol=tol)
    log_g = -0.5 * (1.0 + s) * math.log(mu) + math.log1p(mu) + math.log(f)
    dlog = -0.5 * (1.0 + s) / mu + 1.0 / (1.0 + mu) + df / (f * mu * mu)
    return log_g, dlog


def g_value(point, omega=None, *, tol: float = DEFAULT_HYP_TOL) -> GValue:
    """G(mu, omega) and its analytic mu-derivative.

    Accepts an :class:`EvalPoint` or a bare ``(mu, omega)`` pair.  At
    omega = 0 the hypergeometric factor collapses to mu / (1 + mu), so G is
    identically 1 there.
    """
    p = _as_point(point, omega)
    if p.mu <= 0.0:
        raise DomainError("G is singular at mu = 0; H(0, omega) = 1 is handled by the caller")
    log_g, dlog = _log_derivative(p.mu, p.omega, tol)
    g = math.exp(log_g)
    return GValue(g=g, dg_dmu=g * dlog, mu=p.mu, omega=p.omega)


def _check_closed_mu(p: EvalPoint, min_mu: float = MIN_CLOSED_MU) -> None:
    if p.mu < min_mu:
        raise DomainError(f"closed form needs mu >= {min_mu} (or mu = 0 exactly), got {p.mu}")


def h_closed(point, omega=None, *, tol: float = DEFAULT_HYP_TOL,
             min_mu: float = MIN_CLOSED_MU) -> float:
    """H(mu, omega) = G / (G - 2 mu G').

    mu = 0 and omega = 0 return exactly 1 without touching G.  Points with
    0 < mu < ``min_mu`` raise DomainError; lowering ``min_mu`` trades that
    guard for long 2F1 series near mu = 0.
    """
    p = _as_point(point, omega)
    if p.mu == 0.0 or p.omega == 0.0:
        return 1.0
    _check_closed_mu(p, min_mu)
    _, dlog = _log_derivative(p.mu, p.omega, tol)
    denom = 1.0 - 2.0 * p.mu * dlog
    if abs(denom) < 1e-13:
        raise PoleError(f"G - 2 mu G' vanishes at mu={p.mu}, omega={p.omega}")
    return 1.0 / denom


def z0_closed(point, omega=None, *, tol: float = DEFAULT_HYP_TOL,
              min_mu: float = MIN_CLOSED_MU) -> float:
    """Z0 = (4 / (omega G)) dG/dmu, the integral int_0^1 H(t) / (mu + t) dt in closed form."""
    p = _as_point(point, omega)
    if p.mu <= 0.0:
        raise DomainError(f"Z0 diverges at mu = 0, got mu={p.mu}")
    if p.omega == 0.0:
        raise DomainError("Z0 from G is 0/0 at omega = 0; use log(1 + 1/mu)")
    _check_closed_mu(p, min_mu)
    _, dlog = _log_derivative(p.mu, p.omega, tol)
    return 4.0 * dlog / p.omega


def ode_residual(point, omega=None, h_step: float | None = None, *, tol: float = 1e-15) -> float:
    """Relative residual of G'' + omega G / (4 mu (1 + mu)) = 0.

    G'' is a central difference of the analytic G', which keeps the
    rounding noise at eps |G'| / h instead of eps |G| / h^2.  The residual
    is scaled by |G| omega / (4 mu (1 + mu)), or by |G| / mu^2 at omega = 0
    where that coefficient vanishes.
    """
    p = _as_point(point, omega)
    if h_step is None:
        h_step = 1e-4 * p.mu
    if not p.mu > 2.0 * h_step:
        raise DomainError(f"need mu > 2 h_step, got mu={p.mu}, h_step={h_step}")

    g0 = g_value(p.mu, p.omega, tol=tol).g
    g_plus = g_value(p.mu + h_step, p.omega, tol=tol).dg_dmu
    g_minus = g_value(p.mu - h_step, p.omega, tol=tol).dg_dmu
    g2 = (g_plus - g_minus) / (2.0 * h_step)
    coeff = p.omega / (4.0 * p.mu * (1.0 + p.mu))
    scale = abs(g0) * (coeff if coeff > 0.0 else 1.0 / (p.mu * p.mu))
    return (g2 + coeff * g0) / scale
