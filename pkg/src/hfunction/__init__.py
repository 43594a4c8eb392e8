"""Chandrasekhar's H-function for isotropic scattering.

Three independent evaluators are provided: a hypergeometric closed form
(:func:`h_closed`), a truncated shifted-Legendre series (:func:`h_series`)
and a Nystrom solution of the integral equation (:func:`solve_grid` plus
:func:`h_oracle`), which serves as the reference for the other two.
"""

from .closed_form import EvalPoint, g_value, h_closed, ode_residual, z0_closed
from .errors import ConvergenceError, DomainError, HFunctionError, PoleError
from .identities import IdentityReport, run_identities
from .integral_solver import HGrid, h_oracle, solve_grid, z0_oracle
from .moments import (
    MomentVector,
    alpha_closed,
    alpha_quadrature,
    alpha_recurrence,
    legendre_coeff_from_moments,
)
from .numerics import (
    Hyp2F1Params,
    QuadratureRule,
    gauss_legendre_unit,
    hyp2f1,
    hyp2f1_derivative,
    shifted_legendre_p,
    shifted_legendre_q,
)
from .ode_series import CoefficientSet, compute_coefficients, h_series, z0_series

__version__ = "0.1.0"

__all__ = [
    "EvalPoint", "g_value", "h_closed", "ode_residual", "z0_closed",
    "ConvergenceError", "DomainError", "HFunctionError", "PoleError",
    "IdentityReport", "run_identities",
    "HGrid", "h_oracle", "solve_grid", "z0_oracle",
    "MomentVector", "alpha_closed", "alpha_quadrature", "alpha_recurrence", "legendre_coeff_from_moments",
    "Hyp2F1Params", "QuadratureRule", "gauss_legendre_unit", "hyp2f1", "hyp2f1_derivative",
    "shifted_legendre_p", "shifted_legendre_q",
    "CoefficientSet", "compute_coefficients", "h_series", "z0_series",
]
