"""Nystrom solution of the nonlinear integral equation for H.

The equation

    H(mu) = 1 + (omega mu / 2) H(mu) int_0^1 H(t) / (mu + t) dt

is discretised on a Gauss-Legendre rule and iterated in the division form
H <- 1 / (1 - (omega mu / 2) int_0^1 H(t) / (mu + t) dt) from H = 1.  Nothing
here depends on the closed form or on the series solution, which is what
makes it usable as a reference for both.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .numerics import QuadratureRule, gauss_legendre_unit

__all__ = ["HGrid", "solve_grid", "h_oracle", "z0_oracle", "DEFAULT_ORDER"]

DEFAULT_ORDER = 96
ACCELERATIONS = ("auto", "none", "aitken", "newton")
# above this albedo the fixed-point map is nearly neutral and Picard/Aitken crawl
NEWTON_OMEGA = 0.99
NEWTON_STEP_TOL = 1e-9


@dataclass(frozen=True)
class HGrid:
    """Converged H values at the nodes of ``rule`` for one albedo."""

    omega: float
    rule: QuadratureRule
    h_values: np.ndarray = field(repr=False)
    iterations: int
    final_update: float
    acceleration: str = "none"

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    def __call__(self, mu):
        return h_oracle(mu, self)


def _kernel(rule: QuadratureRule) -> np.ndarray:
    x = rule.nodes
    return rule.weights[None, :] / (x[:, None] + x[None, :])


def _aitken(h0, h1, h2):
    """Vector Delta^2 extrapolation of three successive iterates."""
    d1 = h1 - h0
    d2 = h2 - h1
    dd = d2 - d1
    den = float(dd @ dd)
    if den == 0.0:
        return h2
    return h2 - (float(dd @ d2) / den) * d2


def solve_grid(
    omega: float,
    rule: QuadratureRule | None = None,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    acceleration: str = "auto",
) -> HGrid:
    """Solve the discretised integral equation at the nodes of ``rule``.

    ``acceleration`` is one of

    ``"none"``   plain fixed-point iteration;
    ``"aitken"`` fixed-point iteration with a vector Delta^2 step every third
                 iterate (rejected when it leaves H >= 1);
    ``"newton"`` Newton's method on h - T(h) with the dense Jacobian;
    ``"auto"``   Aitken for omega <= 0.99, Newton above.

    Convergence means max |T(h) - h| < tol.  For omega = 1 the fixed point is
    degenerate, so Picard and Aitken steps shrink long before the error does;
    Newton still drives the residual down, with a linear rate there.

    Raises ConvergenceError after ``max_iter`` iterations; its ``partial``
    attribute holds an :class:`HGrid` with the last iterate.
    """
    if not 0.0 <= omega <= 1.0:
        raise DomainError(f"omega must lie in [0, 1], got {omega}")
    if rule is None:
        rule = gauss_legendre_unit(DEFAULT_ORDER)
    if rule.order < 8:
        raise DomainError(f"Nystrom solve needs a rule of order >= 8, got {rule.order}")
    if tol < 1e-14:
        raise DomainError(f"tolerance below 1e-14 is not attainable, got {tol}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")
    if acceleration not in ACCELERATIONS:
        raise DomainError(f"acceleration must be one of {ACCELERATIONS}, got {acceleration!r}")
    if acceleration == "auto":
        acceleration = "aitken" if omega <= NEWTON_OMEGA else "newton"

    x = rule.nodes
    kernel = _kernel(rule)
    half_wmu = 0.5 * omega * x

    def fixed_point_map(h):
        return 1.0 / (1.0 - half_wmu * (kernel @ h))

    h = np.ones_like(x)
    history = []
    update = np.inf
    step = prev_step = np.inf
    for it in range(1, max_iter + 1):
        t = fixed_point_map(h)
        update = float(np.max(np.abs(t - h)))
        if acceleration == "newton":
            # At omega = 1 the residual is quadratic in the error, so a small
            # update alone only guarantees ~sqrt(tol); keep stepping until
            # the Newton steps themselves are small or stop shrinking.
            if update < tol and (step < NEWTON_STEP_TOL or step > 0.9 * prev_step):
                return _finish(omega, rule, t, it, update, acceleration)
            jac = np.eye(x.size) - (t * t * half_wmu)[:, None] * kernel
            dh = np.linalg.solve(jac, t - h)
            prev_step, step = step, float(np.max(np.abs(dh)))
            h = h + dh
            continue
        if update < tol:
            return _finish(omega, rule, t, it, update, acceleration)
        h = t
        if acceleration == "aitken":
            history.append(h)
            if len(history) == 3:
                cand = _aitken(*history)
                if np.all(np.isfinite(cand)) and np.all(cand >= 1.0):
                    h = cand
                history.clear()

    partial = _finish(omega, rule, h, max_iter, update, acceleration)
    raise ConvergenceError(
        f"fixed-point solve for omega={omega} stopped after {max_iter} iterations "
        f"with update {update:.3e} >= tol {tol:.1e}",
        partial=partial,
        residual=update,
        iterations=max_iter,
    )


def _finish(omega, rule, h, iterations, update, acceleration) -> HGrid:
    h = np.array(h, dtype=float)
    h.setflags(write=False)
    return HGrid(omega=omega, rule=rule, h_values=h, iterations=iterations,
                 final_update=update, acceleration=acceleration)


def z0_oracle(mu, grid: HGrid):
    """Quadrature of int_0^1 H(t) / (mu + t) dt over the converged grid."""
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(mu_arr <= 0.0) or np.any(~np.isfinite(mu_arr)):
        raise DomainError("Z0 needs finite mu > 0")
    x, w = grid.rule.nodes, grid.rule.weights
    m = np.atleast_1d(mu_arr)
    out = (1.0 / (m[:, None] + x[None, :])) @ (w * grid.h_values)
    return float(out[0]) if mu_arr.ndim == 0 else out.reshape(mu_arr.shape)


def h_oracle(mu, grid: HGrid):
    """Nystrom extension of the grid solution to arbitrary mu >= 0.

    Exactly 1 at mu = 0, and equal to the grid values (up to one fixed-point
    update) at the nodes.
    """
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(mu_arr < 0.0) or np.any(~np.isfinite(mu_arr)):
        raise DomainError("h_oracle needs finite mu >= 0")
    x, w = grid.rule.nodes, grid.rule.weights
    wh = w * grid.h_values
    m = np.atleast_1d(mu_arr)
    out = np.ones_like(m)
    pos = m > 0.0
    if np.any(pos):
        z0 = (1.0 / (m[pos, None] + x[None, :])) @ wh
        out[pos] = 1.0 / (1.0 - 0.5 * grid.omega * m[pos] * z0)
    return float(out[0]) if mu_arr.ndim == 0 else out.reshape(mu_arr.shape)
