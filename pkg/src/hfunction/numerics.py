"""Quadrature rules and the special functions the H-function solvers rest on.

Everything here is a pure function of its arguments.  Series are summed in
double precision with an explicit tail bound, and give up with
:class:`~hfunction.errors.ConvergenceError` rather than return a silently
truncated value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureRule",
    "Hyp2F1Params",
    "gauss_legendre_unit",
    "shifted_legendre_p",
    "shifted_legendre_q",
    "hyp2f1",
    "hyp2f1_derivative",
    "MAX_SERIES_TERMS",
]

MAX_SERIES_TERMS = 1_000_000
MAX_QUADRATURE_ORDER = 512


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [0, 1].

    ``nodes`` and ``weights`` are read-only arrays, so a rule can be shared
    freely between solvers and threads.
    """

    order: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def integrate(self, values) -> float:
        """Weighted sum of ``values`` sampled at the nodes."""
        return float(np.dot(self.weights, values))


@lru_cache(maxsize=32)
def gauss_legendre_unit(order: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``order`` nodes mapped from [-1, 1] to [0, 1].

    Nodes are the roots of P_order found by Newton iteration from the
    Tricomi initial guess.
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise DomainError(f"quadrature order must be an integer, got {order!r}")
    order = int(order)
    if not 1 <= order <= MAX_QUADRATURE_ORDER:
        raise DomainError(f"quadrature order must lie in [1, {MAX_QUADRATURE_ORDER}], got {order}")

    k = np.arange(1, order + 1, dtype=float)
    x = np.cos(np.pi * (k - 0.25) / (order + 0.5))
    for _ in range(100):
        p0 = np.ones_like(x)
        p1 = x.copy()
        for j in range(2, order + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        # derivative of P_order from the pair (P_{order-1}, P_order)
        if order == 1:
            dp = np.ones_like(x)
        else:
            dp = order * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # refresh the derivative at the converged roots
    p0 = np.ones_like(x)
    p1 = x.copy()
    for j in range(2, order + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = np.ones_like(x) if order == 1 else order * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    order_idx = np.argsort(x)
    nodes = 0.5 * (x[order_idx] + 1.0)
    weights = 0.5 * w[order_idx]
    weights = weights / math.fsum(weights)  # removes the last ulp of drift
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order=order, nodes=nodes, weights=weights)


def shifted_legendre_p(n: int, x):
    """Shifted Legendre polynomial P_n(2x - 1) by the three-term recurrence.

    Accepts a scalar or an array for ``x``; every value must lie in [0, 1].
    """
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    xa = np.asarray(x, dtype=float)
    if np.any((xa < 0.0) | (xa > 1.0)) or np.any(np.isnan(xa)):
        raise DomainError("shifted Legendre argument must lie in [0, 1]")
    t = 2.0 * xa - 1.0
    p_prev = np.ones_like(t)
    if n == 0:
        out = p_prev
    else:
        p = t
        for k in range(1, n):
            p_prev, p = p, ((2 * k + 1) * t * p - k * p_prev) / (k + 1)
        out = p
    return float(out) if np.ndim(out) == 0 else out


def shifted_legendre_p_coefficients(n: int) -> list[int]:
    """Integer monomial coefficients c_k with P_n(2x - 1) = sum_k c_k x^k."""
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    return [(-1) ** (n + k) * math.comb(n, k) * math.comb(n + k, k) for k in range(n + 1)]


def _tail_factor(ratio: float, limit: float) -> float:
    """Bound on (tail / last term) for a series whose term ratio tends monotonically to ``limit``."""
    r = max(ratio, limit)
    if r >= 1.0:
        return math.inf
    return r / (1.0 - r)


def shifted_legendre_q(n: int, mu: float, tol: float = 1e-15, max_terms: int = MAX_SERIES_TERMS) -> float:
    """Legendre function of the second kind Q_n(2 mu + 1) from its 1/x series.

    Uses Q_n(x) = 2^n / x^(n+1) * sum_k (n+k)! (n+2k)! / (k! (2n+2k+1)! x^(2k)),
    which converges for x > 1 but slows down like a harmonic series as
    mu -> 0.
    """
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")
    if not mu > 0:
        raise DomainError(f"Q_n(2 mu + 1) needs mu > 0, got {mu}")
    tol = max(tol, 1e-15)
    x = 2.0 * mu + 1.0
    inv_x2 = 1.0 / (x * x)
    lead = math.exp(
        n * math.log(2.0) + 2.0 * math.lgamma(n + 1) - math.lgamma(2 * n + 2) - (n + 1) * math.log(x)
    )
    term = lead
    total = 0.0
    parts = []
    for k in range(max_terms):
        parts.append(term)
        total += term
        ratio = (
            (n + k + 1) * (n + 2 * k + 1) * (n + 2 * k + 2)
            / ((k + 1) * (2 * n + 2 * k + 2) * (2 * n + 2 * k + 3))
            * inv_x2
        )
        term *= ratio
        if term == 0.0 or term * (1.0 + _tail_factor(ratio, inv_x2)) <= tol * total:
            return math.fsum(parts)
    raise ConvergenceError(
        f"Q_{n}(2*{mu}+1) series did not reach tol={tol} in {max_terms} terms",
        partial=math.fsum(parts),
        residual=term,
        iterations=max_terms,
    )


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameters and argument of a Gauss hypergeometric function 2F1(a, b; c; z)."""

    a: float
    b: float
    c: float
    z: float

    def __post_init__(self):
        c = self.c
        if c <= 0 and float(c).is_integer():
            raise DomainError(f"2F1 lower parameter c={c} is zero or a negative integer")
        if not self.z <= 0:
            raise DomainError(f"2F1 argument must satisfy z <= 0, got {self.z}")

    @classmethod
    def albedo_family(cls, omega: float, z: float) -> "Hyp2F1Params":
        """The family a = 3/2 + s/2, b = 1/2 + s/2, c = 1 + s with s = sqrt(1 - omega)."""
        if not 0.0 <= omega <= 1.0:
            raise DomainError(f"albedo must lie in [0, 1], got {omega}")
        s = math.sqrt(1.0 - omega)
        return cls(1.5 + 0.5 * s, 0.5 + 0.5 * s, 1.0 + s, z)

    def shifted(self) -> "Hyp2F1Params":
        """Parameters (a+1, b+1, c+1) of the derivative's hypergeometric factor."""
        return Hyp2F1Params(self.a + 1.0, self.b + 1.0, self.c + 1.0, self.z)


def _hyp_series(a, b, c, x, tol, max_terms):
    """Sum the defining power series of 2F1(a, b; c; x) for |x| < 1."""
    if x == 0.0:
        return 1.0
    ax = abs(x)
    term = 1.0
    total = 1.0
    parts = [1.0]
    for k in range(max_terms):
        factor = (a + k) * (b + k) / ((c + k) * (k + 1))
        term *= factor * x
        if term == 0.0:
            break
        parts.append(term)
        total += term
        nxt = abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2)) * x)
        if abs(term) * _tail_factor(nxt, ax) <= tol * abs(total):
            break
    else:
        raise ConvergenceError(
            f"2F1({a}, {b}; {c}; {x}) series did not reach tol={tol} in {max_terms} terms",
            partial=math.fsum(parts),
            residual=term,
            iterations=max_terms,
        )
    return math.fsum(parts)


def hyp2f1(params: Hyp2F1Params, tol: float = 1e-12, method: str = "auto",
           max_terms: int = MAX_SERIES_TERMS) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 0.

    ``method`` selects the route: ``"series"`` sums the defining series
    (|z| < 1 only), ``"pfaff"`` uses

        2F1(a, b; c; z) = (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1)),

    whose argument lies in [0, 1) for every z <= 0.  ``"auto"`` takes the
    series for z >= -1/2 and the Pfaff route below that.  The 1/z connection
    formula is avoided on purpose: the albedo family has a - b = 1, which
    is its logarithmic case.
    """
    a, b, c, z = params.a, params.b, params.c, params.z
    if method == "auto":
        method = "series" if z >= -0.5 else "pfaff"
    if method == "series":
        if z <= -1.0:
            raise DomainError(f"direct 2F1 series needs |z| < 1, got z={z}")
        return _hyp_series(a, b, c, z, tol, max_terms)
    if method == "pfaff":
        w = z / (z - 1.0)
        return (1.0 - z) ** (-a) * _hyp_series(a, c - b, c, w, tol, max_terms)
    raise DomainError(f"unknown 2F1 method {method!r}")


def hyp2f1_derivative(params: Hyp2F1Params, tol: float = 1e-12, method: str = "auto",
                      max_terms: int = MAX_SERIES_TERMS) -> float:
    """d/dz 2F1(a, b; c; z) = (a b / c) 2F1(a+1, b+1; c+1; z)."""
    scale = params.a * params.b / params.c
    return scale * hyp2f1(params.shifted(), tol=tol, method=method, max_terms=max_terms)
