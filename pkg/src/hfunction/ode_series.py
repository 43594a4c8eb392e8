"""H from a shifted-Legendre expansion of Z0.

With 1/(mu + t) = 2 sum_n (2n+1) (-1)^n Q_n(2mu+1) P_n(2t-1) the integral
Z0(mu) = int_0^1 H(t)/(mu + t) dt becomes

    Z0(mu) = 2 sum_n (2n+1) (-1)^n Q_n(2mu+1) A_n,   A_n = int_0^1 P_n(2t-1) H(t) dt.

The A_n are fixed by requiring Z0 to satisfy the Riccati equation
Z0' + (omega/4) Z0^2 = -1/(mu (1+mu)) order by order in 1/mu.  At order
mu^-(j+2) the condition is quadratic in A_0 for j = 0 and linear in A_j for
j >= 1 once the lower coefficients are known.  The expansion coefficients of
Q_n(2mu+1) in 1/mu are exact rationals and are kept as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .closed_form import EvalPoint, _as_point
from .errors import DomainError, PoleError
from .numerics import shifted_legendre_q

__all__ = ["CoefficientSet", "compute_coefficients", "z0_series", "h_series", "MAX_COEFF_INDEX"]

MAX_COEFF_INDEX = 10
SQRT_BITS = 200


@dataclass(frozen=True)
class CoefficientSet:
    """Legendre coefficients A_0, A_2, ..., A_{2N} for one albedo.

    Odd coefficients vanish and are not stored unless the set was built with
    ``include_odd=True``, in which case ``odd`` holds A_1, A_3, ... as solved.
    """

    omega: float
    a_even: tuple
    truncation_n: int
    matching_residual: float
    odd: tuple | None = None

    def coefficient(self, n: int) -> float:
        if n % 2 == 0:
            return self.a_even[n // 2]
        if self.odd is None:
            return 0.0
        return self.odd[n // 2]

    @property
    def n_max(self) -> int:
        return 2 * self.truncation_n


@lru_cache(maxsize=None)
def _q_expansion(n: int, j: int) -> Fraction:
    """Coefficient of mu^-(j+1) in the 1/mu expansion of Q_n(2mu+1)."""
    total = Fraction(0)
    k = 0
    while n + 2 * k <= j:
        c_nk = Fraction(
            math.factorial(n + k) * math.factorial(n + 2 * k),
            math.factorial(k) * math.factorial(2 * n + 2 * k + 1),
        )
        i = j - n - 2 * k
        total += c_nk * math.comb(j, i) * (-1) ** i
        k += 1
    return total * Fraction(2**n, 2 ** (j + 1))


@lru_cache(maxsize=None)
def _z0_expansion_row(j: int) -> tuple:
    """Exact weights L_{j,n}, n <= j, with [mu^-(j+1)] Z0 = sum_n L_{j,n} A_n."""
    return tuple(2 * (2 * n + 1) * (-1) ** n * _q_expansion(n, j) for n in range(j + 1))


def _z0_coefficient(j: int, a: list) -> Fraction:
    return sum((w * x for w, x in zip(_z0_expansion_row(j), a)), Fraction(0))


def _matching_equation(j: int, c: list, omega: Fraction) -> Fraction:
    """Residual of the mu^-(j+2) matching condition given Z0 coefficients c_0..c_j."""
    conv = sum((c[m] * c[j - m] for m in range(j + 1)), Fraction(0))
    return -(j + 1) * c[j] + omega / 4 * conv + (-1) ** j


def _root_a0(omega: Fraction, bits: int = SQRT_BITS) -> Fraction:
    """2 / (1 + sqrt(1 - omega)) with the square root good to 2^-bits."""
    q = 1 - omega
    s = Fraction(math.isqrt(q.numerator * 4**bits // q.denominator), 2**bits)
    return 2 / (1 + s)


def compute_coefficients(omega: float, n_max: int = MAX_COEFF_INDEX, *,
                         include_odd: bool = False) -> CoefficientSet:
    """Solve the order-by-order matching conditions for A_0 .. A_{n_max}.

    The solve runs in exact rationals: A_{10} is roughly a million times
    more sensitive to A_0 than A_0 itself, so A_0 is seeded from a 200-bit
    square root and rounded to float only at the end.

    By default odd coefficients are fixed at zero and the odd-order
    conditions are only evaluated; ``matching_residual`` is the largest of
    those residuals.  With ``include_odd=True`` every A_j is solved for and
    the odd ones come back in ``odd``.
    """
    if not 0.0 <= omega <= 1.0:
        raise DomainError(f"omega must lie in [0, 1], got {omega}")
    if n_max < 0 or n_max % 2 or n_max > MAX_COEFF_INDEX:
        raise DomainError(f"n_max must be an even integer in [0, {MAX_COEFF_INDEX}], got {n_max}")

    w = Fraction(omega)
    # (omega/4) A0^2 - A0 + 1 = 0, root that tends to 1 as omega -> 0
    a = [_root_a0(w)]
    c = [_z0_coefficient(0, a)]
    residual = abs(_matching_equation(0, c, w))
    for j in range(1, n_max + 1):
        a.append(Fraction(0))
        if j % 2 and not include_odd:
            c.append(_z0_coefficient(j, a))
            residual = max(residual, abs(_matching_equation(j, c, w)))
            continue
        # c_j = lead * A_j + rest; the condition is linear in A_j
        lead = _z0_expansion_row(j)[j]
        c.append(_z0_coefficient(j, a))
        slope = lead * (-(j + 1) + w * c[0] / 2)
        a[j] = -_matching_equation(j, c, w) / slope
        c[j] = _z0_coefficient(j, a)
        residual = max(residual, abs(_matching_equation(j, c, w)))

    odd = tuple(float(x) for x in a[1::2]) if include_odd else None
    return CoefficientSet(
        omega=omega,
        a_even=tuple(float(x) for x in a[0::2]),
        truncation_n=n_max // 2,
        matching_residual=float(residual),
        odd=odd,
    )


def z0_series(point, coeffs: CoefficientSet, *, tol: float = 1e-15) -> float:
    """Truncated Legendre series for Z0 at ``point.mu``."""
    p = point if isinstance(point, EvalPoint) else EvalPoint(point, coeffs.omega)
    if p.mu <= 0.0:
        raise DomainError(f"Z0 series needs mu > 0, got {p.mu}")
    terms = []
    for n in range(coeffs.n_max + 1):
        a_n = coeffs.coefficient(n)
        if a_n == 0.0:
            continue
        terms.append(2.0 * (2 * n + 1) * (-1) ** n * shifted_legendre_q(n, p.mu, tol=tol) * a_n)
    return math.fsum(terms)


def h_series(point, coeffs: CoefficientSet, omega=None) -> float:
    """H = 1 / (1 - (omega mu / 2) Z0) with Z0 from :func:`z0_series`.

    ``point`` may be an :class:`EvalPoint` or a bare mu, in which case the
    albedo is taken from ``coeffs``.
    """
    if isinstance(point, EvalPoint):
        p = point
    else:
        p = _as_point(point, coeffs.omega if omega is None else omega)
    if not math.isclose(p.omega, coeffs.omega, rel_tol=0.0, abs_tol=1e-15):
        raise DomainError(f"coefficients were built for omega={coeffs.omega}, point has {p.omega}")
    if p.mu == 0.0 or p.omega == 0.0:
        return 1.0
    denom = 1.0 - 0.5 * p.omega * p.mu * z0_series(p, coeffs)
    if denom <= 0.0:
        raise PoleError(
            f"truncated series hits a pole at mu={p.mu}, omega={p.omega}; "
            f"raise the truncation (now A_0..A_{coeffs.n_max})"
        )
    return 1.0 / denom
