"""Property suite shared by ``hfunction verify`` and the tests.

Every check returns a :class:`CheckResult`.  Checks built with
``gating=False`` are diagnostics: they are reported but never decide the
exit status.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_form as cf
from .identities import algebraic_residuals, run_identities
from .integral_solver import h_oracle, solve_grid
from .moments import (
    alpha_closed,
    alpha_quadrature,
    alpha_recurrence,
    legendre_coeff_from_moments,
    recurrence_residual,
)
from .numerics import (
    Hyp2F1Params,
    gauss_legendre_unit,
    hyp2f1,
    shifted_legendre_p,
    shifted_legendre_q,
)
from .ode_series import compute_coefficients, h_series

__all__ = ["CheckResult", "VerifyConfig", "run_all", "a2_formula", "a4_formula"]

CHECK_MUS = tuple(round(0.05 * i, 2) for i in range(1, 21))
CHECK_OMEGAS = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float | None = None
    tolerance: float | None = None
    detail: str = ""
    gating: bool = True

    def line(self) -> str:
        tag = ("PASS" if self.passed else "FAIL") if self.gating else "INFO"
        parts = [f"[{tag}] {self.name}"]
        if self.value is not None:
            parts.append(f"value={self.value:.3e}")
        if self.tolerance is not None:
            parts.append(f"tol={self.tolerance:.0e}")
        if self.detail:
            parts.append(self.detail)
        return "  ".join(parts)


@dataclass
class VerifyConfig:
    quad_order: int = 96
    fp_tol: float = 1e-12
    max_iter: int = 100_000
    series_n: int = 5
    hyp_tol: float = 1e-12
    seed: int = 20240601
    grids: dict = field(default_factory=dict, repr=False)

    def grid(self, omega: float, order: int | None = None):
        key = (omega, order or self.quad_order)
        if key not in self.grids:
            self.grids[key] = solve_grid(omega, gauss_legendre_unit(key[1]), tol=self.fp_tol,
                                         max_iter=self.max_iter)
        return self.grids[key]


def _check(name, worst, tol, detail="", gating=True):
    ok = bool(np.isfinite(worst) and worst <= tol)
    return CheckResult(name, ok, float(worst), tol, detail, gating)


def a2_formula(omega: float) -> float:
    a0 = alpha_closed(0, omega)
    return (a0 - 1.0) / (omega * a0 - 6.0)


def a4_formula(omega: float) -> float:
    a0 = alpha_closed(0, omega)
    wa = omega * a0
    return (9.0 * (1.0 - a0) + wa + 2.25 * omega) / ((wa - 6.0) ** 2 * (wa - 10.0))


# numerics -------------------------------------------------------------------

def check_quadrature(cfg):
    worst = 0.0
    for order in (1, 2, 5, 16, 48, cfg.quad_order, 512):
        rule = gauss_legendre_unit(order)
        worst = max(worst, abs(math.fsum(rule.weights) - 1.0))
        for k in range(min(2 * order, 60)):
            worst = max(worst, abs(rule.integrate(rule.nodes**k) - 1.0 / (k + 1)))
    return _check("quadrature exactness", worst, 1e-12)


def check_pfaff(cfg):
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    for _ in range(100):
        omega = rng.uniform(0.0, 1.0)
        z = rng.uniform(-0.9, 0.0)
        p = Hyp2F1Params.albedo_family(omega, z)
        d = hyp2f1(p, tol=1e-15, method="series")
        t = hyp2f1(p, tol=1e-15, method="pfaff")
        worst = max(worst, abs(d - t) / abs(d))
    return _check("2F1 series vs Pfaff route", worst, 1e-11)


def _q_classical(n, mu):
    x = 2.0 * mu + 1.0
    lg = 0.5 * math.log((x + 1.0) / (x - 1.0))
    if n == 0:
        return lg
    if n == 1:
        return x * lg - 1.0
    return 0.5 * (3 * x * x - 1) * lg - 1.5 * x


def check_q_series(cfg):
    # the log forms cancel badly for large mu, so stay on the physical range
    worst = 0.0
    for mu in np.geomspace(0.05, 1.0, 25):
        for n in range(3):
            ref = _q_classical(n, mu)
            worst = max(worst, abs(shifted_legendre_q(n, mu) - ref) / abs(ref))
    return _check("Q_n series vs closed forms", worst, 1e-12)


def check_shifted_p(cfg):
    explicit = [
        lambda x: 1.0 + 0 * x,
        lambda x: 2 * x - 1,
        lambda x: 6 * x**2 - 6 * x + 1,
        lambda x: 20 * x**3 - 30 * x**2 + 12 * x - 1,
        lambda x: 70 * x**4 - 140 * x**3 + 90 * x**2 - 20 * x + 1,
    ]
    xs = np.linspace(0.0, 1.0, 20)
    worst = max(float(np.max(np.abs(shifted_legendre_p(n, xs) - f(xs)))) for n, f in enumerate(explicit))
    return _check("shifted P recurrence", worst, 1e-13)


# closed form ----------------------------------------------------------------

def check_positivity(cfg):
    lowest = min(cf.h_closed(mu, w, tol=cfg.hyp_tol) for mu in CHECK_MUS for w in CHECK_OMEGAS)
    return CheckResult("closed-form H > 0 on the table grid", lowest > 0.0, lowest)


def _random_points(cfg, n=100, lo_mu=0.05):
    rng = np.random.default_rng(cfg.seed + 1)
    return [(rng.uniform(lo_mu, 1.0), rng.uniform(0.05, 1.0)) for _ in range(n)]


def check_z0_link(cfg):
    worst = 0.0
    for mu, w in _random_points(cfg, 50):
        z = cf.z0_closed(mu, w, tol=cfg.hyp_tol)
        h = cf.h_closed(mu, w, tol=cfg.hyp_tol)
        worst = max(worst, abs(1.0 / (1.0 - 0.5 * w * mu * z) - h))
    return _check("H from Z0 equals H from G", worst, 1e-12)


def check_limits(cfg):
    worst = max(abs(cf.h_closed(0.0, w) - 1.0) for w in CHECK_OMEGAS)
    for w in (0.25, 0.5, 0.75):
        worst = max(worst, abs(cf.h_closed(1e4, w) - 1.0 / math.sqrt(1.0 - w)))
    return _check("H(0) = 1 and H(1e4) -> 1/sqrt(1-omega)", worst, 1e-3)


def check_linear_ode(cfg):
    worst = max(abs(cf.ode_residual(mu, w)) for mu, w in _random_points(cfg))
    return _check("G solves the second-order ODE", worst, 1e-5)


def check_dg(cfg):
    worst = 0.0
    for mu, w in _random_points(cfg):
        h = 1e-6 * mu
        fd = (cf.g_value(mu + h, w, tol=1e-15).g - cf.g_value(mu - h, w, tol=1e-15).g) / (2 * h)
        an = cf.g_value(mu, w, tol=1e-15).dg_dmu
        worst = max(worst, abs(fd - an) / abs(an))
    return _check("analytic dG/dmu vs central difference", worst, 1e-6)


# series ---------------------------------------------------------------------

def check_series_coefficients(cfg):
    worst = 0.0
    for w in np.linspace(0.05, 1.0, 20):
        cs = compute_coefficients(float(w), 2 * cfg.series_n)
        worst = max(worst, abs(cs.a_even[0] - alpha_closed(0, w)),
                    abs(0.25 * w * cs.a_even[0] ** 2 - cs.a_even[0] + 1.0),
                    abs(cs.a_even[1] - a2_formula(w)))
        if cs.truncation_n >= 2:
            worst = max(worst, abs(cs.a_even[2] - a4_formula(w)))
    return _check("A0 root, A2 and A4 closed forms", worst, 1e-10)


def check_odd_vanish_matching(cfg):
    worst = 0.0
    for w in np.linspace(0.05, 1.0, 20):
        cs = compute_coefficients(float(w), 2 * cfg.series_n, include_odd=True)
        worst = max([worst, cs.matching_residual] + [abs(a) for a in cs.odd])
    return _check("odd A_n vanish (order matching)", worst, 1e-10)


def check_method_agreement(cfg):
    worst, where = 0.0, None
    for w in CHECK_OMEGAS:
        cs = compute_coefficients(w, 2 * cfg.series_n)
        for mu in CHECK_MUS:
            d = abs(h_series(mu, cs) - cf.h_closed(mu, w, tol=cfg.hyp_tol))
            if d > worst:
                worst, where = d, (mu, w)
    return _check("series H vs closed-form H", worst, 1e-3, f"worst at mu,omega={where}")


# oracle ---------------------------------------------------------------------

def _refinement_orders(cfg):
    coarse = max(8, cfg.quad_order // 2)
    fine = cfg.quad_order if cfg.quad_order > coarse else 2 * coarse
    return coarse, fine


def check_refinement(cfg):
    coarse, fine = _refinement_orders(cfg)
    worst_sub, worst_cons = 0.0, 0.0
    for w in CHECK_OMEGAS:
        a = h_oracle(np.array(CHECK_MUS), cfg.grid(w, coarse))
        b = h_oracle(np.array(CHECK_MUS), cfg.grid(w, fine))
        d = float(np.max(np.abs(a - b)))
        if w < 1.0:
            worst_sub = max(worst_sub, d)
        else:
            worst_cons = d
    ok = worst_sub < 1e-8 and worst_cons < 1e-6
    return CheckResult(f"quadrature refinement {coarse}->{fine}", ok, max(worst_sub, worst_cons), None,
                       f"omega<=0.9: {worst_sub:.1e} (tol 1e-08), omega=1: {worst_cons:.1e} (tol 1e-06)")


def check_oracle_shape(cfg):
    mus = np.array(CHECK_MUS)
    prev = np.ones_like(mus)
    ok = True
    lowest = math.inf
    for w in CHECK_OMEGAS:
        g = cfg.grid(w)
        lowest = min(lowest, float(np.min(g.h_values)))
        ok &= bool(np.all(g.h_values >= 1.0) and np.all(np.diff(g.h_values) > 0))
        h = h_oracle(mus, g)
        ok &= bool(np.all(h > prev))
        prev = h
    return CheckResult("oracle H >= 1, increasing in mu and omega", ok, lowest)


def check_alpha0_oracle(cfg):
    worst, worst1 = 0.0, 0.0
    for w in CHECK_OMEGAS:
        d = abs(alpha_quadrature(0, cfg.grid(w)) - alpha_closed(0, w))
        if w < 1.0:
            worst = max(worst, d)
        else:
            worst1 = d
    ok = worst < 1e-6 and worst1 < 1e-4
    return CheckResult("oracle alpha_0 = 2(1-s)/omega", ok, max(worst, worst1), None,
                       f"omega<=0.9: {worst:.1e} (tol 1e-06), omega=1: {worst1:.1e} (tol 1e-04)")


def check_fixed_point_residual(cfg):
    worst = 0.0
    for w in CHECK_OMEGAS:
        g = cfg.grid(w)
        x, wt, h = g.rule.nodes, g.rule.weights, g.h_values
        integral = (wt * h) @ (1.0 / (x[:, None] + x[None, :])).T
        worst = max(worst, float(np.max(np.abs(h - 1.0 - 0.5 * w * x * h * integral))))
    return _check("oracle satisfies the product form", worst, 10 * cfg.fp_tol)


# moments --------------------------------------------------------------------

def check_moment_recurrence(cfg):
    worst = 0.0
    for w in np.linspace(0.0, 1.0, 50):
        m = alpha_recurrence(float(w), 12)
        worst = max(worst, abs(m[0] - alpha_closed(0, w)), abs(m[1] - alpha_closed(1, w)),
                    recurrence_residual(m))
    m0 = alpha_recurrence(0.0, 20)
    exact0 = all(m0[n] == 1.0 / (n + 1) for n in range(21))
    ref1 = (2.0, 1.0, 0.625, 0.4375, 5.265625 / 16)
    worst1 = max(abs(a - b) for a, b in zip(alpha_recurrence(1.0, 4).alphas, ref1))
    ok = worst <= 1e-12 and exact0 and worst1 <= 1e-10
    return CheckResult("moment recurrence", ok, max(worst, worst1), 1e-12,
                       f"omega=0 gives 1/(n+1): {exact0}")


def check_moment_bridge(cfg):
    worst = 0.0
    for w in np.linspace(0.05, 1.0, 20):
        m = alpha_recurrence(float(w), 10)
        for n in (1, 3, 5, 7):
            worst = max(worst, abs(legendre_coeff_from_moments(n, m)))
        worst = max(worst, abs(legendre_coeff_from_moments(2, m) - a2_formula(w)),
                    abs(legendre_coeff_from_moments(4, m) - a4_formula(w)))
    return _check("A_n from moments: odd vanish, A2/A4 forms", worst, 1e-10)


# identities -----------------------------------------------------------------

IDENTITY_MUS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
IDENTITY_OMEGAS = (0.3, 0.6, 0.9)


def check_identities_oracle(cfg):
    worst, failing = 0.0, []
    for w in IDENTITY_OMEGAS:
        g = cfg.grid(w)
        for mu in IDENTITY_MUS:
            rep = run_identities(mu, g, closed_inputs=False)
            worst = max(worst, max(abs(rep.residuals[k]) for k in rep.asserted))
            failing += [(mu, w, k) for k in rep.failures(1e-6)]
    return _check("algebraic identities with oracle H", worst, 1e-6, f"failing={failing[:3]}" if failing else "")


def check_identities_any_h(cfg):
    rule = gauss_legendre_unit(64)
    rng = np.random.default_rng(cfg.seed + 2)
    coeffs = rng.uniform(0.1, 2.0, size=5)
    samplers = {
        "H=1": lambda x: np.ones_like(x),
        "random polynomial": lambda x: np.polyval(coeffs, x),
        "oracle": cfg.grid(0.6),
    }
    worst = 0.0
    for h in samplers.values():
        for mu in (0.1, 0.5, 1.0):
            r = algebraic_residuals(mu, h, 0.6, rule)
            worst = max(worst, abs(r["z1_symmetry"]), abs(r["t_weighted"] + r["u_weighted"]))
    return _check("Z1 symmetry and weighted-pair sum hold for any H", worst, 1e-9)


def check_riccati_closed(cfg):
    worst = 0.0
    for w in IDENTITY_OMEGAS:
        for mu in IDENTITY_MUS:
            z0 = lambda m: cf.z0_closed(m, w, tol=1e-15)
            step = 1e-4 * mu
            d = (z0(mu + step) - z0(mu - step)) / (2 * step)
            src = 1.0 / (mu * (1.0 + mu))
            worst = max(worst, abs((d + 0.25 * w * z0(mu) ** 2 + src) / src))
    return _check("closed-form Z0 solves the Riccati equation", worst, 1e-5)


GATING_CHECKS = (
    check_quadrature,
    check_pfaff,
    check_q_series,
    check_shifted_p,
    check_positivity,
    check_z0_link,
    check_limits,
    check_linear_ode,
    check_dg,
    check_series_coefficients,
    check_odd_vanish_matching,
    check_method_agreement,
    check_refinement,
    check_oracle_shape,
    check_alpha0_oracle,
    check_fixed_point_residual,
    check_moment_recurrence,
    check_moment_bridge,
    check_identities_oracle,
    check_identities_any_h,
    check_riccati_closed,
)


# diagnostics ----------------------------------------------------------------

def diagnostics(cfg) -> list[CheckResult]:
    out = []
    for w in (*IDENTITY_OMEGAS, 1.0):
        g = cfg.grid(w)
        for mu in (0.1, 0.5, 0.9):
            rep = run_identities(mu, g, closed_inputs=False)
            out.append(CheckResult(
                f"differentiated forms with oracle H mu={mu} omega={w}", True, None, None,
                f"dz1_dmu={rep.residuals['dz1_dmu']:+.3e} riccati_z0={rep.residuals['riccati_z0']:+.3e} "
                f"riccati_h={rep.residuals['riccati_h']:+.3e}", gating=False))
    for w in (0.01, 0.1, 0.5, 0.9, 1.0):
        rec = alpha_recurrence(w, 2)[2]
        out.append(CheckResult(
            f"alpha_2 formula vs recurrence omega={w}", True, None, None,
            f"formula={alpha_closed(2, w):.6f} recurrence={rec:.6f} diff={alpha_closed(2, w) - rec:+.3e}",
            gating=False))
    for w in (0.5, 0.9, 1.0):
        q = alpha_quadrature(1, cfg.grid(w))
        out.append(CheckResult(
            f"alpha_1 formula vs oracle quadrature omega={w}", True, None, None,
            f"formula={alpha_closed(1, w):.6f} oracle={q:.6f}", gating=False))
    for w in (0.1, 0.01, 0.001):
        out.append(CheckResult(
            f"closed form near omega=0: omega={w}", True, None, None,
            f"H(0.5)={cf.h_closed(0.5, w):.9f} H(1)={cf.h_closed(1.0, w):.9f}", gating=False))
    for mu, w in ((0.05, 1.0), (0.5, 1.0), (1.0, 1.0)):
        diffs = []
        for n in (1, 2, 3, 4, 5):
            cs = compute_coefficients(w, 2 * n)
            try:
                diffs.append(abs(h_series(mu, cs) - cf.h_closed(mu, w)))
            except ArithmeticError:
                diffs.append(math.inf)
        mono = all(b <= a for a, b in zip(diffs, diffs[1:]))
        out.append(CheckResult(
            f"series truncation N=1..5 at mu={mu} omega={w}", True, None, None,
            "errors=" + ",".join(f"{d:.1e}" for d in diffs) + f" non-increasing={mono}", gating=False))
    return out


def run_all(cfg: VerifyConfig | None = None) -> tuple[list[CheckResult], list[CheckResult]]:
    cfg = cfg or VerifyConfig()
    results = []
    for check in GATING_CHECKS:
        try:
            results.append(check(cfg))
        except Exception as exc:  # a crashing check is a failing check
            results.append(CheckResult(check.__name__, False, detail=f"{type(exc).__name__}: {exc}"))
    try:
        diag = diagnostics(cfg)
    except Exception as exc:
        diag = [CheckResult("diagnostics", True, detail=f"{type(exc).__name__}: {exc}", gating=False)]
    return results, diag
