"""Command-line front end.

Subcommands: eval, table, compare, moments, coeffs, verify.  Exit codes are
0 on success, 1 when a verified property fails, 2 for domain errors and 3
when an iterative solve does not converge.  Errors are reported on stderr
as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from .closed_form import h_closed
from .errors import DomainError, HFunctionError
from .integral_solver import HGrid, h_oracle, solve_grid
from .moments import alpha_closed, alpha_quadrature, alpha_recurrence
from .numerics import gauss_legendre_unit
from .ode_series import CoefficientSet, compute_coefficients, h_series
from .reference import chr_value

FORMATS = ("table", "csv", "json")
METHODS = ("closed", "series", "oracle")
CSV_FIELDS = ("mu", "omega", "h_closed", "h_series", "h_oracle", "chr", "rel_diff")
DEFAULT_MUS = "0:1:0.05"
DEFAULT_OMEGAS = "0.1:1:0.1"


@dataclass
class RunConfig:
    quad_order: int = 96
    fp_tol: float = 1e-12
    max_iter: int = 100_000
    series_n: int = 5
    hyp_tol: float = 1e-12
    output_format: str = "table"
    precision: int = 5

    def __post_init__(self):
        if not 8 <= self.quad_order <= 512:
            raise DomainError(f"quad_order must lie in [8, 512], got {self.quad_order}")
        if not (self.fp_tol > 0 and self.hyp_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")
        if not 0 <= self.series_n <= 5:
            raise DomainError(f"series_n must lie in [0, 5], got {self.series_n}")
        if self.output_format not in FORMATS:
            raise DomainError(f"format must be one of {FORMATS}")
        if not 0 <= self.precision <= 17:
            raise DomainError(f"precision must lie in [0, 17], got {self.precision}")


@dataclass
class ComparisonRow:
    mu: float
    omega: float
    h_closed: float | None = None
    h_series: float | None = None
    h_oracle: float | None = None
    chr_reference: float | None = None
    rel_diff_closed_vs_oracle: float | None = None
    errors: list = field(default_factory=list)

    def __post_init__(self):
        if self.rel_diff_closed_vs_oracle is None and None not in (self.h_closed, self.h_oracle):
            self.rel_diff_closed_vs_oracle = abs(self.h_closed - self.h_oracle) / self.h_oracle

    def record(self, precision: int | None = None) -> dict:
        """Row keyed by the CSV field names, optionally rounded."""
        values = (self.mu, self.omega, self.h_closed, self.h_series, self.h_oracle,
                  self.chr_reference, self.rel_diff_closed_vs_oracle)
        out = dict(zip(CSV_FIELDS, values))
        if precision is not None:
            out = {k: _round(v, precision) for k, v in out.items()}
        return out


def _round(v, precision):
    return None if v is None else round(v, precision)


class Evaluator:
    """Evaluates H by each method; oracle grids and series coefficients are cached per omega."""

    def __init__(self, config: RunConfig):
        self.config = config
        self._grids: dict[float, HGrid] = {}
        self._coeffs: dict[float, CoefficientSet] = {}

    def grid(self, omega: float) -> HGrid:
        if omega not in self._grids:
            rule = gauss_legendre_unit(self.config.quad_order)
            self._grids[omega] = solve_grid(omega, rule, tol=self.config.fp_tol,
                                            max_iter=self.config.max_iter)
        return self._grids[omega]

    def coeffs(self, omega: float) -> CoefficientSet:
        if omega not in self._coeffs:
            self._coeffs[omega] = compute_coefficients(omega, 2 * self.config.series_n)
        return self._coeffs[omega]

    def value(self, method: str, mu: float, omega: float) -> float:
        if method == "closed":
            return h_closed(mu, omega, tol=self.config.hyp_tol)
        if method == "series":
            return h_series(mu, self.coeffs(omega), omega)
        if method == "oracle":
            return h_oracle(mu, self.grid(omega))
        raise DomainError(f"unknown method {method!r}")

    def row(self, mu: float, omega: float, methods=METHODS, with_chr=False) -> ComparisonRow:
        vals, errors = {}, []
        for m in methods:
            try:
                vals[m] = float(self.value(m, mu, omega))
            except HFunctionError as exc:
                errors.append(f"{m}:{exc.code}:{exc}")
        return ComparisonRow(
            mu=mu, omega=omega,
            h_closed=vals.get("closed"), h_series=vals.get("series"), h_oracle=vals.get("oracle"),
            chr_reference=chr_value(mu, omega) if with_chr else None,
            errors=errors,
        )


# parsing ---------------------------------------------------------------------

def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop included) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        try:
            start, stop, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise DomainError(f"bad range {text!r}; expected start:stop:step") from None
        if step <= 0 or stop < start:
            raise DomainError(f"bad range {text!r}; need step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"bad list {text!r}") from None
    if not values:
        raise DomainError("grid is empty")
    return values


def _methods(text: str) -> tuple:
    if text == "all":
        return METHODS
    parts = tuple(p.strip() for p in text.split(","))
    bad = [p for p in parts if p not in METHODS]
    if bad:
        raise DomainError(f"unknown method(s) {bad}; choose from {METHODS} or 'all'")
    return parts


# formatting ------------------------------------------------------------------

def _fmt(v, precision):
    if v is None:
        return ""
    return f"{v:.{precision}f}"


def _render(rows: list[dict], fmt: str, precision: int) -> str:
    """Render a list of flat dicts sharing the same keys."""
    if fmt == "json":
        clean = [{k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in r.items()}
                 for r in rows]
        return json.dumps(clean, indent=2)
    if not rows:
        return ""
    keys = list(rows[0])
    cells = [[v if isinstance(v, str) else _fmt(v, precision) if isinstance(v, float) else
              ("" if v is None else str(v)) for v in r.values()] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        w.writerows(cells)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.rjust(wd) for k, wd in zip(keys, widths))]
    lines += ["  ".join(c.rjust(wd) for c, wd in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def parse_table_csv(text: str) -> list[dict]:
    """Parse CSV written by ``table`` back into rows of floats (None for empty cells)."""
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append({k: (v if k == "error" else (float(v) if v else None)) for k, v in r.items()})
    return out


# commands --------------------------------------------------------------------

def cmd_eval(args, config):
    ev = Evaluator(config)
    methods = _methods(args.method)
    values = {m: ev.value(m, args.mu, args.omega) for m in methods}
    if config.output_format == "table":
        if len(methods) == 1:
            return _fmt(values[methods[0]], config.precision)
        return "\n".join(f"{m:<7}{_fmt(v, config.precision)}" for m, v in values.items())
    row = {"mu": args.mu, "omega": args.omega}
    row.update({f"h_{m}": v for m, v in values.items()})
    return _render([row], config.output_format, config.precision)


def table_rows(ev: Evaluator, mus, omegas, methods=METHODS, with_chr=False) -> list[ComparisonRow]:
    return [ev.row(mu, w, methods, with_chr) for w in omegas for mu in mus]


def cmd_table(args, config):
    ev = Evaluator(config)
    rows = table_rows(ev, parse_grid(args.mus), parse_grid(args.omegas), _methods(args.methods), args.chr)
    has_errors = any(r.errors for r in rows)
    records = []
    for r in rows:
        rec = r.record()
        if has_errors:
            rec["error"] = "; ".join(r.errors)
        records.append(rec)
    return _render(records, config.output_format, config.precision)


def compare_summary(ev: Evaluator, omegas, mus) -> list[dict]:
    out = []
    for w in omegas:
        diffs = [r.rel_diff_closed_vs_oracle for r in table_rows(ev, mus, [w], ("closed", "oracle"))]
        out.append({"omega": w, "mean_rel_diff": float(np.mean(diffs)), "max_rel_diff": float(np.max(diffs))})
    return out


def moment_rows(ev: Evaluator, omegas, n_max=2) -> list[dict]:
    rows = []
    for w in omegas:
        rec = alpha_recurrence(w, n_max)
        grid = ev.grid(w)
        for n in range(n_max + 1):
            rows.append({
                "omega": w,
                "n": n,
                "formula": alpha_closed(n, w) if n <= 2 else None,
                "recurrence": rec[n],
                "quadrature": alpha_quadrature(n, grid),
            })
    return rows


def cmd_compare(args, config):
    ev = Evaluator(config)
    omegas = parse_grid(args.omegas)
    mus = parse_grid(args.mus)
    summary = compare_summary(ev, omegas, mus)
    moments = moment_rows(ev, omegas)
    fmt = config.output_format
    if fmt == "json":
        return json.dumps({"relative_difference": summary, "moments": moments}, indent=2)
    pct = [{"omega": s["omega"], "mean_rel_diff_pct": 100 * s["mean_rel_diff"],
            "max_rel_diff_pct": 100 * s["max_rel_diff"]} for s in summary]
    parts = [_render(pct, fmt, max(config.precision, 4)), _render(moments, fmt, config.precision)]
    return "\n\n".join(parts)


def cmd_moments(args, config):
    ev = Evaluator(config)
    return _render(moment_rows(ev, parse_grid(args.omegas), args.n_max), config.output_format, config.precision)


def cmd_coeffs(args, config):
    rows = []
    for w in parse_grid(args.omegas):
        cs = compute_coefficients(w, 2 * config.series_n)
        rec = {"omega": w}
        rec.update({f"A{2 * i}": a for i, a in enumerate(cs.a_even)})
        rec["matching_residual"] = cs.matching_residual
        rows.append(rec)
    return _render(rows, config.output_format, max(config.precision, 7))


def cmd_verify(args, config):
    from .verification import VerifyConfig, run_all

    vcfg = VerifyConfig(quad_order=config.quad_order, fp_tol=config.fp_tol, max_iter=config.max_iter,
                        series_n=config.series_n, hyp_tol=config.hyp_tol)
    results, diag = run_all(vcfg)
    failed = [r.name for r in results if not r.passed]
    if config.output_format == "json":
        text = json.dumps({
            "passed": not failed,
            "failed": failed,
            "checks": [asdict(r) for r in results],
            "diagnostics": [asdict(r) for r in diag],
        }, indent=2)
    else:
        lines = [r.line() for r in results]
        lines.append("")
        lines.append("diagnostics (not gating):")
        lines += [r.line() for r in diag]
        lines.append("")
        lines.append("FAILED: " + ", ".join(failed) if failed else "all checks passed")
        text = "\n".join(lines)
    return text, (1 if failed else 0)


# entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quad-order", type=int, default=96, help="Gauss-Legendre order for the oracle")
    common.add_argument("--tol", type=float, default=1e-12, help="fixed-point tolerance")
    common.add_argument("--hyp-tol", type=float, default=1e-12, help="hypergeometric series tolerance")
    common.add_argument("--max-iter", type=int, default=100_000)
    common.add_argument("--series-n", type=int, default=5, help="series truncation, A_0..A_{2N}")
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--precision", type=int, default=5, help="decimal places")
    common.add_argument("--output", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="hfunction", description="Evaluate and cross-check the H-function.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate H at one point")
    e.add_argument("--mu", type=float, required=True)
    e.add_argument("--omega", type=float, required=True)
    e.add_argument("--method", default="closed", help="closed, series, oracle or all")

    t = sub.add_parser("table", parents=[common], help="tabulate H over a grid")
    t.add_argument("--mus", default=DEFAULT_MUS)
    t.add_argument("--omegas", default=DEFAULT_OMEGAS)
    t.add_argument("--methods", default="all")
    t.add_argument("--chr", action="store_true", help="join the bundled CHR reference values")

    c = sub.add_parser("compare", parents=[common], help="closed form vs oracle statistics and moments")
    c.add_argument("--mus", default="0.05:1:0.05")
    c.add_argument("--omegas", default=DEFAULT_OMEGAS)

    m = sub.add_parser("moments", parents=[common], help="moments by formula, recurrence and quadrature")
    m.add_argument("--omegas", default=DEFAULT_OMEGAS)
    m.add_argument("--n-max", type=int, default=4)

    k = sub.add_parser("coeffs", parents=[common], help="shifted-Legendre coefficients A_n")
    k.add_argument("--omegas", default=DEFAULT_OMEGAS)

    sub.add_parser("verify", parents=[common], help="run the property suite")
    return p


def _error(exc: HFunctionError) -> int:
    payload = {"error": exc.code, "type": type(exc).__name__, "message": str(exc)}
    if getattr(exc, "residual", None) is not None:
        payload["residual"] = exc.residual
        payload["iterations"] = exc.iterations
    print(json.dumps(payload), file=sys.stderr)
    return exc.exit_code


COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "compare": cmd_compare,
    "moments": cmd_moments,
    "coeffs": cmd_coeffs,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(quad_order=args.quad_order, fp_tol=args.tol, max_iter=args.max_iter,
                           series_n=args.series_n, hyp_tol=args.hyp_tol,
                           output_format=args.format, precision=args.precision)
        result = COMMANDS[args.command](args, config)
    except HFunctionError as exc:
        return _error(exc)
    status = 0
    if isinstance(result, tuple):
        result, status = result
    _emit(result, args.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
