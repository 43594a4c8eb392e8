"""Reference H values bundled as data: Chandrasekhar's tabulation and five-decimal closed-form values.

The file ``data/reference_table.csv`` holds 210 cells: mu = 0.00 .. 1.00 in steps of
0.05 for omega = 0.1 .. 1.0.  ``chr`` is Chandrasekhar's tabulation,
``closed`` the closed form rounded to five decimals.  Nothing here is recomputed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

__all__ = ["ReferenceCell", "load_reference_table", "chr_value", "TABLE_MUS", "TABLE_OMEGAS"]

TABLE_MUS = tuple(round(0.05 * i, 2) for i in range(21))
TABLE_OMEGAS = tuple(round(0.1 * i, 1) for i in range(1, 11))


@dataclass(frozen=True)
class ReferenceCell:
    mu: float
    omega: float
    chr: float
    closed: float


@lru_cache(maxsize=1)
def load_reference_table() -> tuple[ReferenceCell, ...]:
    text = resources.files("hfunction").joinpath("data/reference_table.csv").read_text(encoding="utf-8")
    cells = [
        ReferenceCell(float(r["mu"]), float(r["omega"]), float(r["chr"]), float(r["closed"]))
        for r in csv.DictReader(text.splitlines())
    ]
    cells.sort(key=lambda c: (c.omega, c.mu))
    return tuple(cells)


@lru_cache(maxsize=1)
def _index():
    return {(round(c.mu, 2), round(c.omega, 2)): c for c in load_reference_table()}


def lookup(mu: float, omega: float) -> ReferenceCell | None:
    return _index().get((round(mu, 2), round(omega, 2))) if _on_grid(mu, omega) else None


def chr_value(mu: float, omega: float) -> float | None:
    """Tabulated CHR value at a table cell, or None off the table grid."""
    cell = lookup(mu, omega)
    return None if cell is None else cell.chr


def _on_grid(mu, omega):
    return abs(mu * 20 - round(mu * 20)) < 1e-9 and abs(omega * 10 - round(omega * 10)) < 1e-9
