"""Mass-to-width ratios of hadron resonances and the a + C/Gamma fit.

Input tables are UTF-8 CSV with header ``name,class,mass_mev,width_mev``
(an optional trailing ``source`` column is carried along).  The bundled
table ``data/resonances_sample.csv`` is a small illustrative set of rounded
particle-data values; it is not the data set behind any published curve.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import DomainError

log = logging.getLogger(__name__)

CLASSES = ("meson", "baryon")
REQUIRED = ("name", "class", "mass_mev", "width_mev")
HBAR_MEV_S = 6.582119569e-22
REFERENCE_FIT = {"meson": (2.1, 1222.0), "baryon": (2.1, 1487.0)}


class TableError(ValueError):
    """One or more rows of a resonance table failed validation."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ResonanceRecord:
    name: str
    cls: str
    mass_mev: float
    width_mev: float
    source: str = ""

    def __post_init__(self):
        if self.cls not in CLASSES:
            raise DomainError(f"unknown class {self.cls!r}; expected one of {CLASSES}")
        if not (self.mass_mev > 0 and self.width_mev > 0):
            raise DomainError("mass and width must be positive")

    @property
    def ratio(self) -> float:
        return self.mass_mev / self.width_mev


@dataclass(frozen=True)
class FitResult:
    a: float
    C: float
    rms_residual: float
    n_points: int
    stderr_a: float = float("nan")
    stderr_C: float = float("nan")

    def predict(self, width):
        return self.a + self.C / np.asarray(width, dtype=float)

    def summary(self) -> dict:
        return {"a": self.a, "C": self.C, "rms": self.rms_residual, "n": self.n_points}


def _parse_row(row: dict, lineno: int, errors: list) -> Optional[ResonanceRecord]:
    try:
        mass = float(row["mass_mev"])
        width = float(row["width_mev"])
    except (TypeError, ValueError):
        errors.append(f"line {lineno}: mass_mev/width_mev must be numbers")
        return None
    cls = (row["class"] or "").strip()
    if cls not in CLASSES:
        errors.append(f"line {lineno}: unknown class {cls!r}")
        return None
    if not (np.isfinite(mass) and mass > 0):
        errors.append(f"line {lineno}: mass_mev must be positive, got {mass!r}")
        return None
    if not (np.isfinite(width) and width > 0):
        errors.append(f"line {lineno}: width_mev must be positive, got {width!r}")
        return None
    return ResonanceRecord(row["name"].strip(), cls, mass, width, (row.get("source") or "").strip())


def parse_table(lines: Iterable[str], strict: bool = True) -> list:
    reader = csv.DictReader(lines)
    header = reader.fieldnames or []
    missing = [c for c in REQUIRED if c not in header]
    if missing:
        raise TableError([f"missing columns: {', '.join(missing)}"])
    records, errors = [], []
    for lineno, row in enumerate(reader, start=2):
        if None in row or any(row.get(c) is None for c in REQUIRED):
            errors.append(f"line {lineno}: wrong number of fields")
            continue
        rec = _parse_row(row, lineno, errors)
        if rec is not None:
            records.append(rec)
    if errors:
        if strict:
            raise TableError(errors)
        for e in errors:
            log.warning("skipping row: %s", e)
    if not records:
        raise TableError(errors + ["no records"])
    return records


def load_table(path, strict: bool = True) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_table(fh, strict)


def load_sample_table() -> list:
    text = resources.files("relwaves").joinpath("data/resonances_sample.csv").read_text("utf-8")
    return parse_table(text.splitlines())


def save_table(records: Sequence[ResonanceRecord], path) -> None:
    with_source = any(r.source for r in records)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REQUIRED + (("source",) if with_source else ()))
        for r in records:
            row = [r.name, r.cls, repr(r.mass_mev), repr(r.width_mev)]
            w.writerow(row + ([r.source] if with_source else []))


def fit_inverse_width(records: Sequence[ResonanceRecord], class_filter: Optional[str] = None) -> FitResult:
    """Unweighted least squares of m0c^2/Gamma = a + C/Gamma."""
    recs = [r for r in records if class_filter is None or r.cls == class_filter]
    if len(recs) < 2:
        raise DomainError(f"need at least 2 records, got {len(recs)}")
    width = np.array([r.width_mev for r in recs])
    y = np.array([r.ratio for r in recs])
    return fit_ratio(width, y)


def fit_ratio(width, ratio) -> FitResult:
    width = np.asarray(width, dtype=float)
    y = np.asarray(ratio, dtype=float)
    if np.ptp(width) == 0:
        raise DomainError("degenerate design: all widths are identical")
    X = np.column_stack([np.ones_like(width), 1.0 / width])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    n = y.size
    rms = float(np.sqrt(np.mean(resid ** 2)))
    if n > 2:
        s2 = float(resid @ resid) / (n - 2)
        cov = s2 * np.linalg.inv(X.T @ X)
        se = np.sqrt(np.diag(cov))
    else:
        se = (0.0, 0.0)
    return FitResult(float(coef[0]), float(coef[1]), rms, n, float(se[0]), float(se[1]))


@dataclass(frozen=True)
class BoundRow:
    name: str
    ratio: float
    bound_ok: bool
    lifetime_s: float
    bound_s: float


def lifetime_bound_check(records: Sequence[ResonanceRecord], hbar_mev_s: float = HBAR_MEV_S):
    """Per record: ratio m0c^2/Gamma, tau = hbar/Gamma against 2 hbar / m0c^2.

    Returns (rows, fraction satisfying the bound); the fraction is None for
    an empty list.
    """
    rows = [BoundRow(r.name, r.ratio, r.ratio >= 2.0, hbar_mev_s / r.width_mev,
                     2 * hbar_mev_s / r.mass_mev) for r in records]
    fraction = None if not rows else sum(r.bound_ok for r in rows) / len(rows)
    return rows, fraction


def write_bound_report(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("name", "ratio", "bound_ok"))
        for r in rows:
            w.writerow((r.name, repr(r.ratio), "true" if r.bound_ok else "false"))


def write_fit_summary(fit: FitResult, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(fit.summary(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def synthetic_table(a: float, C: float, widths, cls: str = "meson", noise: float = 0.0, rng=None):
    """Records whose ratio follows a + C/Gamma.

    With ``noise`` > 0 each width is multiplied by (1 + noise * N(0, 1)) after
    the mass has been fixed from the exact law, i.e. the widths carry the
    measurement error.
    """
    rng = np.random.default_rng(rng)
    widths = np.asarray(widths, dtype=float)
    masses = (a + C / widths) * widths
    if noise:
        widths = widths * (1 + noise * rng.standard_normal(widths.size))
    return [ResonanceRecord(f"{cls}{i}", cls, float(m), float(w))
            for i, (m, w) in enumerate(zip(masses, widths))]
