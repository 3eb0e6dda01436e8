"""Density sweeps of the two-term expansion and log-log exponent fits."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .bounds import lower_bound, residual, select_exponents, upper_bound
from .errors import BogoliubovError, DataError, ParameterError
from .minimize import MinimizeConfig, minimize
from .potentials import PotentialSpec, decay_to_dict

CSV_COLUMNS = ("rho", "lower", "upper_trial", "e_min", "delta", "rho0_ratio")


@dataclass(frozen=True)
class FitResult:
    theta_hat: float
    intercept: float
    r_squared: float
    window: tuple = ()

    def to_dict(self) -> dict:
        return {"theta_hat": self.theta_hat, "intercept": self.intercept,
                "r_squared": self.r_squared, "window": list(self.window)}


def fit_exponent(points: Sequence) -> FitResult:
    """Least squares of ``ln delta`` on ``ln rho``; the slope estimates theta."""
    pts = [(float(r), float(d)) for r, d in points]
    if len(pts) < 4:
        raise DataError(f"need at least 4 points, got {len(pts)}")
    for i, (r, d) in enumerate(pts):
        if not (r > 0 and d > 0):
            raise DataError(f"row {i}: rho={r!r}, delta={d!r} must both be positive")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    res = stats.linregress(x, y)
    return FitResult(float(res.slope), float(res.intercept), float(res.rvalue ** 2),
                     (min(p[0] for p in pts), max(p[0] for p in pts)))


@dataclass
class SweepRow:
    rho: float
    lower: float
    upper_trial: float
    delta: float
    rho0_ratio: float
    e_min: Optional[float] = None


@dataclass
class SweepReport:
    potential: str
    rows: list
    fit: Optional[FitResult]
    prediction: dict
    warnings: list = field(default_factory=list)
    fit_note: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(CSV_COLUMNS)
        for row in self.rows:
            out.writerow(["%.17g" % row.rho, "%.17g" % row.lower, "%.17g" % row.upper_trial,
                          "" if row.e_min is None else "%.17g" % row.e_min,
                          "%.17g" % row.delta, "%.17g" % row.rho0_ratio])
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {
            "potential": self.potential,
            "fit": None if self.fit is None else self.fit.to_dict(),
            "fit_note": self.fit_note,
            "prediction": self.prediction,
            "warnings": list(self.warnings),
        }


def log_grid_spec(text: str) -> np.ndarray:
    """``start:end:count`` -> ``count`` log-spaced densities."""
    try:
        start, end, count = text.split(":")
        start, end, count = float(start), float(end), int(count)
    except ValueError:
        raise ParameterError(f"rho grid must look like start:end:count, got {text!r}") from None
    if not (0 < start < end) or count < 2:
        raise ParameterError("rho grid needs 0 < start < end and count >= 2")
    return np.geomspace(start, end, count)


def _row(spec, rho, include_minimizer, cfg, c):
    ub = upper_bound(spec, rho, c)
    row = SweepRow(rho=rho, lower=lower_bound(spec, rho), upper_trial=ub.value,
                   delta=residual(spec, ub.breakdown, rho), rho0_ratio=ub.trial.rho0 / rho)
    if include_minimizer:
        row.e_min = minimize(spec, rho, cfg).total
    return row


def sweep(spec: PotentialSpec, rhos, include_minimizer: bool = False,
          cfg: MinimizeConfig = None, jobs: int = 1, c: float = None,
          window: tuple = None) -> SweepReport:
    """Trial upper bound against the lower bound along a density grid.

    The fit uses the upper half of the valid rows (at least four), or the
    rows inside ``window = (rho_lo, rho_hi)`` when given.
    """
    rhos = [float(r) for r in rhos]
    if any(b <= a for a, b in zip(rhos, rhos[1:])):
        raise ParameterError("densities must be strictly increasing")

    def work(rho):
        try:
            return _row(spec, rho, include_minimizer, cfg, c)
        except BogoliubovError as exc:
            return exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, rhos))
    else:
        results = [work(r) for r in rhos]

    rows, warnings = [], []
    for rho, res in zip(rhos, results):
        if isinstance(res, SweepRow):
            rows.append(res)
        else:
            warnings.append(f"rho={rho:.6g} skipped: {res}")

    sel = select_exponents(spec.decay, 3)
    prediction = {**sel.to_dict(), "decay": decay_to_dict(spec.decay)}
    if sel.log_correction:
        prediction["note"] = ("finite-window slope overestimates 2/3 because of "
                              "the logarithmic factor")

    if window is not None:
        chosen = [r for r in rows if window[0] <= r.rho <= window[1]]
    else:
        chosen = rows[-max(4, math.ceil(len(rows) / 2)):]
    fit, note = None, ""
    if len(chosen) < 4:
        note = f"fit omitted: {len(chosen)} valid rows in window, need 4"
    else:
        try:
            fit = fit_exponent([(r.rho, r.delta) for r in chosen])
        except DataError as exc:
            note = f"fit omitted: {exc}"
    return SweepReport(spec.label, rows, fit, prediction, warnings, note)
