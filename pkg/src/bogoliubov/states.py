"""Variational states (gamma, alpha, rho0): cube trial states and radial grids."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleDensityError, ParameterError

FEASIBILITY_TOL = 1e-12
_RADIAL_WEIGHT = 4.0 * math.pi / (2.0 * math.pi) ** 3


@dataclass(frozen=True)
class CubeTrialState:
    """Constant occupation on the momentum cube ``P_L = [-L/2, L/2]^3``.

    ``gamma = (2 pi)^3 lam`` on ``P_L`` so that ``rho_gamma = lam L^3``; the
    pairing function is the pure-state value ``alpha = -sqrt(gamma^2 + gamma)``.
    """

    lam: float
    L: float
    rho: float

    def __post_init__(self):
        if not (self.lam > 0 and self.L > 0 and self.rho > 0):
            raise ParameterError("lambda, L and rho must be positive")
        if self.rho_gamma > self.rho * (1.0 + 1e-15):
            raise InfeasibleDensityError(
                f"rho_gamma = {self.rho_gamma:.6g} exceeds rho = {self.rho:.6g}")

    @property
    def rho_gamma(self) -> float:
        return self.lam * self.L ** 3

    @property
    def rho0(self) -> float:
        return max(self.rho - self.rho_gamma, 0.0)

    @property
    def occupation(self) -> float:
        """Value of gamma on the cube."""
        return (2.0 * math.pi) ** 3 * self.lam

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "L": self.L, "rho": self.rho,
                "rho_gamma": self.rho_gamma, "rho0": self.rho0}


def build_cube_trial(rho: float, r: float, s: float) -> CubeTrialState:
    """Cube trial with ``lambda = rho^r`` and ``L = rho^s``."""
    if not rho > 0:
        raise ParameterError(f"rho must be positive, got {rho}")
    if not (r > 0 and s > 0):
        raise ParameterError(f"exponents must be positive, got r={r}, s={s}")
    if rho ** (r + 3 * s) > rho * (1.0 + 1e-15):
        raise InfeasibleDensityError(
            f"rho^(r+3s) = {rho ** (r + 3 * s):.6g} > rho = {rho:.6g} for r={r}, s={s}; "
            f"need r + 3s <= 1 at rho > 1")
    return CubeTrialState(lam=rho ** r, L=rho ** s, rho=rho)


def log_grid(p_min: float = 1e-3, p_max: float = 10.0, n: int = 128):
    """Log-spaced radii with trapezoid cell widths in ``p``."""
    if not (0 < p_min < p_max) or n < 2:
        raise ParameterError("need 0 < p_min < p_max and n >= 2")
    p = np.geomspace(p_min, p_max, n)
    dp = np.empty(n)
    dp[1:-1] = 0.5 * (p[2:] - p[:-2])
    dp[0] = 0.5 * (p[1] - p[0]) + p[0]
    dp[-1] = 0.5 * (p[-1] - p[-2])
    return p, dp


@dataclass(frozen=True, eq=False)
class RadialState:
    """Radially symmetric ``(gamma, alpha)`` sampled at radii ``p`` with cell
    widths ``dp``, plus the condensate density ``rho0``."""

    p: np.ndarray
    dp: np.ndarray
    gamma: np.ndarray
    alpha: np.ndarray
    rho0: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("p", "dp", "gamma", "alpha"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.p.shape
        if self.p.ndim != 1 or any(getattr(self, k).shape != n for k in ("dp", "gamma", "alpha")):
            raise ParameterError("p, dp, gamma, alpha must be 1-D arrays of equal length")
        if np.any(self.p <= 0) or np.any(np.diff(self.p) <= 0):
            raise ParameterError("grid radii must be positive and strictly increasing")

    @property
    def w(self) -> np.ndarray:
        """``(2 pi)^-3 4 pi p^2 dp``."""
        return _RADIAL_WEIGHT * self.p ** 2 * self.dp

    @property
    def rho(self) -> float:
        return self.rho0 + density_gamma(self)

    @classmethod
    def zero(cls, p, dp, rho):
        z = np.zeros_like(np.asarray(p, dtype=float))
        return cls(p, dp, z, z.copy(), float(rho))

    # -- CSV + JSON header ------------------------------------------------
    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "w", "gamma", "alpha"])
        for row in zip(self.p, self.w, self.gamma, self.alpha):
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def header(self) -> dict:
        return {"rho0": self.rho0, "n": int(self.p.size),
                "p_min": float(self.p[0]), "p_max": float(self.p[-1]),
                "dp": [float(x) for x in self.dp], **self.meta}

    def save(self, csv_path, json_path) -> None:
        with open(csv_path, "w") as fh:
            fh.write(self.to_csv())
        with open(json_path, "w") as fh:
            json.dump(self.header(), fh, indent=2)

    @classmethod
    def load(cls, csv_path, json_path) -> "RadialState":
        with open(json_path) as fh:
            head = json.load(fh)
        with open(csv_path) as fh:
            rows = list(csv.DictReader(fh))
        p = np.array([float(r["p"]) for r in rows])
        meta = {k: v for k, v in head.items() if k not in ("rho0", "n", "p_min", "p_max", "dp")}
        return cls(p, np.array(head["dp"], dtype=float),
                   np.array([float(r["gamma"]) for r in rows]),
                   np.array([float(r["alpha"]) for r in rows]),
                   float(head["rho0"]), meta)


def density_gamma(state: RadialState) -> float:
    """``(2 pi)^-3 int gamma``: density outside the condensate."""
    return float(np.dot(state.w, state.gamma))


@dataclass(frozen=True)
class Violation:
    index: int  # -1 for rho0
    constraint: str
    magnitude: float


@dataclass(frozen=True)
class DomainViolationReport:
    violations: tuple = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)


def check_domain(state: RadialState) -> DomainViolationReport:
    g, a = state.gamma, state.alpha
    out = []
    for i in np.flatnonzero(g < 0):
        out.append(Violation(int(i), "gamma >= 0", float(-g[i])))
    bound = g * g + g
    excess = a * a - bound
    # relative slack: a pure state at large gamma is only exact to rounding
    for i in np.flatnonzero(excess > FEASIBILITY_TOL * np.maximum(1.0, np.abs(bound))):
        out.append(Violation(int(i), "alpha^2 <= gamma^2 + gamma", float(excess[i])))
    if state.rho0 < 0:
        out.append(Violation(-1, "rho0 >= 0", float(-state.rho0)))
    return DomainViolationReport(tuple(out))


def alpha_pure(gamma):
    """Pure-state pairing ``-sqrt(gamma^2 + gamma)``."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ParameterError("gamma must be nonnegative")
    out = -np.sqrt(g * g + g)
    return float(out) if out.ndim == 0 else out


def pure_gap(gamma):
    """``gamma + alpha_pure(gamma)`` computed without cancellation."""
    g = np.asarray(gamma, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -g / (g + np.sqrt(g * g + g))
    out = np.where(g == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out
