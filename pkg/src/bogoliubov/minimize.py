"""Fixed-density minimization of the functional over radial pure states.

Pure states are parametrized by ``u >= 0`` with ``gamma = sinh(u)^2`` and
``alpha = -sinh(u) cosh(u)``, so ``alpha^2 = gamma^2 + gamma`` holds at every
iterate. The condensate is eliminated through ``rho0 = rho - rho_gamma``;
the projection clips ``u`` at zero and rescales gamma uniformly whenever
``rho_gamma`` would exceed ``rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import trial_for
from .errors import BogoliubovError, ParameterError
from .functional import EnergyBreakdown, RadialProblem
from .potentials import PotentialSpec
from .states import RadialState, log_grid


@dataclass(frozen=True)
class MinimizeConfig:
    p_min: float = 1e-3
    p_max: Optional[float] = None  # default: max(4 L_cube, 12 / scale)
    n: int = 128
    max_iters: int = 5000
    initial_step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    tolerance: float = 1e-10
    patience: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.n < 32:
            raise ParameterError("grid needs at least 32 points")
        if not self.tolerance > 0:
            raise ParameterError("tolerance must be positive")
        if not (0 < self.backtrack < 1 and 0 < self.armijo < 1):
            raise ParameterError("backtrack and armijo constants must lie in (0, 1)")


@dataclass
class MinimizeResult:
    state: RadialState
    breakdown: EnergyBreakdown
    iterations: int
    converged: bool
    kkt_residual: float
    start: str = ""
    # accepted energies minus the constant direct term, winning run only
    history: list = field(default_factory=list)

    @property
    def total(self) -> float:
        return self.breakdown.total

    def to_dict(self) -> dict:
        return {"breakdown": self.breakdown.to_dict(), "iterations": self.iterations,
                "converged": self.converged, "kkt_residual": self.kkt_residual,
                "start": self.start, "rho0": self.state.rho0, "rho": self.state.rho}


def pure_from_u(u):
    sh = np.sinh(u)
    return sh * sh, -sh * np.cosh(u)


def variable_energy(problem: RadialProblem, u, rho: float) -> float:
    """Total energy minus the constant direct term ``1/2 Vhat(0) rho^2``."""
    g, a = pure_from_u(u)
    rho0 = rho - float(problem.w @ g)
    bd = problem.breakdown(g, a, rho0)
    return bd.kinetic + bd.pairing + bd.convolution


def gradient(problem: RadialProblem, u, rho: float) -> np.ndarray:
    """Exact derivative of the total energy with respect to ``u``.

    ``d gamma/du = sinh 2u`` and ``d alpha/du = -cosh 2u``; the elimination
    ``rho0 = rho - sum w gamma`` adds ``-w sinh(2u) P`` with ``P`` the pairing
    integral. The direct term is constant at fixed rho.
    """
    u = np.asarray(u, dtype=float)
    g, a = pure_from_u(u)
    w, vh = problem.w, problem.vhat
    s2, c2 = np.sinh(2 * u), np.cosh(2 * u)
    rho0 = rho - float(w @ g)
    P = float(w @ (vh * (g + a)))
    return (w * problem.p ** 2 * s2
            - w * s2 * P
            - rho0 * w * vh * np.exp(-2 * u)
            + (problem.K @ g) * s2
            - (problem.K @ a) * c2)


U_MAX = 50.0  # sinh(u)^2 stays finite


def _project(problem: RadialProblem, u, rho: float):
    u = np.clip(u, 0.0, U_MAX)
    g = np.sinh(u) ** 2
    rg = float(problem.w @ g)
    if rg > rho:
        u = np.arcsinh(np.sqrt(g * (rho / rg)))
    return u


def _descend(problem: RadialProblem, u, rho: float, cfg: MinimizeConfig):
    """Projected gradient descent in the ``w``-weighted metric with
    Barzilai-Borwein trial steps and Armijo backtracking."""
    w = problem.w
    u = _project(problem, u, rho)
    f = variable_energy(problem, u, rho)
    grad = gradient(problem, u, rho)
    step = cfg.initial_step
    quiet = 0
    converged = False
    history = [f]
    it = 0
    for it in range(1, cfg.max_iters + 1):
        direction = -grad / w
        t = step
        while True:
            u_new = _project(problem, u + t * direction, rho)
            f_new = variable_energy(problem, u_new, rho)
            if f_new <= f + cfg.armijo * float(grad @ (u_new - u)):
                break
            t *= cfg.backtrack
            if t < 1e-300:
                break
        if not f_new <= f:
            converged = True  # no descent possible along the projected direction
            break
        grad_new = gradient(problem, u_new, rho)
        du, dg = u_new - u, (grad_new - grad) / w
        curv = float(du @ (w * dg))
        step = float(du @ (w * du)) / curv if curv > 0 else cfg.initial_step
        step = min(max(step, 1e-12), 1e12)
        decrease = f - f_new
        u, f, grad = u_new, f_new, grad_new
        history.append(f)
        quiet = quiet + 1 if decrease <= cfg.tolerance * max(abs(f), 1e-300) else 0
        if quiet >= cfg.patience:
            converged = True
            break
    return u, f, it, converged, history


def kkt_residual(problem: RadialProblem, u, rho: float) -> float:
    """Sup-norm of the projected weighted gradient, relative to its scale at ``u = 0``."""
    grad = gradient(problem, u, rho) / problem.w
    active = (u <= 0) & (grad > 0)
    grad = np.where(active, 0.0, grad)
    scale = float(np.max(np.abs(rho * problem.vhat))) or 1.0
    return float(np.max(np.abs(grad))) / scale


def default_grid(spec: PotentialSpec, rho: float, cfg: MinimizeConfig):
    p_max = cfg.p_max
    if p_max is None:
        p_max = 12.0 / spec.scale
        try:
            p_max = max(p_max, 4.0 * trial_for(spec, rho)[0].L)
        except BogoliubovError:
            pass
    return log_grid(cfg.p_min, p_max, cfg.n)


def _cube_start(problem: RadialProblem, spec: PotentialSpec, rho: float):
    trial, _ = trial_for(spec, rho)
    radius = trial.L * (3.0 / (4.0 * math.pi)) ** (1.0 / 3.0)
    gamma = np.where(problem.p <= radius, trial.occupation, 0.0)
    return np.arcsinh(np.sqrt(gamma))


def minimize(spec: PotentialSpec, rho: float, cfg: MinimizeConfig = None,
             problem: RadialProblem = None) -> MinimizeResult:
    """Best radial pure state found from the zero state, a ball version of the
    cube trial and one seeded perturbation."""
    if not rho > 0:
        raise ParameterError(f"rho must be positive, got {rho}")
    cfg = cfg or MinimizeConfig()
    if problem is None:
        p, dp = default_grid(spec, rho, cfg)
        problem = RadialProblem(spec, p, dp)
    n = problem.p.size

    starts = [("zero", np.zeros(n))]
    try:
        starts.append(("cube", _cube_start(problem, spec, rho)))
    except BogoliubovError:
        pass

    runs = []
    for label, u0 in starts:
        runs.append((label,) + _descend(problem, u0, rho, cfg))
    best = min(runs, key=lambda r: r[2])
    rng = np.random.default_rng(cfg.seed)
    u0 = best[1] * np.exp(0.1 * rng.standard_normal(n)) + 0.01 * rng.random(n)
    runs.append(("perturbed",) + _descend(problem, u0, rho, cfg))
    label, u, f, iters, converged, history = min(runs, key=lambda r: r[2])

    g, a = pure_from_u(u)
    rho0 = max(rho - float(problem.w @ g), 0.0)
    state = RadialState(problem.p, problem.dp, g, a, rho0)
    bd = problem.breakdown(g, a, rho0)
    return MinimizeResult(state, bd, iters, converged, kkt_residual(problem, u, rho), label,
                          history)
