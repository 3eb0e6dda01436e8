"""The Bogoliubov energy functional, term by term.

    F = (2pi)^-3 int p^2 gamma + 1/2 Vhat(0) rho^2
        + rho0 (2pi)^-3 int Vhat (gamma + alpha)
        + 1/2 (2pi)^-6 iint Vhat(p - q) [alpha(p) alpha(q) + gamma(p) gamma(q)]
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import signal

from . import potentials as pot
from .errors import DomainError, ParameterError, ResolutionError
from .potentials import PotentialSpec
from .states import CubeTrialState, RadialState, check_domain, pure_gap

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    direct: float
    pairing: float
    convolution: float

    @property
    def total(self) -> float:
        # fixed summation order
        return ((self.kinetic + self.direct) + self.pairing) + self.convolution

    def to_dict(self) -> dict:
        d = asdict(self)
        d["total"] = self.total
        return d


def eval_cube(spec: PotentialSpec, trial: CubeTrialState) -> EnergyBreakdown:
    """Energy of a cube trial state, using exact cube integrals throughout."""
    lam, L, rho = trial.lam, trial.L, trial.rho
    occ = trial.occupation
    inside = TWO_PI ** 3 * spec.v0 - pot.tail_integral(spec, L)
    kinetic = 0.25 * lam * L ** 5
    direct = 0.5 * spec.vhat0 * rho * rho
    pairing = trial.rho0 * pure_gap(occ) * inside / TWO_PI ** 3
    # (2pi)^-6 [gamma^2 + alpha^2] on the cube = 2 lam^2 + lam / (2pi)^3
    weight = 2.0 * lam * lam + lam / TWO_PI ** 3
    convolution = 0.5 * weight * pot.cube_autocorrelation_integral(spec, L)
    return EnergyBreakdown(kinetic, direct, pairing, convolution)


def angular_kernel(spec: PotentialSpec, p: float, q: float) -> float:
    """``W(p, q) = int_{|p-q|}^{p+q} u Vhat(u) du``."""
    if not (p > 0 and q > 0):
        raise ParameterError("angular kernel needs p, q > 0")
    if p < q:
        p, q = q, p
    if spec.radial_moment is not None:
        return float(spec.radial_moment(p + q) - spec.radial_moment(p - q))
    # integrate the shell directly; differencing two moments cancels when W is small
    return pot._quad(lambda u: u * spec.vhat_at(u), p - q, p + q)


def kernel_matrix(spec: PotentialSpec, p, dp) -> np.ndarray:
    """Dense symmetric ``K_ij`` so that the convolution term is
    ``1/2 (gamma K gamma + alpha K alpha)`` for radial functions."""
    p = np.asarray(p, dtype=float)
    dp = np.asarray(dp, dtype=float)
    hi = p[:, None] + p[None, :]
    lo = np.abs(p[:, None] - p[None, :])
    if spec.radial_moment is not None:
        W = spec.radial_moment(hi) - spec.radial_moment(lo)
    else:
        n = p.size
        W = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                W[i, j] = W[j, i] = angular_kernel(spec, p[i], p[j])
    K = (8.0 * math.pi ** 2 / TWO_PI ** 6) * (p * dp)[:, None] * (p * dp)[None, :] * W
    return 0.5 * (K + K.T)


class RadialProblem:
    """Grid-dependent data for one potential: weights, sampled ``Vhat`` and
    the convolution kernel. Built once, shared read-only."""

    def __init__(self, spec: PotentialSpec, p, dp):
        self.spec = spec
        self.p = np.asarray(p, dtype=float)
        self.dp = np.asarray(dp, dtype=float)
        self.w = 4.0 * math.pi / TWO_PI ** 3 * self.p ** 2 * self.dp
        self.vhat = np.asarray(spec.vhat_at(self.p), dtype=float)
        self.K = kernel_matrix(spec, self.p, self.dp)

    def matches(self, state: RadialState) -> bool:
        return (state.p.shape == self.p.shape and np.array_equal(state.p, self.p)
                and np.array_equal(state.dp, self.dp))

    def breakdown(self, gamma, alpha, rho0) -> EnergyBreakdown:
        w = self.w
        rho = rho0 + float(w @ gamma)
        kinetic = float(w @ (self.p ** 2 * gamma))
        direct = 0.5 * self.spec.vhat0 * rho * rho
        pairing = rho0 * float(w @ (self.vhat * (gamma + alpha)))
        convolution = 0.5 * (float(gamma @ self.K @ gamma) + float(alpha @ self.K @ alpha))
        return EnergyBreakdown(kinetic, direct, pairing, convolution)


def eval_radial(spec: PotentialSpec, state: RadialState, problem: RadialProblem = None
                ) -> EnergyBreakdown:
    report = check_domain(state)
    if report:
        raise DomainError(f"state violates {len(report)} domain constraint(s)", report)
    if problem is None or not problem.matches(state):
        problem = RadialProblem(spec, state.p, state.dp)
    return problem.breakdown(state.gamma, state.alpha, state.rho0)


def momentum_grid(p_max: float, n: int):
    """Uniform points ``h (j - n/2)``, ``j = 0..n-1``, with ``h = 2 p_max / n``."""
    h = 2.0 * p_max / n
    axis = h * (np.arange(n) - n // 2)
    return axis, h


def pairing_positivity_check(spec: PotentialSpec, alpha, p_max: float, n: int = 64,
                             pad: int = 2):
    """Both sides of ``(2pi)^-6 iint Vhat(p-q) a(p) a(q) = int V |a_check|^2``.

    ``alpha`` is a callable of ``|p|`` or an ``(n, n, n)`` array on
    :func:`momentum_grid`; it is treated as point masses ``h^3 alpha_p`` so
    the identity is exact and only the position-space quadrature can err.
    The left side is an exact linear convolution in momentum space; the
    right side samples ``V(x)`` against the inverse DFT.
    """
    axis, h = momentum_grid(p_max, n)
    if callable(alpha):
        P = np.sqrt(axis[:, None, None] ** 2 + axis[None, :, None] ** 2
                    + axis[None, None, :] ** 2)
        a = np.asarray(alpha(P), dtype=float)
    else:
        a = np.asarray(alpha, dtype=float)
        if a.shape != (n, n, n):
            raise ParameterError(f"alpha array must have shape {(n, n, n)}")
    if spec.v_at is None:
        raise ParameterError("position-space V required for the positivity check")

    M = pad * n
    dx = TWO_PI / (M * h)
    period = TWO_PI / h
    alias = float(spec.vhat_at((M - n + 1) * h)) / spec.vhat0
    edge = float(spec.v_at(0.5 * period)) / spec.v0
    if alias > 1e-12 or edge > 1e-12:
        raise ResolutionError(
            f"grid too coarse for {spec.label}: Vhat alias {alias:.2e}, V at half period {edge:.2e}")

    # momentum side: Vhat on the difference lattice, exact linear convolution
    m = h * np.arange(-(n - 1), n)
    D = np.sqrt(m[:, None, None] ** 2 + m[None, :, None] ** 2 + m[None, None, :] ** 2)
    conv = signal.fftconvolve(spec.vhat_at(D), a, mode="valid")
    lhs = float(np.sum(a * conv)) * h ** 6 / TWO_PI ** 6

    # position side: |a_check|^2 at x = dx * k (wrapped), phase drops out
    check = np.fft.ifftn(a, s=(M, M, M), axes=(0, 1, 2)) * (M ** 3) * h ** 3 / TWO_PI ** 3
    k = np.fft.fftfreq(M, d=1.0 / M) * dx
    X = np.sqrt(k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2)
    rhs = float(np.sum(spec.v_at(X) * np.abs(check) ** 2)) * dx ** 3
    return lhs, rhs
