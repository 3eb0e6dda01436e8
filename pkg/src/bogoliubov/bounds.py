"""Lower bound, cube trial upper bound and error-exponent bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import AssumptionError, InfeasibleDensityError, ParameterError
from .functional import EnergyBreakdown, eval_cube
from .potentials import DecayClass, Exponential, Polynomial, PotentialSpec, SuperExponential
from .states import CubeTrialState

TWO_PI_CUBED = (2.0 * math.pi) ** 3


@dataclass(frozen=True)
class ExponentSelection:
    r: float
    s: Optional[float]  # None when L grows logarithmically
    theta: float
    d: int
    regime: str  # "Polynomial", "Exponential" or "Generic"
    k: Optional[float] = None
    log_correction: bool = False

    def to_dict(self) -> dict:
        out = {"r": self.r, "s": self.s, "theta": self.theta, "regime": self.regime, "d": self.d}
        if self.k is not None:
            out["k"] = self.k
        if self.log_correction:
            out["log_correction"] = True
        return out


def lower_bound(spec: PotentialSpec, rho: float) -> float:
    """``1/2 Vhat(0) rho^2 - 1/2 V(0) rho``, valid for every state at density rho."""
    if rho < 0:
        raise ParameterError(f"rho must be nonnegative, got {rho}")
    return 0.5 * spec.vhat0 * rho * rho - 0.5 * spec.v0 * rho


def _exact(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10 ** 9) if x != int(x) else Fraction(int(x))


def select_exponents(decay: Optional[DecayClass], d: int = 3) -> ExponentSelection:
    """Scaling exponents ``lambda ~ rho^r``, ``L ~ rho^s`` and the error order theta.

    Polynomial decay ``Vhat <= C |p|^-k`` gives ``theta = 2k / (3k - d)``,
    ``r = 1 - theta`` and ``s = (3 theta - 2) / (2d)``. Exponential and
    superexponential decay give theta = 2/3 up to powers of ``ln rho``, with
    ``L`` logarithmic (see :func:`exp_decay_parameters`). Anything else gets a
    fixed pair with ``2r + 2ds < 1`` and no rate claim.
    """
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}")
    if isinstance(decay, Polynomial):
        if decay.k <= d:
            raise AssumptionError(f"polynomial decay needs k > d, got k={decay.k}, d={d}")
        k = _exact(decay.k)
        theta = 2 * k / (3 * k - d)
        r = 1 - theta
        s = (3 * theta - 2) / (2 * d)
        return ExponentSelection(float(r), float(s), float(theta), d, "Polynomial", k=decay.k)
    if isinstance(decay, (Exponential, SuperExponential)):
        return ExponentSelection(1.0 / 3.0, None, 2.0 / 3.0, d, "Exponential", log_correction=True)
    r, s = Fraction(1, 4), Fraction(3, 16 * d)
    return ExponentSelection(float(r), float(s), 1.0, d, "Generic")


def m_exponent(r: float, s: float, d: int) -> float:
    """Order of the kinetic and convolution errors: ``max(r + (d+2)s, 2r + 2ds)``."""
    if not (r > 0 and s > 0) or d < 1:
        raise ParameterError("need r, s > 0 and d >= 1")
    return max(r + (d + 2) * s, 2 * r + 2 * d * s)


def polynomial_error_exponent(r: float, s: float, k: float, d: int = 3) -> float:
    """``max(2r + 2ds, 1 - (k - d)s, 1 - r)``: the full error order under polynomial decay."""
    return max(2 * r + 2 * d * s, 1 - (k - d) * s, 1 - r)


def exp_decay_parameters(c: float, rho: float):
    """``lambda = rho^(1/3)``, ``L = ln(rho) / (3c)``."""
    if not c > 0:
        raise ParameterError(f"decay rate c must be positive, got {c}")
    if not rho > 1:
        raise ParameterError(f"rho must exceed 1 so that L > 0, got {rho}")
    return rho ** (1.0 / 3.0), math.log(rho) / (3.0 * c)


def decay_rate(spec: PotentialSpec) -> float:
    """Exponential rate ``c`` used for the logarithmic cube size.

    Superexponential families satisfy ``Vhat <= C exp(-c|p|)`` for every c;
    half the inverse momentum scale keeps the cube tail subdominant once
    ``ln rho > 6``.
    """
    if isinstance(spec.decay, Exponential):
        return spec.decay.c
    return 0.5 / spec.scale


class UpperBound(NamedTuple):
    value: float
    trial: CubeTrialState
    breakdown: EnergyBreakdown
    selection: ExponentSelection


def trial_for(spec: PotentialSpec, rho: float, c: float = None):
    """Cube trial at density rho with the scaling suited to the decay class.

    The exponent law is applied to the occupation ``(2pi)^3 lambda`` of the
    cube, which must be at least 1.
    """
    sel = select_exponents(spec.decay, 3)
    if sel.s is None:
        occ, L = exp_decay_parameters(c or decay_rate(spec), rho)
    else:
        if rho < 1:
            raise InfeasibleDensityError(f"rho = {rho:g} < 1 gives occupation below 1; use rho >= 1")
        occ, L = rho ** sel.r, rho ** sel.s
    lam = occ / TWO_PI_CUBED
    if lam * L ** 3 > rho:
        raise InfeasibleDensityError(
            f"cube trial infeasible at rho = {rho:g}: rho_gamma = {lam * L ** 3:.6g} > rho; "
            f"increase rho")
    return CubeTrialState(lam=lam, L=L, rho=rho), sel


def upper_bound(spec: PotentialSpec, rho: float, c: float = None) -> UpperBound:
    trial, sel = trial_for(spec, rho, c)
    bd = eval_cube(spec, trial)
    return UpperBound(bd.total, trial, bd, sel)


def residual(spec: PotentialSpec, bd: EnergyBreakdown, rho: float) -> float:
    """``F - (1/2 Vhat(0) rho^2 - 1/2 V(0) rho)`` summed without the large
    cancellation: the direct term equals ``1/2 Vhat(0) rho^2`` identically."""
    return bd.kinetic + (bd.pairing + 0.5 * spec.v0 * rho) + bd.convolution
