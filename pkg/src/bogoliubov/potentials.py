"""Isotropic interaction potentials with exact Fourier pairs.

Fourier convention: ``Vhat(p) = int V(x) exp(-i p.x) dx`` so that
``V(0) = (2 pi)^-3 int Vhat(p) dp`` and ``Vhat(0) = int V(x) dx``.

Every family carries the closed forms it has (radial moment, ball tail,
cube integral, cube autocorrelation); the generic quadrature paths are
used for anything missing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate, special, stats

from .errors import AssumptionError, NumericalError, ParameterError

TWO_PI_CUBED = (2.0 * math.pi) ** 3


@dataclass(frozen=True)
class Polynomial:
    """``Vhat(p) <= C / |p|^k`` for large ``|p|``."""

    C: float
    k: float

    def __post_init__(self):
        if not (self.C > 0 and self.k > 0):
            raise ParameterError("polynomial decay constants must be positive")
        if self.k <= 3:
            raise AssumptionError(f"polynomial decay needs k > 3 in d=3, got k={self.k}")


@dataclass(frozen=True)
class Exponential:
    """``Vhat(p) <= C exp(-c |p|)``."""

    C: float
    c: float

    def __post_init__(self):
        if not (self.C > 0 and self.c > 0):
            raise ParameterError("exponential decay constants must be positive")


@dataclass(frozen=True)
class SuperExponential:
    """Faster than any exponential (e.g. Gaussian)."""


DecayClass = Union[Polynomial, Exponential, SuperExponential]


def decay_to_dict(decay: Optional[DecayClass]) -> dict:
    if decay is None:
        return {"kind": "Unclassified"}
    if isinstance(decay, Polynomial):
        return {"kind": "Polynomial", "C": decay.C, "k": decay.k}
    if isinstance(decay, Exponential):
        return {"kind": "Exponential", "C": decay.C, "c": decay.c}
    return {"kind": "SuperExponential"}


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    name: str
    v_at: Optional[Callable]
    vhat_at: Callable
    v0: float
    vhat0: float
    decay: Optional[DecayClass]
    params: dict = field(default_factory=dict)
    # momentum scale on which Vhat varies; sets quadrature grading
    scale: float = 1.0
    # optional closed forms
    radial_moment: Optional[Callable] = None  # x -> int_0^x u Vhat(u) du
    ball_tail: Optional[Callable] = None  # R -> int_{|p|>R} Vhat
    cube_tail: Optional[Callable] = None  # L -> int_{R^3 \ P_L} Vhat
    autocorrelation: Optional[Callable] = None  # L -> int Vhat(u) prod (L-|u_i|)_+ du

    @property
    def label(self) -> str:
        args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.name}:{args}" if args else self.name

    def generic(self) -> "PotentialSpec":
        """Copy with all closed forms removed, forcing the quadrature paths."""
        return replace(self, radial_moment=None, ball_tail=None, cube_tail=None,
                       autocorrelation=None)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def make_gaussian(width: float) -> PotentialSpec:
    """``V(x) = exp(-|x|^2 / (2 w^2))``."""
    if not width > 0:
        raise ParameterError(f"width must be positive, got {width}")
    w = float(width)
    amp = (2.0 * math.pi * w * w) ** 1.5

    def v_at(r):
        r = np.asarray(r, dtype=float)
        return np.exp(-0.5 * (r / w) ** 2)

    def vhat_at(p):
        p = np.asarray(p, dtype=float)
        return amp * np.exp(-0.5 * (w * p) ** 2)

    def radial_moment(x):
        x = np.asarray(x, dtype=float)
        return amp * -np.expm1(-0.5 * (w * x) ** 2) / (w * w)

    def ball_tail(R):
        return TWO_PI_CUBED * stats.chi.sf(w * R, 3)

    def cube_tail(L):
        e = special.erfc(w * L / (2.0 * math.sqrt(2.0)))
        # 1 - (1 - e)^3 without cancellation
        return TWO_PI_CUBED * (3.0 * e - 3.0 * e * e + e ** 3)

    def autocorrelation(L):
        if L <= 0:
            return 0.0
        one_d = 2.0 * (math.pi * L * math.erf(w * L / math.sqrt(2.0))
                       - math.sqrt(2.0 * math.pi) * -math.expm1(-0.5 * (w * L) ** 2) / w)
        return one_d ** 3

    return PotentialSpec(
        name="gaussian", v_at=v_at, vhat_at=vhat_at, v0=1.0, vhat0=amp,
        decay=SuperExponential(), params={"width": w}, scale=1.0 / w,
        radial_moment=radial_moment, ball_tail=ball_tail, cube_tail=cube_tail,
        autocorrelation=autocorrelation,
    )


def make_bessel4(mu: float) -> PotentialSpec:
    """``V(x) = exp(-mu |x|)``, whose transform decays like ``|p|^-4``."""
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    mu = float(mu)

    def v_at(r):
        return np.exp(-mu * np.asarray(r, dtype=float))

    def vhat_at(p):
        p = np.asarray(p, dtype=float)
        return 8.0 * math.pi * mu / (mu * mu + p * p) ** 2

    def radial_moment(x):
        x = np.asarray(x, dtype=float)
        return 4.0 * math.pi * x * x / (mu * (mu * mu + x * x))

    def ball_tail(R):
        if R == 0:
            return TWO_PI_CUBED
        return 16.0 * math.pi ** 2 * mu * (math.atan(mu / R) / mu + R / (mu * mu + R * R))

    return PotentialSpec(
        name="bessel4", v_at=v_at, vhat_at=vhat_at, v0=1.0, vhat0=8.0 * math.pi / mu ** 3,
        decay=Polynomial(C=8.0 * math.pi * mu, k=4.0), params={"mu": mu}, scale=mu,
        radial_moment=radial_moment, ball_tail=ball_tail,
    )


def make_yukawa(mu: float) -> PotentialSpec:
    """``V(x) = exp(-mu |x|) / |x|``. Its transform is not integrable; kept
    only so that validation has a concrete failing family."""
    if not mu > 0:
        raise ParameterError(f"mu must be positive, got {mu}")
    mu = float(mu)

    def v_at(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return np.exp(-mu * r) / r

    def vhat_at(p):
        p = np.asarray(p, dtype=float)
        return 4.0 * math.pi / (mu * mu + p * p)

    return PotentialSpec(
        name="yukawa", v_at=v_at, vhat_at=vhat_at, v0=math.inf, vhat0=4.0 * math.pi / mu ** 2,
        decay=None, params={"mu": mu}, scale=mu,
    )


FAMILIES = {
    "gaussian": (make_gaussian, ("width",)),
    "bessel4": (make_bessel4, ("mu",)),
    "yukawa": (make_yukawa, ("mu",)),
}


def parse_potential(text: str) -> PotentialSpec:
    """Parse ``family:key=value[,key=value]`` into a potential."""
    name, _, rest = text.partition(":")
    name = name.strip().lower()
    if name not in FAMILIES:
        raise ParameterError(
            f"unknown potential family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    factory, keys = FAMILIES[name]
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq or key.strip() not in keys:
            raise ParameterError(f"bad parameter {item!r} for {name}; expected {', '.join(keys)}")
        try:
            kwargs[key.strip()] = float(value)
        except ValueError:
            raise ParameterError(f"parameter {key} must be a number, got {value!r}") from None
    missing = [k for k in keys if k not in kwargs]
    if missing:
        raise ParameterError(f"{name} requires {', '.join(missing)}")
    return factory(**kwargs)


# ---------------------------------------------------------------------------
# Quadrature helpers
# ---------------------------------------------------------------------------

def _quad(f, a, b, epsrel=1e-11, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=0.0, epsrel=epsrel, limit=400,
                             full_output=1, **kw)
    value, err = out[0], out[1]
    if len(out) > 3 and not (abs(err) <= 1e3 * epsrel * abs(value) + 1e-300):
        raise NumericalError(f"quadrature on [{a}, {b}] did not converge: {out[3]}",
                             achieved=err)
    return value


def radial_moment(spec: PotentialSpec, x: float) -> float:
    """``int_0^x u Vhat(u) du``."""
    if x <= 0:
        return 0.0
    if spec.radial_moment is not None:
        return float(spec.radial_moment(x))
    return _quad(lambda u: u * spec.vhat_at(u), 0.0, x)


def ball_tail(spec: PotentialSpec, R: float) -> float:
    """``int_{|p| > R} Vhat(p) dp``."""
    if spec.ball_tail is not None:
        return float(spec.ball_tail(R))
    f = lambda r: 4.0 * math.pi * r * r * spec.vhat_at(r)
    # split so the infinite piece starts where Vhat is already decaying
    mid = max(R, 8.0 * spec.scale)
    return (_quad(f, R, mid) if mid > R else 0.0) + _quad(f, mid, np.inf)


def sphere_area_in_cube(r: float, a: float) -> float:
    """Area of the sphere ``|p| = r`` lying inside ``[-a, a]^3``."""
    if r <= a:
        return 4.0 * math.pi * r * r
    if r >= math.sqrt(3.0) * a:
        return 0.0
    if r <= math.sqrt(2.0) * a:
        # six disjoint caps of height r - a removed
        return 4.0 * math.pi * r * r - 12.0 * math.pi * r * (r - a)

    # Archimedes: bands are uniform in z; each circle of radius rc in the
    # square [-a, a]^2 loses four arcs of half-angle arccos(a / rc).
    def frac(z):
        rc = math.sqrt(max(r * r - z * z, 0.0))
        return 1.0 - (4.0 / math.pi) * math.acos(min(a / rc, 1.0))

    z_lo = math.sqrt(r * r - 2.0 * a * a)
    return 4.0 * math.pi * r * _quad(frac, z_lo, a, epsrel=1e-12)


def _corner_integral(spec: PotentialSpec, a: float) -> float:
    """``int`` of Vhat over the part of the cube outside the inscribed ball."""
    f = lambda r: spec.vhat_at(r) * sphere_area_in_cube(r, a)
    s2, s3 = math.sqrt(2.0) * a, math.sqrt(3.0) * a
    return _quad(f, a, s2) + _quad(f, s2, s3)


def tail_integral(spec: PotentialSpec, L: float) -> float:
    """``int_{R^3 \\ P_L} Vhat(p) dp`` with ``P_L = [-L/2, L/2]^3``."""
    if L < 0:
        raise ParameterError(f"L must be nonnegative, got {L}")
    if spec.cube_tail is not None:
        return float(spec.cube_tail(L))
    if L == 0:
        return TWO_PI_CUBED * spec.v0
    a = 0.5 * L
    return max(ball_tail(spec, a) - _corner_integral(spec, a), 0.0)


def cube_integral(spec: PotentialSpec, L: float) -> float:
    """``int_{P_L} Vhat(p) dp``."""
    if spec.cube_tail is not None:
        return TWO_PI_CUBED * spec.v0 - float(spec.cube_tail(L))
    if L <= 0:
        return 0.0
    a = 0.5 * L
    inner = TWO_PI_CUBED * spec.v0 - ball_tail(spec, a)
    return inner + _corner_integral(spec, a)


def _graded_nodes(L: float, scale: float, m: int):
    """Composite Gauss-Legendre nodes on [0, L], panels doubling from ``scale/8``."""
    breaks = [0.0]
    edge = scale / 8.0
    while edge < L:
        breaks.append(edge)
        edge *= 2.0
    breaks.append(L)
    x0, w0 = np.polynomial.legendre.leggauss(m)
    xs, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        half = 0.5 * (hi - lo)
        xs.append(lo + half * (x0 + 1.0))
        ws.append(half * w0)
    return np.concatenate(xs), np.concatenate(ws)


def _autocorrelation_tensor(spec: PotentialSpec, L: float, m: int) -> float:
    x, w = _graded_nodes(L, spec.scale, m)
    wt = w * (L - x)
    x2 = x * x
    plane = x2[:, None] + x2[None, :]
    wplane = wt[:, None] * wt[None, :]
    total = 0.0
    for xi, wi in zip(x2, wt):
        total += wi * float(np.sum(wplane * spec.vhat_at(np.sqrt(plane + xi))))
    return 8.0 * total


def cube_autocorrelation_integral(spec: PotentialSpec, L: float, rtol: float = 1e-9) -> float:
    """Exact ``iint_{P_L x P_L} Vhat(p - q) dp dq``.

    Equal to ``int Vhat(u) prod_i (L - |u_i|)_+ du``; the generic path uses
    a graded tensor Gauss-Legendre rule and checks it against a refined one.
    """
    if L < 0:
        raise ParameterError(f"L must be nonnegative, got {L}")
    if L == 0:
        return 0.0
    if spec.autocorrelation is not None:
        return float(spec.autocorrelation(L))
    coarse = _autocorrelation_tensor(spec, L, 12)
    fine = _autocorrelation_tensor(spec, L, 20)
    err = abs(fine - coarse)
    if err > rtol * abs(fine):
        raise NumericalError(f"cube autocorrelation at L={L} not converged", achieved=err / fine)
    return fine


def inverse_transform(spec: PotentialSpec, r: float) -> float:
    """``V(r)`` recomputed from ``Vhat`` by the radial inverse transform."""
    if r == 0:
        return (ball_tail(spec, 0.0) if spec.ball_tail else
                _quad(lambda p: 4 * math.pi * p * p * spec.vhat_at(p), 0, np.inf)) / TWO_PI_CUBED
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda p: p * spec.vhat_at(p), 0.0, np.inf,
                                weight="sin", wvar=r, limlst=200)
    return val / (2.0 * math.pi ** 2 * r)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class ValidationReport:
    potential: str
    checks: list

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "potential": self.potential,
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                       for c in self.checks],
        }


def _effective_decay_exponent(spec: PotentialSpec, p1: float, p2: float) -> float:
    v1, v2 = float(spec.vhat_at(p1)), float(spec.vhat_at(p2))
    if v2 <= 0 or v1 <= 0:
        return math.inf
    return -math.log(v2 / v1) / math.log(p2 / p1)


def validate(spec: PotentialSpec, samples: int = 64) -> ValidationReport:
    """Sample-based check of ``V >= 0, V in L1, Vhat >= 0, Vhat in L1``.

    A pass is evidence, not proof. Failures are reported, never raised.
    """
    if samples < 16:
        raise ParameterError("validation needs at least 16 samples")
    radii = np.logspace(-3, 3, samples)
    checks = []

    if spec.v_at is not None:
        v = np.asarray(spec.v_at(radii), dtype=float)
    else:
        v = np.array([inverse_transform(spec, r) for r in radii])
    bad = np.flatnonzero(~(v >= -1e-14 * np.nanmax(np.abs(v))))
    checks.append(Check("V ≥ 0", bad.size == 0,
                        "ok" if bad.size == 0 else f"V < 0 at r={radii[bad[0]]:.3g}"))

    l1 = math.isfinite(spec.vhat0) and spec.vhat0 > 0
    checks.append(Check("V ∈ L¹", l1, f"int V = {spec.vhat0:.6g}"))

    vh = np.asarray(spec.vhat_at(np.concatenate([[0.0], radii])), dtype=float)
    bad = np.flatnonzero(~(vh >= 0))
    checks.append(Check("V̂ ≥ 0", bad.size == 0,
                        "ok" if bad.size == 0 else f"V̂ < 0 at p={radii[bad[0] - 1]:.3g}"))

    k_eff = _effective_decay_exponent(spec, radii[-2], radii[-1])
    integrable = k_eff > 3.0
    if isinstance(spec.decay, Polynomial):
        integrable = integrable and spec.decay.k > 3.0
    checks.append(Check("V̂ ∈ L¹", integrable,
                        f"tail exponent {k_eff:.3g}" if integrable
                        else f"V̂ ∉ L¹: tail exponent {k_eff:.3g} <= 3"))

    if integrable:
        try:
            total = ball_tail(spec.generic(), 0.0) / TWO_PI_CUBED
            rel = abs(total - spec.v0) / abs(spec.v0)
            ok = rel <= 1e-6
            detail = f"(2π)⁻³∫V̂ = {total:.12g}, V(0) = {spec.v0:.12g}"
        except (NumericalError, ZeroDivisionError) as exc:
            ok, detail = False, str(exc)
    else:
        ok, detail = False, "skipped: V̂ not integrable"
    checks.append(Check("V(0) = (2π)⁻³∫V̂", ok, detail))
    return ValidationReport(spec.label, checks)
