"""The nine acceptance criteria, one test each (criterion 4 is split in two).

Every test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from bogoliubov import potentials as pot
from bogoliubov.asymptotics import fit_exponent, sweep
from bogoliubov.bounds import lower_bound, select_exponents, upper_bound
from bogoliubov.functional import (
    RadialProblem,
    angular_kernel,
    eval_cube,
    eval_radial,
    pairing_positivity_check,
)
from bogoliubov.minimize import MinimizeConfig, default_grid, gradient, minimize, variable_energy
from bogoliubov.potentials import Polynomial, make_bessel4, make_gaussian
from bogoliubov.states import CubeTrialState, RadialState, log_grid

from .oracles import central_difference, mc_cube_autocorrelation

POTENTIALS = {"gaussian": make_gaussian(1.0), "bessel4": make_bessel4(1.0)}


def random_feasible_state(rng, p, dp, rho):
    """Random gamma profile rescaled to a random share of rho, with alpha
    anywhere in the allowed band (pure about a third of the time)."""
    n = p.size
    kind = rng.integers(3)
    if kind == 0:
        g = rng.random(n) * 10 ** rng.uniform(-3, 3, n)
    elif kind == 1:
        g = np.exp(-((p - rng.uniform(0, 5)) / rng.uniform(0.1, 3)) ** 2)
    else:
        g = np.where(p < rng.uniform(0.05, 8), 1.0, 0.0) + 1e-12
    w = 4 * math.pi * p * p * dp / (2 * math.pi) ** 3
    g *= rng.uniform(0, 1) * rho / float(w @ g)
    bound = np.sqrt(g * g + g)
    t = np.ones(n) if rng.random() < 1 / 3 else rng.uniform(-1, 1, n)
    a = -t * bound
    rho0 = max(rho - float(w @ g), 0.0)
    return RadialState(p, dp, g, a, rho0)


def test_criterion_1_lower_bound_inequality(acceptance):
    rng = np.random.default_rng(2024)
    p, dp = log_grid(1e-3, 12.0, 64)
    worst, count = math.inf, 0
    for name, spec in POTENTIALS.items():
        problem = RadialProblem(spec, p, dp)
        for rho in (1.0, 10.0, 100.0):
            for _ in range(500):
                state = random_feasible_state(rng, p, dp, rho)
                bd = eval_radial(spec, state, problem)
                lb = lower_bound(spec, state.rho)
                margin = (bd.total - lb + 1e-6 * (1 + abs(bd.total))) / (1 + abs(bd.total))
                worst = min(worst, margin)
                count += 1
    acceptance(1, "F >= lower bound on random feasible states", worst >= 0,
               f"{count} states, worst normalized margin {worst:.3e}")


def test_criterion_2_two_term_expansion(acceptance):
    report = sweep(POTENTIALS["gaussian"], np.geomspace(1e4, 1e10, 7))
    ratios = [r.delta / r.rho for r in report.rows]
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    halved = ratios[-1] <= 0.5 * ratios[0]
    slope = report.fit.theta_hat
    ok = len(ratios) == 7 and decreasing and halved and slope < 0.9
    acceptance(2, "gaussian Delta/rho decreasing on 1e4..1e10", ok,
               f"Delta/rho {ratios[0]:.4g} -> {ratios[-1]:.4g}, decreasing={decreasing}, "
               f"theta_hat={slope:.4f} (< 0.9)")


def test_criterion_3_polynomial_rate(acceptance):
    spec = POTENTIALS["bessel4"]
    report = sweep(spec, np.geomspace(1e8, 1e12, 9), window=(1e8, 1e12))
    theta = select_exponents(spec.decay, 3).theta
    err = abs(report.fit.theta_hat - theta)
    acceptance(3, "bessel4 fitted rate on [1e8, 1e12]", err <= 0.05,
               f"theta_hat={report.fit.theta_hat:.4f}, predicted {theta:.4f}, |diff|={err:.4f}")


def gaussian_window_fit():
    rhos = np.geomspace(1e8, 1e12, 9)
    report = sweep(POTENTIALS["gaussian"], rhos, window=(1e8, 1e12))
    return rhos, report.fit.theta_hat


def test_criterion_4a_exponential_regime_slope(acceptance):
    _, slope = gaussian_window_fit()
    acceptance("4a", "gaussian slope on [1e8, 1e12] in (2/3, 0.85)", 2 / 3 < slope < 0.85,
               f"theta_hat={slope:.4f}")


def test_criterion_4b_log_model_agreement(acceptance):
    # The synthetic model's own slope on this window is ~0.93, outside (2/3, 0.85);
    # it cannot agree within 0.03 with any slope that satisfies 4a.
    rhos, slope = gaussian_window_fit()
    synthetic = fit_exponent(zip(rhos, rhos ** (2 / 3) * np.log(rhos) ** 6)).theta_hat
    diff = abs(synthetic - slope)
    acceptance("4b", "rho^(2/3) (ln rho)^6 slope matches gaussian slope within 0.03", diff <= 0.03,
               f"synthetic={synthetic:.4f}, gaussian={slope:.4f}, |diff|={diff:.4f}")


def test_criterion_5_exponent_algebra(acceptance):
    sel = select_exponents(Polynomial(1.0, 4), 3)
    exact = (sel.r, sel.s, sel.theta) == (float(Fraction(1, 9)), float(Fraction(1, 9)),
                                          float(Fraction(8, 9)))
    ks = [4, 6, 10, 100]
    identities = True
    thetas = []
    for k in ks:
        s = select_exponents(Polynomial(1.0, k), 3)
        identities &= abs(2 * s.r + 6 * s.s - s.theta) <= 1e-12
        identities &= abs((k - 3) * s.s - (1 - s.theta)) <= 1e-12
        thetas.append(s.theta)
    monotone = all(b < a for a, b in zip(thetas, thetas[1:])) and thetas[-1] > 2 / 3
    close = abs(thetas[-1] - 2 / 3) < abs(thetas[0] - 2 / 3)
    ok = exact and identities and monotone and close
    acceptance(5, "exponent algebra", ok,
               f"(r,s,theta)(k=4)=({sel.r:.6f},{sel.s:.6f},{sel.theta:.6f}), "
               f"theta(k)={', '.join(f'{t:.5f}' for t in thetas)}")


@pytest.mark.slow
def test_criterion_6_closed_forms(acceptance):
    spec = POTENTIALS["gaussian"]
    worst_kin = 0.0
    for lam, L in ((1.0, 2.0), (0.3, 1.7), (5.0, 0.4)):
        a = L / 2
        val, _ = integrate.tplquad(lambda z, y, x: x * x + y * y + z * z, -a, a, -a, a, -a, a,
                                   epsabs=0, epsrel=1e-13)
        kin = eval_cube(spec, CubeTrialState(lam=lam, L=L, rho=1e3)).kinetic
        worst_kin = max(worst_kin, abs(kin - lam * val) / (lam * val))

    worst_sigma = 0.0
    for name, L in (("bessel4", 2.0), ("gaussian", 2.0)):
        mc, sigma = mc_cube_autocorrelation(POTENTIALS[name], L, n=10_000_000)
        exact = pot.cube_autocorrelation_integral(POTENTIALS[name], L)
        worst_sigma = max(worst_sigma, abs(exact - mc) / sigma)

    worst_kernel = 0.0
    rng = np.random.default_rng(6)
    for p, q in rng.uniform(0.05, 6, (25, 2)):
        closed = (2 * math.pi) ** 1.5 * (math.exp(-(p - q) ** 2 / 2) - math.exp(-(p + q) ** 2 / 2))
        quad = angular_kernel(spec.generic(), p, q)
        worst_kernel = max(worst_kernel, abs(quad - closed) / closed)

    ok = worst_kin <= 1e-10 and worst_sigma <= 3 and worst_kernel <= 1e-10
    acceptance(6, "closed forms vs oracles", ok,
               f"kinetic rel {worst_kin:.1e}, autocorrelation {worst_sigma:.2f} sigma, "
               f"kernel rel {worst_kernel:.1e}")


PROFILES = {
    "gaussian": lambda P: -np.exp(-P * P),
    "shell": lambda P: -np.exp(-4 * (P - 2) ** 2),
    "step": lambda P: -1.0 * (P < 2.0),
    "exponential": lambda P: -np.exp(-2 * P),
    "oscillating": lambda P: np.cos(3 * P) * np.exp(-P * P / 2),
}


@pytest.mark.slow
def test_criterion_7_plancherel_identity(acceptance):
    spec = POTENTIALS["gaussian"]
    worst, parts = 0.0, []
    for name, profile in PROFILES.items():
        lhs, rhs = pairing_positivity_check(spec, profile, 4.0, n=64)
        rel = abs(lhs - rhs) / abs(rhs)
        worst = max(worst, rel)
        parts.append(f"{name} {rel:.1e}")
        assert lhs >= 0 and rhs >= 0
    acceptance(7, "Plancherel identity, 5 profiles", worst <= 1e-6, ", ".join(parts))


def test_criterion_8_gradient_check(acceptance):
    rng = np.random.default_rng(8)
    worst = 0.0
    for name, spec in POTENTIALS.items():
        rho = 100.0
        p, dp = default_grid(spec, rho, MinimizeConfig(n=64))
        problem = RadialProblem(spec, p, dp)
        for _ in range(20):
            u = rng.uniform(0, 2, p.size) * (rng.random(p.size) < 0.7)
            g = np.sinh(u) ** 2
            if problem.w @ g > rho:
                u = np.arcsinh(np.sqrt(g * rng.uniform(0.1, 0.9) * rho / (problem.w @ g)))
            fd = central_difference(lambda v: variable_energy(problem, v, rho), u, h=1e-5)
            an = gradient(problem, u, rho)
            worst = max(worst, float(np.linalg.norm(an - fd) / np.linalg.norm(fd)))
    acceptance(8, "analytic gradient vs central differences", worst <= 1e-5,
               f"40 points, worst relative error {worst:.2e}")


@pytest.mark.slow
def test_criterion_9_minimizer_sandwich(acceptance):
    spec = POTENTIALS["gaussian"]
    ok, parts = True, []
    for rho in (1e2, 1e4):
        res = minimize(spec, rho)
        zero = 0.5 * spec.vhat0 * rho * rho
        lb = lower_bound(spec, rho)
        ub = upper_bound(spec, rho).value
        ok &= lb <= res.total <= min(zero, ub)
        if rho == 1e4:
            ok &= res.total <= zero - 0.25 * spec.v0 * rho
        parts.append(f"rho={rho:g}: (E-lb)/rho={(res.total - lb) / rho:.4f}, "
                     f"(ub-lb)/rho={(ub - lb) / rho:.4f}, converged={res.converged}")
    acceptance(9, "minimizer sandwich", ok, "; ".join(parts))
