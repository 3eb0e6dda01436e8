import math
from fractions import Fraction

import numpy as np
import pytest

from bogoliubov.bounds import (
    decay_rate,
    exp_decay_parameters,
    lower_bound,
    m_exponent,
    polynomial_error_exponent,
    residual,
    select_exponents,
    trial_for,
    upper_bound,
)
from bogoliubov.errors import AssumptionError, InfeasibleDensityError, ParameterError
from bogoliubov.potentials import Exponential, Polynomial, SuperExponential, make_gaussian


def test_lower_bound_examples(gaussian, bessel4):
    assert lower_bound(gaussian, 100.0) == pytest.approx(0.5 * (2 * math.pi) ** 1.5 * 1e4 - 50)
    assert lower_bound(gaussian, 100.0) == pytest.approx(78698.05, abs=0.01)
    assert lower_bound(gaussian, 0.0) == 0.0
    assert lower_bound(bessel4, 1.0) == pytest.approx(4 * math.pi - 0.5, rel=1e-15)
    assert lower_bound(bessel4, 1.0) == pytest.approx(12.0664, abs=1e-4)
    with pytest.raises(ParameterError):
        lower_bound(gaussian, -1.0)


def theta_oracle(k, d=3):
    k = Fraction(k)
    theta = 2 * k / (3 * k - d)
    return theta, 1 - theta, (3 * theta - 2) / (2 * d)


@pytest.mark.parametrize("k", [4, 5, 6, 10, 100])
def test_select_exponents_polynomial(k):
    sel = select_exponents(Polynomial(1.0, k), 3)
    theta, r, s = theta_oracle(k)
    assert (sel.theta, sel.r, sel.s) == (float(theta), float(r), float(s))
    assert sel.regime == "Polynomial" and sel.k == k
    assert 2 * sel.r + 6 * sel.s == pytest.approx(sel.theta, abs=1e-12)
    assert (k - 3) * sel.s == pytest.approx(1 - sel.theta, abs=1e-12)
    assert sel.theta > 2 / 3
    # the returned pair balances all three error terms
    assert polynomial_error_exponent(sel.r, sel.s, k) == pytest.approx(sel.theta, abs=1e-12)


def test_select_exponents_examples():
    sel = select_exponents(Polynomial(1.0, 4), 3)
    assert (sel.r, sel.s, sel.theta) == (1 / 9, 1 / 9, 8 / 9)
    sel = select_exponents(Polynomial(1.0, 10), 3)
    assert sel.theta == pytest.approx(20 / 27) and sel.theta == pytest.approx(0.74074, abs=1e-5)
    assert sel.r == pytest.approx(7 / 27) and sel.s == pytest.approx(1 / 27)
    assert select_exponents(Polynomial(1.0, 1e9), 3).theta == pytest.approx(2 / 3, abs=1e-8)


def test_theta_decreasing_in_k():
    ks = np.linspace(3.01, 200, 400)
    thetas = [select_exponents(Polynomial(1.0, k), 3).theta for k in ks]
    assert all(b < a for a, b in zip(thetas, thetas[1:]))
    assert min(thetas) > 2 / 3


def test_select_exponents_other_regimes():
    for decay in (Exponential(1.0, 2.0), SuperExponential()):
        sel = select_exponents(decay, 3)
        assert sel.s is None and sel.theta == pytest.approx(2 / 3) and sel.log_correction
        assert sel.to_dict()["log_correction"] is True
    sel = select_exponents(None, 3)
    assert sel.regime == "Generic" and 2 * sel.r + 6 * sel.s < 1
    assert (sel.r, sel.s) == (0.25, 1 / 16)
    assert set(sel.to_dict()) == {"r", "s", "theta", "regime", "d"}


def test_select_exponents_general_dimension():
    sel = select_exponents(Polynomial(1.0, 8), 5)
    assert sel.theta == pytest.approx(16 / 19)
    assert 2 * sel.r + 2 * 5 * sel.s == pytest.approx(sel.theta, abs=1e-12)
    with pytest.raises(AssumptionError):
        select_exponents(Polynomial(1.0, 4), 4)
    with pytest.raises(ParameterError):
        select_exponents(None, 0)


def test_m_exponent_examples():
    assert m_exponent(0.1, 0.05, 3) == pytest.approx(0.5)
    assert m_exponent(0.05, 0.2, 1) == pytest.approx(0.65)
    assert m_exponent(1 / 9, 1 / 9, 3) == pytest.approx(8 / 9)
    with pytest.raises(ParameterError):
        m_exponent(0.0, 0.1, 3)


def test_exp_decay_parameters_examples():
    lam, L = exp_decay_parameters(2.0, math.exp(6))
    assert lam == pytest.approx(math.e ** 2) and L == pytest.approx(1.0)
    assert exp_decay_parameters(1.0, math.exp(3))[1] == pytest.approx(1.0)
    lam, L = exp_decay_parameters(1.0, 1e6)
    assert lam == pytest.approx(100.0) and L == pytest.approx(4.60517, abs=1e-5)
    with pytest.raises(ParameterError):
        exp_decay_parameters(1.0, 1.0)
    with pytest.raises(ParameterError):
        exp_decay_parameters(0.0, 10.0)


def test_decay_rate():
    assert decay_rate(make_gaussian(2.0)) == pytest.approx(1.0)


def test_trial_scaling(gaussian, bessel4):
    t, sel = trial_for(bessel4, 1e6)
    assert t.occupation == pytest.approx(1e6 ** (1 / 9), rel=1e-12)
    assert t.L == pytest.approx(1e6 ** (1 / 9), rel=1e-12)
    t, sel = trial_for(gaussian, 1e6)
    assert t.occupation == pytest.approx(100.0, rel=1e-12)
    assert t.L == pytest.approx(math.log(1e6) / 1.5, rel=1e-12)
    with pytest.raises(InfeasibleDensityError, match="rho >= 1"):
        trial_for(bessel4, 0.5)
    with pytest.raises(ParameterError):
        trial_for(gaussian, 1.0)


@pytest.mark.parametrize("spec", ["gaussian", "bessel4"])
@pytest.mark.parametrize("rho", [2.0, 10.0, 1e3, 1e6, 1e9, 1e12])
def test_sandwich_and_residual(spec, rho, request):
    spec = request.getfixturevalue(spec)
    ub = upper_bound(spec, rho)
    lb = lower_bound(spec, rho)
    delta = residual(spec, ub.breakdown, rho)
    assert ub.value >= lb
    assert delta >= 0
    assert delta == pytest.approx(ub.value - lb, rel=1e-9, abs=1e-12 * ub.value)


def test_gaussian_residual_small_at_high_density(gaussian):
    ub = upper_bound(gaussian, 1e8)
    assert residual(gaussian, ub.breakdown, 1e8) / 1e8 <= 0.1 * gaussian.v0


def test_bessel4_residual_ratio(bessel4):
    d6 = residual(bessel4, upper_bound(bessel4, 1e6).breakdown, 1e6)
    d8 = residual(bessel4, upper_bound(bessel4, 1e8).breakdown, 1e8)
    expected = 100 ** (8 / 9)
    assert expected / 2 <= d8 / d6 <= 2 * expected


def test_rho0_ratio_tends_to_one(gaussian, bessel4):
    for spec in (gaussian, bessel4):
        ratios = [upper_bound(spec, r).trial.rho0 / r for r in np.geomspace(1e4, 1e12, 5)]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] > 0.99


def test_trial_beats_zero_state(gaussian, bessel4):
    for spec in (gaussian, bessel4):
        for rho in (1e4, 1e8):
            assert upper_bound(spec, rho).value < 0.5 * spec.vhat0 * rho * rho
