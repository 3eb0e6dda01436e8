"""Bogoliubov variational functional for the Bose gas at high density.

Lower and trial upper bounds on the canonical ground-state energy, radial
minimization at fixed density and exponent fits of the residual
``E(rho) - (1/2 Vhat(0) rho^2 - 1/2 V(0) rho)``.
"""

__version__ = "0.1.0"

from .asymptotics import FitResult, SweepReport, fit_exponent, sweep
from .bounds import (ExponentSelection, exp_decay_parameters, lower_bound, m_exponent,
                     select_exponents, upper_bound)
from .functional import (EnergyBreakdown, angular_kernel, eval_cube, eval_radial,
                         pairing_positivity_check)
from .minimize import MinimizeConfig, MinimizeResult, gradient, minimize
from .potentials import (Exponential, Polynomial, PotentialSpec, SuperExponential,
                         cube_autocorrelation_integral, make_bessel4, make_gaussian,
                         parse_potential, tail_integral, validate)
from .states import (CubeTrialState, RadialState, alpha_pure, build_cube_trial, check_domain,
                     density_gamma)
