"""Generalized Hilbert operators induced by positive measures on [0, 1).

The operator acts on Taylor coefficients through the Hankel matrix of the
measure's moments, or on functions through the integral of
f(t) / (1 - t z). The package computes moments, Carleson-type functionals,
Hardy and Besov norms, both operator forms and Schatten-class diagnostics.
"""
from .carleson import (BalayageResult, CarlesonReport, GridSpec, MomentCarlesonResult, Prediction,
                       balayage_lp_norm, carleson_sup, fb_integral, log_balayage_lp_norm, log_carleson_sup,
                       moment_carleson_sup, predict, zhao_K)
from .errors import ConvergenceError, ParameterError, QuadratureError, RootFindingError
from .hardy import (BlaschkeFactorization, Majorant, besov_norm, blaschke_factorize, block, bq_norm,
                    circle_samples, dyadic_block_besov, evaluate, hp_norm, integral_means, majorant,
                    radial_profile, test_fb, test_ga)
from .kernels import BACKEND
from .measure import (Atomic, LogPowerWeight, Measure, MomentSequence, PowerWeight, QuadratureSpec, Tabulated,
                      complete_monotonicity_margin, conj_exponent, integrate, lebesgue, log2_weight,
                      loge_weight, measure_from_json, measure_to_json, moment, moments_up_to, tail_mass)
from .operator import (ApplyReport, HankelTruncation, agreement_check, apply, default_z_grid,
                       hankel_apply_fast, hankel_apply_naive, image_hq_norm, integral_apply,
                       operator_norm_estimate)
from .schatten import (MembershipVerdict, SchattenReport, criterion_sum, membership_verdict, schatten_pnorm,
                       schatten_report, singular_values)

__version__ = "0.1.0"
