"""Exact operator-norm, cogrowth and Cheeger computations on marked groups."""
from . import algebra, cogrowth, criteria, groups, spectral, words
from .algebra import AlgebraElement, averaging_operator, power_trace_sequence
from .cogrowth import (cheeger_buser_check, cheeger_constant, cogrowth_table, girth,
                       grigorchuk_residual)
from .criteria import (FreeBasisInstance, Homomorphism, free_basis_certify, hn_limit_experiment,
                       infinitesimal_report, powers_average_bounds, rebalance_homomorphism,
                       trace_monotonicity_check)
from .errors import (CertificationFailed, ConfigError, GroupNormsError, InvalidHomomorphism,
                     InvariantViolated, NotApplicable, ResourceExceeded)
from .spectral import operator_norm_bounds, spectral_radius_bounds

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "CertificationFailed", "ConfigError", "FreeBasisInstance", "GroupNormsError",
    "Homomorphism", "InvalidHomomorphism", "InvariantViolated", "NotApplicable", "ResourceExceeded",
    "algebra", "averaging_operator", "cheeger_buser_check", "cheeger_constant", "cogrowth",
    "cogrowth_table", "criteria", "free_basis_certify", "girth", "grigorchuk_residual", "groups",
    "hn_limit_experiment", "infinitesimal_report", "operator_norm_bounds", "power_trace_sequence",
    "powers_average_bounds", "rebalance_homomorphism", "spectral", "spectral_radius_bounds",
    "trace_monotonicity_check", "words",
]
