"""
levelcross: exact level-crossing statistics for stationary Gaussian processes.

Closed-form mean rates, finite-horizon count variances, asymptotic variance
rates, and Fano factors for up-, down-, and total crossings of an arbitrary
level, for smooth stationary Gaussian processes described by their covariance
kernel.  Includes exact-discretization Monte Carlo simulation and brute-force
integration oracles for independent verification.
"""

from .crossings import (
    CrossingMode,
    CrossingParams,
    CrossingStats,
    DegenerateLagError,
    NegativeVarianceError,
    ValidityError,
    abg_params,
    dimensionless_fano,
    fano,
    integrand_total,
    integrand_up,
    mean_count,
    mean_rate,
    variance_count,
    variance_rate_asymptotic,
    zero_level_stats,
)
from .kernels import (
    Kernel,
    KernelDerivatives,
    KernelError,
    ValidityReport,
    check_validity,
    make_ou_mean_revert,
    make_rational_quadratic,
    make_sdho,
    make_squared_exponential,
    map_ou_to_sdho,
)
from .montecarlo import (
    SimConfig,
    SimEstimate,
    SimulationConfigError,
    bruteforce_integrand_total,
    bruteforce_integrand_up,
    bruteforce_theorem_integrals,
    bruteforce_variance,
    count_crossings,
    estimate_stats,
    simulate_kernel_paths,
    simulate_ou_system_paths,
    simulate_sdho_paths,
)
from .quadrature import IntegrationError, QuadratureResult, QuadratureSpec
from .special import erf, erfc, owens_t

__version__ = "0.1.0"

__all__ = [
    "CrossingMode",
    "CrossingParams",
    "CrossingStats",
    "DegenerateLagError",
    "IntegrationError",
    "Kernel",
    "KernelDerivatives",
    "KernelError",
    "NegativeVarianceError",
    "QuadratureResult",
    "QuadratureSpec",
    "SimConfig",
    "SimEstimate",
    "SimulationConfigError",
    "ValidityError",
    "ValidityReport",
    "abg_params",
    "bruteforce_integrand_total",
    "bruteforce_integrand_up",
    "bruteforce_theorem_integrals",
    "bruteforce_variance",
    "check_validity",
    "count_crossings",
    "dimensionless_fano",
    "erf",
    "erfc",
    "estimate_stats",
    "fano",
    "integrand_total",
    "integrand_up",
    "make_ou_mean_revert",
    "make_rational_quadratic",
    "make_sdho",
    "make_squared_exponential",
    "map_ou_to_sdho",
    "mean_count",
    "mean_rate",
    "owens_t",
    "simulate_kernel_paths",
    "simulate_ou_system_paths",
    "simulate_sdho_paths",
    "variance_count",
    "variance_rate_asymptotic",
    "zero_level_stats",
]
