"""Python bindings for the sparseproc C++ library."""

from ._core import (
    Gaussian,
    ModelError,
    Poisson,
    SymmetricStable,
    System,
    apply_inverse,
    apply_localization,
    bspline,
    bspline_autocorr,
    bspline_filter,
    charfn_increment,
    continuous_autocorr,
    empirical_autocorr,
    generate,
    green_function,
    increment_spectrum,
    innovation_variance,
    levy_exponent,
    localization_filter,
    spectral_factor,
    validate_config,
)

__all__ = [
    "Gaussian",
    "ModelError",
    "Poisson",
    "SymmetricStable",
    "System",
    "apply_inverse",
    "apply_localization",
    "bspline",
    "bspline_autocorr",
    "bspline_filter",
    "charfn_increment",
    "continuous_autocorr",
    "empirical_autocorr",
    "generate",
    "green_function",
    "increment_spectrum",
    "innovation_variance",
    "levy_exponent",
    "localization_filter",
    "spectral_factor",
    "validate_config",
]
