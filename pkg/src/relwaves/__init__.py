"""Relativistic dynamics in the extended phase space (time and energy as conjugate variables)."""

from .core import (
    ConfigurationError,
    DomainError,
    EvaluationError,
    ExtendedState,
    NumericalError,
    Units,
    mass_shell_residual,
    poisson_bracket_numeric,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DomainError",
    "EvaluationError",
    "ExtendedState",
    "NumericalError",
    "Units",
    "mass_shell_residual",
    "poisson_bracket_numeric",
]
