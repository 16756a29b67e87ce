"""Floquet simulation of the periodically driven transverse-field Ising chain."""

__version__ = "0.1.0"

from .errors import DomainError, EvaluationError, IntegrationError
from .model import ModelParams, NambuSpinor
from .rwa import Branch, PhaseLabel

__all__ = [
    "__version__",
    "DomainError",
    "EvaluationError",
    "IntegrationError",
    "ModelParams",
    "NambuSpinor",
    "Branch",
    "PhaseLabel",
]
