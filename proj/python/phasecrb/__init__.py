"""Quantum Cramer-Rao bounds for stochastic optical phase estimation."""

from ._phasecrb import *  # noqa: F401,F403
from ._phasecrb import (
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    PhysicalityError,
)

__all__ = [name for name in dir() if not name.startswith("_")]
