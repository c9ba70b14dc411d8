"""Glimm random-choice scheme with operator splitting for the 1-D
Euler-Poisson system with gamma-law pressure, friction and a background
charge, plus the diagnostics that monitor its BV estimates."""

from .config import RunConfig, load_config, parse_config
from .errors import (BoundViolation, CFLError, ConfigError, ConsistencyError, GlimmError,
                     NumericalError, VacuumError)
from .gas import GasContext, State
from .kernels import BACKEND
from .riemann import solve
from .scheme import run

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BoundViolation", "CFLError", "ConfigError", "ConsistencyError", "GasContext",
    "GlimmError", "NumericalError", "RunConfig", "State", "VacuumError", "load_config",
    "parse_config", "run", "solve",
]
