"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so ``cli.main`` can translate
an abort without a lookup table.
"""


class GlimmError(Exception):
    exit_code = 1


class DomainError(GlimmError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class VacuumError(DomainError):
    """A state or Riemann fan would contain vacuum (rho <= 0)."""

    exit_code = 4


class NumericalError(GlimmError, ArithmeticError):
    """An iterative method failed to converge."""


class ConfigError(GlimmError, ValueError):
    exit_code = 2


class CFLError(GlimmError):
    """Measured wave speed exceeds the fixed CFL budget."""

    exit_code = 3


class ConsistencyError(GlimmError):
    """Internal identity violated (far-field recursion, corrector, cone)."""


class BoundViolation(GlimmError):
    """A monitored a-priori bound failed and the run was configured to abort."""

    exit_code = 5
