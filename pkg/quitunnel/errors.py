"""Module that includes the custom exceptions used throughout."""


class MomentumDomainError(ValueError):
    """Raised when a momentum (or energy) outside the open positive axis is supplied."""


class BarrierSpecError(ValueError):
    """Custom error for a barrier with non-physical parameters."""


class PacketWidthMismatchError(ValueError):
    """Indicates that packets with different width parameters were combined."""


class PacketSpecError(ValueError):
    """Custom error for a packet with a non-positive central momentum or width."""


class ScenarioSpecError(ValueError):
    """Indicates that the superposition coefficients or packets of a scenario are invalid."""


class GridSpecError(ValueError):
    """Custom error for an invalid momentum grid specification."""


class OracleConvergenceError(Exception):
    """Raised when a numerical oracle fails to converge after its refinement budget is spent."""


class OracleResolutionError(Exception):
    """Raised when the momentum grid cannot resolve the packets to the required norm accuracy."""


class SweepConfigError(ValueError):
    """Indicates that the sweep configuration (file or flags) is invalid."""


class EmptyTableError(ValueError):
    """Raised when a table without data rows is supplied for plotting."""


class ValidationFailedError(Exception):
    """Indicates that at least one validation criterion failed."""
