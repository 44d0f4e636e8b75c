"""Exception hierarchy.  Each class carries the CLI exit status it maps to."""


class MechnetError(Exception):
    exit_code = 1


class ConfigError(MechnetError, ValueError):
    exit_code = 2


class PhysicsError(MechnetError, ValueError):
    """Unphysical state, violated parameter domain, or unstable dynamics."""

    exit_code = 3


class DomainError(PhysicsError):
    pass


class UnphysicalStateError(PhysicsError):
    pass


class InstabilityError(PhysicsError):
    pass


class ConvergenceError(MechnetError, RuntimeError):
    exit_code = 4

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
