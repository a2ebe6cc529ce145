class ModSymmError(Exception):
    """
    Base exception for every failure raised by the solver stack.

    Carries a stable numeric code, a human-readable message and the process
    exit code the command line maps it to.
    """

    exit_code: int = 1

    def __init__(self, code: int, message: str, exit_code: int | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code


# Configuration and input exceptions
class ConfigurationError(ModSymmError):
    """Raised when an experiment or curve is misconfigured."""

    def __init__(self, message: str):
        super().__init__(1001, message)


class InputError(ModSymmError):
    """Raised when an operation receives an invalid argument value."""

    def __init__(self, message: str):
        super().__init__(1002, message)


# Numerical exceptions
class PreconditionError(ModSymmError):
    """Raised when a numerical routine is called outside its stated precondition."""

    def __init__(self, message: str):
        super().__init__(2001, message)


class DomainError(ModSymmError):
    """Raised when a point lies outside the domain of an evaluation."""

    def __init__(self, message: str):
        super().__init__(2002, message)


class GeometryError(ModSymmError):
    """Raised when a boundary curve violates the regularity assumption."""

    def __init__(self, message: str):
        super().__init__(2003, message)


class SolverFailure(ModSymmError):
    """
    Raised when the discrete linear system is numerically singular.

    The condition estimate of the rejected system is kept for reporting.
    """

    exit_code = 2

    def __init__(self, message: str, condition: float):
        super().__init__(3001, message)
        self.condition = condition
