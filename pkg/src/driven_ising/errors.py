"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class EvaluationError(ArithmeticError):
    """A function produced a non-finite value where a finite one was required."""


class IntegrationError(RuntimeError):
    """The ODE integrator could not advance the state.

    ``time`` holds the last time the integrator reached.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
