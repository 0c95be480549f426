class DomainError(ValueError):
    """Parameter outside the range where an operation is defined."""


class NumericalError(ArithmeticError):
    """A quadrature or evaluation produced non-finite or unstable values."""


class QuadratureWarning(RuntimeWarning):
    pass


class TailWarning(RuntimeWarning):
    pass
