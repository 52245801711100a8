"""Exception types raised across the package."""


class JammingError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(JammingError):
    """A search or evaluation would exceed its configured size budget."""

    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"search size {required} exceeds budget {budget}")


class NotSquare(JammingError, ValueError):
    pass


class NotHermitian(JammingError, ValueError):
    pass


class NegativeEigenvalue(JammingError, ValueError):
    pass


class UnsupportedDimension(JammingError, ValueError):
    pass


class NotPrime(JammingError, ValueError):
    pass


class ParseError(JammingError, ValueError):
    """A frame or strategy file could not be parsed.

    ``line`` and ``field`` locate the problem when known.
    """

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ValidationError(JammingError, ValueError):
    """Loaded or constructed data violates a structural invariant."""


class NonFiniteObjective(JammingError, FloatingPointError):
    pass
