"""Exception types shared across the package."""


class FreelineError(Exception):
    """Base class for every error raised by freeline_lab."""


class CompositeCharacteristic(FreelineError, ValueError):
    pass


class BadExtension(FreelineError, ValueError):
    pass


class DivisionByZero(FreelineError, ZeroDivisionError):
    pass


class ContextMismatch(FreelineError, ValueError):
    """Operands live in different fields (or ambient spaces)."""


class IndexOutOfRange(FreelineError, IndexError):
    pass


class PointNotOnHypersurface(FreelineError, ValueError):
    pass


class PointNotOnLine(FreelineError, ValueError):
    pass


class InclusionViolated(FreelineError, ValueError):
    pass


class ZeroMap(FreelineError, ValueError):
    pass


class NotSurjective(FreelineError, ValueError):
    pass


class InternalInconsistency(FreelineError, RuntimeError):
    """A consistency identity failed; always indicates a bug."""


class TwistTooNegative(FreelineError, ValueError):
    pass


class DegenerateInput(FreelineError, ValueError):
    pass


class LineNotOnHypersurface(FreelineError, ValueError):
    pass


class PlaneNotOnHypersurface(FreelineError, ValueError):
    pass


class SingularAlongLine(FreelineError, ValueError):
    pass


class PipelineDisagreement(FreelineError, RuntimeError):
    pass


class DegreeMismatch(FreelineError, ValueError):
    pass


class NotBasepointFree(FreelineError, ValueError):
    pass


class NotAMorphism(FreelineError, ValueError):
    pass


class BudgetExhausted(FreelineError, RuntimeError):
    pass


class BudgetExceeded(FreelineError, RuntimeError):
    pass


class CharacteristicDividesDegree(FreelineError, ValueError):
    pass


class DimensionTooSmall(FreelineError, ValueError):
    pass


class NoRootOfMinusOne(FreelineError, ValueError):
    pass


class ParseError(FreelineError, ValueError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(FreelineError, ValueError):
    pass
