"""Exception types raised across the package."""


class LifespanError(Exception):
    """Base class for all package errors."""


class OddPointCount(LifespanError, ValueError):
    pass


class InvalidGrid(LifespanError, ValueError):
    pass


class NonIntegrableSingularity(LifespanError, ValueError):
    pass


class EvaluationAtSingularity(LifespanError, ValueError):
    pass


class KernelUnderresolved(LifespanError, ValueError):
    pass


class SymmetryViolation(LifespanError, ValueError):
    pass


class IntegralDiverges(LifespanError, ValueError):
    pass


class CriticalOrSubcritical(LifespanError, ValueError):
    pass


class SupercriticalForMeasures(LifespanError, ValueError):
    pass


class HypothesisViolated(LifespanError, ValueError):
    """A hypothesis of a bound or estimate fails; the message names it."""


class NoApplicableTheorem(LifespanError, ValueError):
    pass


class NegativeData(LifespanError, ValueError):
    pass


class DegenerateScaling(LifespanError, ValueError):
    pass


class InsufficientData(LifespanError, ValueError):
    pass


class InsufficientHistory(LifespanError, ValueError):
    pass


class NotContracting(LifespanError, RuntimeError):
    pass


class DtUnderflow(LifespanError, RuntimeError):
    pass


class BoundaryDominance(LifespanError, ValueError):
    """A growing weight makes the truncated box unreliable."""


class ConfigInvalid(LifespanError, ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class NonFiniteField(LifespanError, FloatingPointError):
    """Raised instead of storing inf or nan in a field."""
