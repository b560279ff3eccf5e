"""Exception types shared across the package."""


class LieRecogError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(LieRecogError):
    pass


class FieldTooLarge(LieRecogError):
    pass


class ZeroElement(LieRecogError):
    pass


class DimensionMismatch(LieRecogError):
    pass


class NoInvertibleSolution(LieRecogError):
    pass


class BudgetExceeded(LieRecogError):
    pass


class UnsupportedType(LieRecogError):
    pass


class ParallelRoots(LieRecogError):
    pass


class ZeroParameter(LieRecogError):
    pass


class MissingSlot(LieRecogError):
    pass


class OrderUnresolved(LieRecogError):
    pass


class EvenOrder(LieRecogError):
    pass


class FactorNotSeparated(LieRecogError):
    pass


class NotSL2(LieRecogError):
    pass


class NotSL3(LieRecogError):
    pass


class NoNaturalFactor(LieRecogError):
    pass


class OracleUnavailable(LieRecogError):
    pass


class SearchBudgetExhausted(LieRecogError):
    pass


class AmbiguousLambda(SearchBudgetExhausted):
    pass


class LabelMismatch(SearchBudgetExhausted):
    pass


class NotIrreducible(LieRecogError):
    pass


class RestartCapExceeded(LieRecogError):
    pass


class ScenarioUnavailable(LieRecogError):
    pass


class BadArgs(LieRecogError):
    pass
