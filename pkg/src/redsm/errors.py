"""Exception hierarchy. Every error raised by the library derives from ReDSMError."""


class ReDSMError(ValueError):
    pass


class DimMismatch(ReDSMError):
    pass


class NotHermitian(ReDSMError):
    pass


class NotUnitary(ReDSMError):
    pass


class NotReal(ReDSMError):
    pass


class NotDensityMatrix(ReDSMError):
    pass


class IndexOutOfRange(ReDSMError):
    pass


class BadIndex(IndexOutOfRange):
    pass


class NuOutOfRange(ReDSMError):
    pass


class BadTheta(ReDSMError):
    pass


class SingularTheta(BadTheta):
    pass


class UnsupportedDimension(ReDSMError):
    pass


class NotPrime(UnsupportedDimension):
    pass


class ZeroNorm(ReDSMError):
    pass


class DegenerateSigma(ReDSMError):
    """The amplitude sum vanishes, so the DSM pointer carries no phase reference."""


class MissingSetting(ReDSMError):
    pass


class IncompleteData(ReDSMError):
    pass


class EmptyDistribution(ReDSMError):
    pass


class BudgetTooSmall(ReDSMError):
    pass


class ConfigError(ReDSMError):
    pass
