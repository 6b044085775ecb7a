"""Exception hierarchy shared by all ifmsim modules."""


class IFMError(ValueError):
    """Base class for every error raised by ifmsim."""


class AllZero(IFMError):
    pass


class NonFinite(IFMError):
    pass


class NotNormalized(IFMError):
    pass


class NotHermitian(IFMError):
    pass


class InvalidSpectrum(IFMError):
    pass


class ConvergenceError(IFMError, ArithmeticError):
    pass


class InvalidConfig(IFMError):
    pass


class InvalidSpec(IFMError):
    pass


class ZeroProbability(IFMError):
    pass


class InvalidDistribution(IFMError):
    pass
