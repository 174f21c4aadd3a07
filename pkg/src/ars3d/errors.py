"""Exception hierarchy shared by all modules."""


class ARSError(Exception):
    """Base class for every error raised by ars3d."""


class InvalidInput(ARSError, ValueError):
    """Non-finite or malformed numeric input."""


class SingularMatrix(ARSError, ArithmeticError):
    pass


class InvalidTheta(ARSError, ValueError):
    pass


class InvalidAutomorphism(ARSError, ValueError):
    pass


class InvalidLinearField(ARSError, ValueError):
    pass


class DegenerateDistribution(ARSError, ValueError):
    """The distribution is {0} x R^2 (or its basis is dependent)."""


class LarcFailure(ARSError, ValueError):
    pass


class EmptyRegularSet(ARSError, ValueError):
    """No point was found where the linear field leaves the distribution."""


class CannotNormalize(ARSError, ValueError):
    pass


class SampleNotOnLocus(ARSError, ValueError):
    pass


class WrongShape(ARSError, ValueError):
    pass


class UnsupportedTheta(ARSError, ValueError):
    pass
