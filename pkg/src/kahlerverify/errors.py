"""Exception hierarchy shared by all modules."""


class KahlerVerifyError(Exception):
    """Base class for every error raised by this package."""


class SingularPoint(KahlerVerifyError, ValueError):
    """Evaluation point lies on, or too close to, an excluded coordinate locus."""


class DegreeError(KahlerVerifyError, ValueError):
    pass


class MetricDegenerate(KahlerVerifyError, ValueError):
    pass


class QuadratureDiverged(KahlerVerifyError, ArithmeticError):
    """The error estimate grew under refinement."""


class ChartOverflow(KahlerVerifyError, ValueError):
    """A parameterization produced points outside the chart box."""


class NotCompatible(KahlerVerifyError, ValueError):
    pass


class EigenbasisError(KahlerVerifyError, ArithmeticError):
    pass


class DegenerateDefiningFunction(KahlerVerifyError, ValueError):
    pass


class NotLevelSet(KahlerVerifyError, ValueError):
    pass


class InvalidConformalFactor(KahlerVerifyError, ValueError):
    pass


class InvalidStructureFunction(KahlerVerifyError, ValueError):
    pass


class CatalogSelfCheckFailed(KahlerVerifyError, AssertionError):
    pass


class InvalidAnnulus(KahlerVerifyError, ValueError):
    pass


class NotHarmonic(KahlerVerifyError, ValueError):
    pass
