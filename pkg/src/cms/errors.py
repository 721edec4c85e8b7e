"""Exception types shared across the package."""


class CMSError(Exception):
    """Base class for every error raised by this package."""


class CapZero(CMSError, ValueError):
    pass


class NotFoundWithinBound(CMSError):
    pass


class Undecidable(CMSError):
    def __init__(self, cap, message="decision not available at this search cap"):
        super().__init__(f"{message} (cap={cap})")
        self.cap = cap


class LengthMismatch(CMSError, ValueError):
    pass


class NotAdmissible(CMSError, ValueError):
    pass


class TailRuleUnsupported(CMSError, ValueError):
    pass


class PreconditionViolated(CMSError):
    pass


class NotCyclicallyAdmissible(CMSError, ValueError):
    pass


class SeriesUndecidable(CMSError):
    pass


class WeightSumError(CMSError, ValueError):
    """Convex-combination weights add up to more than one."""


class NotConverged(CMSError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class TailSeriesDiverges(CMSError):
    pass


class NotEscaping(CMSError):
    pass


class NotIrreducible(CMSError, ValueError):
    pass


class HypothesisViolated(CMSError):
    def __init__(self, which, message=""):
        super().__init__(f"{which}: {message}" if message else which)
        self.which = which


class InfinitePartitionEntropy(CMSError):
    pass


class NullWeightsDiverge(CMSError):
    pass


class CertificateInvalid(CMSError):
    pass


class ConnectorNotFound(CMSError):
    pass


class TargetsNotFinitelySupported(CMSError, ValueError):
    pass


class BlockNotAdmissible(CMSError, ValueError):
    pass


class FPropertyHolds(CMSError):
    pass


class FPropertyUndecided(CMSError):
    pass
