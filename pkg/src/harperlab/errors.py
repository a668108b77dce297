"""Exception types raised across harperlab."""


class HarperLabError(Exception):
    """Base class for all library errors."""

    code = "error"


class PrecisionExhausted(HarperLabError):
    code = "precision-exhausted"


class StripExceeded(HarperLabError, ValueError):
    code = "strip-exceeded"


class QuadratureNotConverged(HarperLabError):
    code = "quadrature-not-converged"


class GridTooCoarse(HarperLabError):
    code = "grid-too-coarse"


class NonUnimodular(HarperLabError, ValueError):
    code = "non-unimodular"


class ToleranceUnreachable(HarperLabError, ValueError):
    code = "tolerance-unreachable"


class RootSeparationTooSmall(HarperLabError, ValueError):
    code = "root-separation-too-small"


class LevelExceedsZeta(HarperLabError, ValueError):
    code = "level-exceeds-zeta"


class PreconditionViolated(HarperLabError, ValueError):
    code = "precondition-violated"


class NodesCoincide(HarperLabError, ValueError):
    code = "interpolation-nodes-coincide"


class DegenerateSet(HarperLabError, ValueError):
    code = "degenerate-set"


class AllZeroTail(HarperLabError, ValueError):
    code = "all-zero-tail"


class EigensolverFailure(HarperLabError):
    code = "eigensolver-failure"


class GammaNonPositive(HarperLabError, ValueError):
    code = "gamma-nonpositive"
