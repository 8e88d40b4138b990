"""Exception hierarchy.

Three families, mirrored by the CLI exit codes: bad input (2), numerical
failure (3), and requests outside the range where the model's distance and
sphere statements hold (4).
"""


class NilGeometryError(Exception):
    exit_code = 1


class InvalidInput(NilGeometryError, ValueError):
    exit_code = 2


class NumericalFailure(NilGeometryError, ArithmeticError):
    exit_code = 3


class ModelBoundViolation(NilGeometryError):
    exit_code = 4


class DuplicatePoints(InvalidInput):
    pass


class InvalidResolution(InvalidInput):
    pass


class BothMidpoints(InvalidInput):
    """Both side points are midpoints; the midline rule applies instead."""


class DegenerateProjection(InvalidInput):
    pass


class NotOnLine(InvalidInput):
    pass


class NotOnSurface(InvalidInput):
    pass


class TargetNotOnArc(InvalidInput):
    pass


class NoConvergence(NumericalFailure):
    pass


class EmptySurface(NumericalFailure):
    pass


class EmptyIntersection(NumericalFailure):
    pass


class ArcSurfaceMiss(NumericalFailure):
    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class NoArcIntersection(NumericalFailure):
    pass


class ThirdCevianMiss(NumericalFailure):
    pass


class OutOfModelRange(ModelBoundViolation):
    pass
