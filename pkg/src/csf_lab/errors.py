"""Exception hierarchy shared by all csf_lab modules."""


class CSFLabError(Exception):
    """Base class for every error raised by csf_lab."""


class NonPositive(CSFLabError, ValueError):
    """A profile that must be strictly positive has a node with p <= 0."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class NonClosable(CSFLabError, ValueError):
    """The closure integrals of a curvature profile do not vanish."""


class DegenerateSegment(CSFLabError, ValueError):
    """Two consecutive curve points coincide."""


class NonAncientTime(CSFLabError, ValueError):
    """An ancient closed form was requested at t >= 0."""


class StepSizeUnderflow(CSFLabError, RuntimeError):
    """The stability bound forced the time step below ``dt_min``."""


class SelfIntersection(CSFLabError, RuntimeError):
    """An evolving curve lost embeddedness."""


class AllZero(CSFLabError, ValueError):
    """Every sample lies inside the zero band, so the zero count is undefined."""


class EmptyTrajectory(CSFLabError, ValueError):
    pass


class BadBoundary(CSFLabError, ValueError):
    pass


class BadInterval(CSFLabError, ValueError):
    pass


class GridTooCoarse(CSFLabError, ValueError):
    pass


class NonPositiveValues(CSFLabError, ValueError):
    pass


class WrongFrame(CSFLabError, ValueError):
    pass


class TooFewSnapshots(CSFLabError, ValueError):
    pass


class UnknownExperiment(CSFLabError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown experiment"


class ConfigInvalid(CSFLabError, ValueError):
    """Configuration text could not be turned into an ExperimentConfig.

    ``line`` and ``field`` locate the problem when known.
    """

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.field = field
