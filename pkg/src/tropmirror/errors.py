"""Exception hierarchy shared by all modules."""


class TropMirrorError(Exception):
    """Base class; ``module`` names the pipeline stage that raised."""

    module = "core"


class ZeroSeries(TropMirrorError, ZeroDivisionError):
    pass


class NotInvertible(TropMirrorError):
    pass


class CutoffRequired(TropMirrorError):
    pass


class DegenerateInput(TropMirrorError):
    module = "tropical"


class WrongDimension(TropMirrorError):
    module = "tropical"


class NotRegular(TropMirrorError):
    module = "mirror"


class NotClosedTrivalent(TropMirrorError):
    module = "critlocus"


class MinimizerNotRealized(TropMirrorError):
    module = "ci"


class ParseError(TropMirrorError):
    module = "cli"


class ValidationError(TropMirrorError):
    module = "cli"
