"""Exception hierarchy shared by all volmrf modules."""


class VolMRFError(Exception):
    """Base class for every error raised by volmrf."""


class BoundsError(VolMRFError, IndexError):
    pass


class ParameterError(VolMRFError, ValueError):
    pass


class ShapeError(VolMRFError, ValueError):
    pass


class ValidationError(VolMRFError, ValueError):
    pass


class FormatError(VolMRFError):
    pass


class TruncationError(FormatError):
    pass
