class ArcFitError(Exception):
    """Base class for errors raised by arcfit."""


class CollinearInput(ArcFitError):
    pass


class DegenerateFit(ArcFitError):
    """The dots do not determine a usable circle (collinear or singular)."""


class ModeMismatch(ArcFitError):
    pass


class InternalInvariant(ArcFitError):
    """A post-condition that the algorithm guarantees was violated (a bug)."""


class ParseError(ArcFitError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RelativeModeUnsupported(ParseError):
    pass


class PostFitBudgetExceeded(UserWarning):
    """An arc could not be pinned to its end dots within the post-fit budget
    and was demoted to a straight run."""
