"""Exception hierarchy. Every error raised by relcert derives from RelcertError."""


class RelcertError(Exception):
    pass


class NonFinite(RelcertError, ValueError):
    pass


class DimensionMismatch(RelcertError, ValueError):
    pass


class RankDeficient(RelcertError, ValueError):
    pass


class SingularOperator(RelcertError, ValueError):
    pass


class NotGraphRepresentable(RelcertError, ValueError):
    pass


class DegenerateBound(RelcertError, ValueError):
    pass


class HypothesisViolated(RelcertError, ValueError):
    pass


class WindowNotInResolvent(RelcertError, ValueError):
    pass


class GapConditionFailed(RelcertError, ValueError):
    pass


class IndexOutOfRange(RelcertError, IndexError):
    pass


class InvalidSpec(RelcertError, ValueError):
    pass


class InputError(RelcertError, ValueError):
    """Malformed input file. ``path`` and ``line`` locate the problem when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class InternalContradiction(RelcertError, RuntimeError):
    """A proven consequence failed numerically: a bug or a tolerance failure.

    ``certificate`` carries whatever was computed before the failure.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
