"""Exception hierarchy shared by every module."""


class ScanCleanError(Exception):
    """Base class for all errors raised by scanclean."""


class LengthMismatch(ScanCleanError, ValueError):
    pass


class DegenerateInput(ScanCleanError, ValueError):
    """An operand has zero variance where a correlation was requested."""


class EmptyInput(ScanCleanError, ValueError):
    pass


class OutOfRange(ScanCleanError, IndexError):
    pass


class BufferTooShort(ScanCleanError, ValueError):
    pass


class TemplateNotFound(ScanCleanError):
    """No candidate window pair reached the estimation threshold.

    ``best_score`` and ``candidate`` describe the best pair that was seen,
    which is useful when tuning ``theta_xcorr``.
    """

    def __init__(self, best_score, candidate=None):
        self.best_score = best_score
        self.candidate = candidate
        super().__init__(f"no template found (best score {best_score:.4f})")


class NoMatch(ScanCleanError):
    """Peak template correlation over the lag span stayed below ``theta_corr``."""

    def __init__(self, best_lag, best_score):
        self.best_lag = best_lag
        self.best_score = best_score
        super().__init__(f"no match (best lag {best_lag}, score {best_score:.4f})")


class InvalidCutoff(ScanCleanError, ValueError):
    pass


class SampleRateMismatch(ScanCleanError, ValueError):
    pass


class ZeroReference(ScanCleanError, ValueError):
    pass


class ZeroOperand(ScanCleanError, ValueError):
    pass


class TooShort(ScanCleanError, ValueError):
    pass


class InvalidModel(ScanCleanError, ValueError):
    pass


class ZeroSignal(ScanCleanError, ValueError):
    pass


class UnsupportedFormat(ScanCleanError, ValueError):
    pass


class CorruptHeader(ScanCleanError, ValueError):
    pass


class MultiChannel(ScanCleanError, ValueError):
    pass


class ConfigParseError(ScanCleanError, ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class ConfigValidationError(ScanCleanError, ValueError):
    """A parameter violates its declared range; ``field`` names it."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
