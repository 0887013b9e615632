class CsiError(Exception):
    """Base class for errors raised by this package."""

    kind = "error"


class PgmError(CsiError, ValueError):
    kind = "parse-error"

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class DegenerateDistributionError(CsiError, ValueError):
    """No normalizable probability mass is left."""

    kind = "degenerate-distribution"


class InconsistentRatesError(CsiError, ValueError):
    """A singles-rate pair that no complex amplitude can produce."""

    kind = "inconsistent-rates"


class ResourceLimitError(CsiError, MemoryError):
    kind = "resource-limit"


class UndefinedCorrelationError(CsiError, ValueError):
    kind = "undefined-correlation"
