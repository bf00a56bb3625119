"""Exception hierarchy shared by every module."""


class SpongeError(Exception):
    """Base class for all spongedim errors."""


class SpecError(SpongeError, ValueError):
    """Invalid sponge specification or malformed input document."""


class LevelError(SpongeError, ValueError):
    """Projection level outside the admissible range."""


class IllegalWordError(SpongeError, ValueError):
    """A word (or cylinder prefix) is not in the relevant language."""


class ResourceLimitError(SpongeError, RuntimeError):
    """An enumeration or construction would exceed its configured cap."""


class DeterminizationError(ResourceLimitError):
    """Subset construction produced more states than allowed."""


class ConvergenceError(SpongeError, RuntimeError):
    """An iterative routine hit its iteration cap.

    The last iterate is kept on ``last`` for inspection.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class VerificationError(SpongeError, AssertionError):
    """An internal cross-check between two independent routes failed."""
