"""Exception hierarchy shared by the bookkeeping modules."""
from fractions import Fraction
from typing import Optional


class BookkeeperError(Exception):
    """Base class for every error raised by rankin-bookkeeper."""


class DegenerateBlock(BookkeeperError):
    """A zero-size block reached an operation that needs positive sizes."""


class NotStandard(BookkeeperError):
    """An intersection parabolic is not standard."""


class RefinementError(BookkeeperError):
    """Two compositions are not nested the way an operation requires."""


class CompositionMismatch(BookkeeperError):
    """A Weyl element does not act on the given composition."""


class ValidationError(BookkeeperError):
    """An inducing datum fails one of its defining constraints."""

    def __init__(self, clause: str, detail: Optional[str] = None):
        self.clause = clause
        self.detail = detail
        message = clause if detail is None else f"{clause}: {detail}"
        super().__init__(message)


class Unsupported(BookkeeperError):
    """The requested (representation, Weyl element) case has no explicit formula."""


class PoleAt(BookkeeperError):
    """A numeric evaluation was requested at a pole."""

    def __init__(self, pole: Fraction):
        self.pole = pole
        super().__init__(f"evaluation at the pole s={pole}")


class LimitInstability(BookkeeperError):
    """A numeric limit did not settle within tolerance."""


class ConfigError(BookkeeperError):
    """Invalid run configuration or input file."""


class LimitExceeded(BookkeeperError):
    """An enumeration grew past a configured limit."""
