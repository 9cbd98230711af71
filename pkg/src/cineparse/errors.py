"""Exception hierarchy.

Two families matter to callers: :class:`InputError` for anything wrong with
what was handed in (the CLI maps these to exit status 2) and
:class:`InvariantViolation` for states that valid input can never reach
(exit status 3).
"""


class CineparseError(Exception):
    pass


class InputError(CineparseError, ValueError):
    pass


class InvariantViolation(CineparseError, RuntimeError):
    pass


# manifest ingestion
class InvalidManifest(InputError):
    pass


class EmptyManifest(InvalidManifest):
    pass


class NonContiguousTimeline(InvalidManifest):
    pass


class NegativeDuration(InvalidManifest):
    pass


class InvalidTransition(InvalidManifest):
    pass


# histograms
class InvalidBinCount(InputError):
    pass


class LayoutMismatch(InputError):
    pass


class EmptyReferenceHistogram(InputError):
    pass


class InvalidImage(InputError):
    pass


class MissingHistogram(InputError):
    pass


# rhythm
class GroupTooSmall(InputError):
    pass


class NotAdjacent(InputError):
    pass


# point patterns
class BothEmpty(InputError):
    pass


# fixtures / evaluation
class UnrealizableSpec(InputError):
    pass


class UniverseMismatch(InputError):
    pass


# graph invariants
class CycleDetected(InvariantViolation):
    pass


class NonContiguousScene(InvariantViolation):
    pass
