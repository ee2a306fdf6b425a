"""Exception hierarchy shared by every module of the package."""


class TrackError(Exception):
    """Base class for all errors raised by traintrack_faces."""


class DanglingSlot(TrackError):
    """A switch slot is unfilled, doubly filled, or refers to a missing switch."""


class NonTrivalent(TrackError):
    """A switch does not have exactly three incident half-branches."""


class RegionMismatch(TrackError):
    """Declared complementary regions disagree with the traced boundary."""


class DimensionMismatch(TrackError, ValueError):
    """Matrix and vector shapes do not fit together."""


class TrackMismatch(TrackError):
    """Two measures (or a measure and a track) live on different tracks."""


class RangeViolation(TrackError):
    """An elementary move parameter lies outside its permitted interval."""


class InvalidResult(TrackError):
    """An operation produced a measure that violates its defining constraints."""


class DeadEnd(TrackError):
    """A branch subset leaves a switch with an empty side."""


class NotShiftable(TrackError):
    """The requested switch is not part of a shiftable configuration."""


class NotLarge(TrackError):
    """The requested branch is not large at both of its ends."""


class NotBirecurrent(TrackError):
    """A presentation's track fails recurrence or transverse recurrence."""


class InvalidComponents(TrackError):
    """Presentation components do not partition the track correctly."""


class NotMaximal(TrackError):
    """The track handed to the face poset is not a maximal recurrent track."""


class BudgetExceeded(TrackError):
    """An enumeration exceeded its node cap."""
