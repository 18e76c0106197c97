"""Exception hierarchy shared by all flipforge modules."""


class FlipForgeError(Exception):
    """Base class for every error raised by flipforge."""


class UnknownDiagonal(FlipForgeError):
    """The requested diagonal is not present in the triangulation."""


class UnknownEdge(FlipForgeError):
    """The requested edge is not present in the combinatorial triangulation."""


class NotFlippable(FlipForgeError):
    """The flip would create an edge that already exists (combinatorial case)."""


class NotAdjacent(FlipForgeError):
    """The two edges do not form a valid spine-swap configuration."""


class SizeMismatch(FlipForgeError):
    """The two inputs do not live on the same polygon / vertex count."""


class OutOfRange(FlipForgeError):
    """A position or interval lies outside the valid index range."""


class InvalidSwapSet(FlipForgeError):
    """The swap pairs cross, or share endpoints."""


class CrossingPairs(InvalidSwapSet):
    """Sorting-model variant of InvalidSwapSet."""


class CertificateViolation(FlipForgeError):
    """A replayed simultaneous sequence broke the crossing-count recurrence."""


class InvalidStart(FlipForgeError):
    """The start state is not the red/blue instance the checker expects."""


class TooSmall(FlipForgeError):
    """The requested structure needs more vertices."""


class InvalidTriangulation(FlipForgeError):
    """The rotation system does not describe a triangulation."""


class BudgetExceeded(FlipForgeError):
    """The oracle state budget would be exceeded; raise instead of truncating."""


class Unreachable(FlipForgeError):
    """Gadget discovery failed to reach the target state (build-breaking)."""


class ParseError(FlipForgeError):
    """A JSON document does not match the expected schema."""


class BadSize(FlipForgeError):
    """Instance generator called with a size outside the legal range."""


class VerificationFailed(FlipForgeError):
    """An emitted sequence failed its own replay check (internal bug)."""


class PieceLabelMismatch(FlipForgeError):
    """Internal consistency failure while decomposing along fixed edges."""
