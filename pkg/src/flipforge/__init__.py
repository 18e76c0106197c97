"""flipforge: flip sequences between edge-labelled triangulations."""

from .convex import (
    ConvexTriangulation,
    FanPermutation,
    FlipSequence,
    Labelling,
    canonicalize_unlabelled,
    fan_permutation,
    fan_state,
    flip,
    invert_sequence,
    neighbors_of,
    replay,
    state_from_json,
    state_to_json,
    transform_between,
    verify_sequence,
)
from .errors import FlipForgeError

__all__ = [
    "ConvexTriangulation",
    "FanPermutation",
    "FlipForgeError",
    "FlipSequence",
    "Labelling",
    "canonicalize_unlabelled",
    "fan_permutation",
    "fan_state",
    "flip",
    "invert_sequence",
    "neighbors_of",
    "replay",
    "state_from_json",
    "state_to_json",
    "transform_between",
    "verify_sequence",
]

__version__ = "0.1.0"
