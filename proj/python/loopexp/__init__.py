"""Exact Jacobi-diagram algebra: quotient spaces, equivariant linking
matrices, the rational Aarhus pairing, and sl2 certificates.

Heavy lifting happens in the C++ extension; JSON-returning calls are wrapped
here to hand back plain dicts.
"""

import json as _json

from loopexp._core import (  # noqa: F401
    Diagram,
    DiagramParseError,
    Malformed,
    NotInSpace,
    Singular,
    TooLarge,
    crude_bound,
    deg_Z,
    exp_substitute,
    is_in_Z,
    laurent_str,
    reduce_coords,
    sl2_brute,
    sl2_weight,
    space_dimensions,
    theta_mn_count,
    xset_size,
)
from loopexp import _core as _c

__all__ = [
    "Diagram", "laurent_str", "exp_substitute", "is_in_Z", "deg_Z",
    "space_dimensions", "reduce_coords", "sl2_weight", "sl2_brute",
    "linking_invert", "clasper_difference", "two_loop", "theta_mn_count",
    "crude_bound", "xset_size", "reproduce",
]


def linking_invert(U, V, W):
    return _json.loads(_c.linking_invert(U, V, W))


def clasper_difference(U, V, W, loops=2, truncate=5):
    return _json.loads(_c.clasper_difference(U, V, W, loops, truncate))


def two_loop(a, b1="0", b2="0"):
    return _json.loads(_c.two_loop(a, str(b1), str(b2)))


def reproduce(section, seed=0):
    return _json.loads(_c.reproduce(section, seed))
