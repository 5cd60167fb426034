"""Stone and sober codensity monads on finite topological spaces."""

from .topology import (
    ContinuousMap,
    FiniteSpace,
    classify,
    discrete,
    empty_space,
    indiscrete,
    is_homeomorphic,
    sierpinski,
    validate_topology,
)

__all__ = [
    "ContinuousMap",
    "FiniteSpace",
    "classify",
    "discrete",
    "empty_space",
    "indiscrete",
    "is_homeomorphic",
    "sierpinski",
    "validate_topology",
]
