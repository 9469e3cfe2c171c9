"""
Exception hierarchy for the acyclic orientation toolkit.

Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Optional, Tuple


class AcyclicError(Exception):
    """Base class for every error raised by this package."""


class GraphError(AcyclicError, ValueError):
    """Edge-list parse failure or an invalid rooted graph."""


class OrientationError(AcyclicError, ValueError):
    """Invalid orientation, or a firing that is not allowed."""


class FiringSequenceError(OrientationError):
    """A firing sequence breaks down while it is replayed."""

    def __init__(self, message: str, step: int, vertex: int):
        super().__init__(f"step {step}: {message}")
        self.step = step
        self.vertex = vertex


class GeometryError(AcyclicError, ValueError):
    """A point lies on the arrangement or a lift precondition fails."""

    def __init__(self, message: str, edge: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.edge = edge


class PosetError(AcyclicError, ValueError):
    """Orientation outside P0, or elements that are not related as requested."""


class NotALatticeError(AcyclicError):
    """A pair of elements has no unique greatest lower / least upper bound."""

    def __init__(self, message: str, pair: Tuple[object, object], direction: str):
        super().__init__(message)
        self.pair = pair
        self.direction = direction


class TheoremViolation(AcyclicError, RuntimeError):
    """A computed counterexample to one of the lattice results."""
