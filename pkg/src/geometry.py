"""
Exact-rational geometry of the periodic graphic arrangement.

Points live in the slice x_0 = 0 and must avoid every hyperplane
x_i = x_j + k (ij an edge, k an integer). phi orients each edge toward
the endpoint with the smaller fractional part. Regions are identified by
their per-edge slab indices, and the lift operations move a point inside
its region so that phi changes by exactly one firing.

Coordinates are fractions.Fraction throughout; there is no tolerance.
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from src.exceptions import GeometryError, OrientationError, TheoremViolation
from src.firing_poset import StepDirection, ZigzagStep, steps_from_firings
from src.graph_core import Graph, neighbors
from src.orientations import (
    FiringMode,
    FiringSequence,
    Orientation,
    fire,
    unfire,
    validate_firing_sequence,
    vertex_roles,
)
from src.schemas import CubeAnchorModel, PointModel, RegionSignatureModel

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction, str]


@dataclass(frozen=True)
class Point:
    """Exact coordinates (x_0, ..., x_n) with x_0 = 0."""

    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not coords:
            raise GeometryError("A point needs at least the coordinate x_0")
        if coords[0] != 0:
            raise GeometryError(f"x_0 must be 0, got {coords[0]}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *values: Rational) -> "Point":
        return cls(tuple(Fraction(v) for v in values))

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)

    def __le__(self, other: "Point") -> bool:
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def to_model(self) -> PointModel:
        return PointModel(coords=[str(c) for c in self.coords])

    @classmethod
    def from_model(cls, model: PointModel) -> "Point":
        return cls(tuple(Fraction(c) for c in model.coords))


@dataclass(frozen=True)
class RegionSignature:
    """Slab index floor(x_j - x_i) for every canonical edge (i, j)."""

    edges: Tuple[Tuple[int, int], ...]
    slabs: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {f"{i}-{j}": k for (i, j), k in zip(self.edges, self.slabs)}

    def to_model(self) -> RegionSignatureModel:
        return RegionSignatureModel(self.as_dict())


@dataclass(frozen=True)
class CubeAnchor:
    """Per-vertex floors locating the half-open unit cube of a point."""

    floors: Tuple[int, ...]

    def to_model(self) -> CubeAnchorModel:
        return CubeAnchorModel(floors=list(self.floors))


def fractional_part(a: Fraction) -> Fraction:
    return a - math.floor(a)


def arrangement_violation(g: Graph, x: Point) -> Optional[Tuple[int, int]]:
    """First edge ij with x_j - x_i an integer, or None when x avoids the arrangement."""
    for i, j in g.edges:
        if (x[j] - x[i]).denominator == 1:
            return i, j
    return None


def _require_off(g: Graph, x: Point) -> None:
    if len(x) != g.n + 1:
        raise GeometryError(f"Point has {len(x)} coordinates, graph needs {g.n + 1}")
    edge = arrangement_violation(g, x)
    if edge is not None:
        i, j = edge
        raise GeometryError(
            f"Point {x} lies on a hyperplane of edge {i}-{j}: x_{j} - x_{i} = {x[j] - x[i]}",
            edge=edge,
        )


def phi(g: Graph, x: Point) -> Orientation:
    """Orient each edge toward its endpoint with the smaller fractional part."""
    _require_off(g, x)
    bits = []
    for i, j in g.edges:
        bits.append(1 if fractional_part(x[j]) < fractional_part(x[i]) else 0)
    return Orientation(g, tuple(bits))


def region_signature(g: Graph, x: Point) -> RegionSignature:
    _require_off(g, x)
    return RegionSignature(g.edges, tuple(math.floor(x[j] - x[i]) for i, j in g.edges))


def cube_anchor(x: Point) -> CubeAnchor:
    return CubeAnchor(tuple(math.floor(c) for c in x.coords))


def canonical_lift(o: Orientation) -> Point:
    """
    A point in [0, 1)^(n+1) mapping to o.

    Vertices are listed sinks-first (every head before its tails), ties
    broken by ascending index, and the t-th vertex gets t/(n+1).
    """
    if 0 not in vertex_roles(o)[1]:
        raise GeometryError(f"0 is not a sink of {o}")
    n = o.graph.n
    heads_first = nx.DiGraph()
    heads_first.add_nodes_from(o.graph.vertices)
    heads_first.add_edges_from((head, tail) for tail, head in o.arcs)
    order = list(nx.lexicographical_topological_sort(heads_first))
    coords = [Fraction(0)] * (n + 1)
    for t, v in enumerate(order):
        coords[v] = Fraction(t, n + 1)
    return Point(tuple(coords))


def _lift_lambda(x: Point) -> Fraction:
    # (1 - max_j {x_j}) / 2 over nonzero vertices
    return (1 - max(fractional_part(c) for c in x.coords[1:])) / 2


def _check_lift_vertex(g: Graph, x: Point, i: int) -> Orientation:
    _require_off(g, x)
    if not 1 <= i <= g.n:
        raise GeometryError(f"Vertex {i} out of range 1..{g.n}")
    if i in neighbors(g, 0):
        raise GeometryError(f"Vertex {i} is a neighbor of 0 and cannot fire in P0")
    return phi(g, x)


def lift_fire(g: Graph, x: Point, i: int) -> Point:
    """
    Move x within its region so that phi fires the source i.

    Shift every nonzero coordinate up by lambda, then push x_i just past
    the next integer: z_i = ceil(y_i) + lambda/2.
    """
    before = _check_lift_vertex(g, x, i)
    if i not in vertex_roles(before)[0]:
        raise GeometryError(f"Vertex {i} is not a source of {before}")
    lam = _lift_lambda(x)
    y = [c if k == 0 else c + lam for k, c in enumerate(x.coords)]
    y[i] = math.ceil(y[i]) + lam / 2
    z = Point(tuple(y))
    _check_lift(g, x, z, fire(before, i))
    return z


def lift_unfire(g: Graph, x: Point, i: int) -> Point:
    """
    Move x within its region so that phi unfires the sink i.

    Only x_i moves: z_i = floor(x_i) - lambda/2.
    """
    before = _check_lift_vertex(g, x, i)
    if i not in vertex_roles(before)[1]:
        raise GeometryError(f"Vertex {i} is not a sink of {before}")
    lam = _lift_lambda(x)
    coords = list(x.coords)
    coords[i] = math.floor(coords[i]) - lam / 2
    z = Point(tuple(coords))
    _check_lift(g, x, z, unfire(before, i))
    return z


def _check_lift(g: Graph, x: Point, z: Point, expected: Orientation) -> None:
    if arrangement_violation(g, z) is not None or region_signature(g, z) != region_signature(g, x):
        raise TheoremViolation(f"Lift of {x} to {z} left its region")
    if phi(g, z) != expected:
        raise TheoremViolation(f"Lift of {x} to {z} gives {phi(g, z)}, expected {expected}")


def lift_comparable(
    g: Graph,
    x: Point,
    target: Orientation,
    steps: Union[FiringSequence, Sequence[ZigzagStep]],
) -> Point:
    """
    Lift target into the region of x by following cover steps from phi(x).

    Args:
        g: Underlying graph
        x: Start point
        target: Orientation to reach
        steps: Zigzag steps, or a firing sequence (all steps up)

    Raises:
        GeometryError: the steps do not lead from phi(x) to target
    """
    if isinstance(steps, FiringSequence):
        if steps.start != phi(g, x):
            raise GeometryError(f"Firing sequence starts at {steps.start}, not at phi(x)")
        steps = steps_from_firings(steps)
    z = x
    for number, step in enumerate(steps, 1):
        try:
            if step.direction == StepDirection.UP:
                z = lift_fire(g, z, step.vertex)
            else:
                z = lift_unfire(g, z, step.vertex)
        except GeometryError as e:
            raise GeometryError(f"Invalid step {number} ({step.direction.value} {step.vertex}): {e}") from None
        if phi(g, z) != step.orientation:
            raise GeometryError(
                f"Step {number} arrives at {phi(g, z)}, expected {step.orientation}"
            )
    if phi(g, z) != target:
        raise GeometryError(f"Steps end at {phi(g, z)}, not at target {target}")
    return z


def point_meet(x: Point, y: Point) -> Point:
    """Componentwise minimum."""
    if len(x) != len(y):
        raise GeometryError("Points have different dimensions")
    return Point(tuple(min(a, b) for a, b in zip(x.coords, y.coords)))


def point_join(x: Point, y: Point) -> Point:
    """Componentwise maximum."""
    if len(x) != len(y):
        raise GeometryError("Points have different dimensions")
    return Point(tuple(max(a, b) for a, b in zip(x.coords, y.coords)))


def translate(x: Point, offsets: Sequence[int]) -> Point:
    """Add an integer vector with offset_0 = 0; phi is unchanged, slabs shift by offset_j - offset_i."""
    if len(offsets) != len(x):
        raise GeometryError("Offset vector has the wrong dimension")
    if offsets[0] != 0:
        raise GeometryError("Offset of vertex 0 must be 0")
    return Point(tuple(c + int(k) for c, k in zip(x.coords, offsets)))


def segment_firings(g: Graph, y: Point, z: Point) -> FiringSequence:
    """
    Firing sequence from phi(y) to phi(z) read off the segment from y to z.

    Both points must share a region and satisfy y <= z. Vertex i fires
    each time x_i reaches an integer p in (y_i, z_i]; events are ordered
    by crossing time, ties by ascending vertex.

    Raises:
        GeometryError: different regions, or y is not below z
    """
    if region_signature(g, y) != region_signature(g, z):
        raise GeometryError(f"{y} and {z} lie in different regions")
    if not y <= z:
        raise GeometryError(f"{y} is not below {z} componentwise")
    events: List[Tuple[Fraction, int]] = []
    for i in range(1, g.n + 1):
        rise = z[i] - y[i]
        for p in range(math.floor(y[i]) + 1, math.floor(z[i]) + 1):
            events.append(((p - y[i]) / rise, i))
    events.sort()
    sequence = FiringSequence(phi(g, y), tuple(i for _, i in events))
    try:
        final = validate_firing_sequence(sequence, FiringMode.POSET).final
    except OrientationError as e:
        raise TheoremViolation(f"Segment from {y} to {z} gives an invalid firing sequence: {e}") from e
    if final != phi(g, z):
        raise TheoremViolation(f"Segment from {y} to {z} ends at {final}, not {phi(g, z)}")
    return sequence


def require_max_denominator(vertex_count: int, max_denominator: int) -> None:
    """
    Reject denominators too small to separate every edge.

    Adjacent vertices need distinct fractional parts, so a graph on
    vertex_count vertices needs that many of them, and never fewer than two.
    """
    least = max(2, vertex_count)
    if max_denominator < least:
        raise GeometryError(
            f"max_denominator must be at least {least} for {vertex_count} vertices, got {max_denominator}"
        )


def random_point(g: Graph, rng: random.Random, max_denominator: int = 1000, spread: int = 2) -> Point:
    """
    Seeded random point off the arrangement.

    Coordinates are p/q with 1 <= q <= max_denominator and |p/q| <= spread;
    candidates on a hyperplane are rejected.
    """
    require_max_denominator(g.n + 1, max_denominator)
    while True:
        coords = [Fraction(0)]
        for _ in range(g.n):
            q = rng.randint(1, max_denominator)
            coords.append(Fraction(rng.randint(-spread * q, spread * q), q))
        x = Point(tuple(coords))
        if arrangement_violation(g, x) is None:
            return x


def random_same_region(
    g: Graph,
    x: Point,
    rng: random.Random,
    max_denominator: int = 1000,
    moves: int = 3,
    attempts: int = 20,
) -> Point:
    """
    Seeded random point in the region of x.

    Takes up to `moves` random lift_fire / lift_unfire steps, then tries a
    small rational jitter that is kept only if the region does not change.
    """
    require_max_denominator(g.n + 1, max_denominator)
    signature = region_signature(g, x)
    forbidden = {0} | neighbors(g, 0)
    y = x
    for _ in range(rng.randint(0, moves)):
        sources, sinks = vertex_roles(phi(g, y))
        options = [(lift_fire, v) for v in sorted(sources - forbidden)]
        options += [(lift_unfire, v) for v in sorted(sinks - forbidden)]
        if not options:
            break
        lift, v = rng.choice(options)
        y = lift(g, y, v)

    for _ in range(attempts):
        q = rng.randint(1, max_denominator)
        jitter = [Fraction(0)] + [Fraction(rng.randint(-q, q), 8 * q) for _ in range(g.n)]
        candidate = Point(tuple(c + d for c, d in zip(y.coords, jitter)))
        if arrangement_violation(g, candidate) is None and region_signature(g, candidate) == signature:
            return candidate
    return y


def parse_point(values: Iterable[str]) -> Point:
    """Point from rational strings such as '1/2' or '-3'."""
    return Point.from_model(PointModel(coords=list(values)))
