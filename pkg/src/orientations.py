"""
Acyclic orientations of a rooted graph and source-firing.

An orientation stores one bit per edge in the graph's edge order: bit 1
means the edge points from its smaller endpoint to its larger one.
Firing a source reverses every edge at it, turning it into a sink.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.exceptions import FiringSequenceError, GraphError, OrientationError
from src.graph_core import Graph, distances_from_root, neighbors
from src.schemas import (
    EnumeratedOrientationModel,
    FiringReportModel,
    FiringSequenceModel,
    OrientationModel,
)

logger = logging.getLogger(__name__)


class FiringMode(str, Enum):
    """Which firings are legal: any source (P) or sources away from 0 (P0)."""

    PREORDER = "P"
    POSET = "P0"


def is_acyclic(g: Graph, directions: Sequence[int]) -> bool:
    """
    Test a raw direction vector for directed cycles.

    Args:
        g: Underlying graph
        directions: One bit per edge in edge-index order

    Returns:
        True iff the digraph has a topological order
    """
    if len(directions) != len(g.edges):
        raise OrientationError(
            f"Expected {len(g.edges)} edge directions, got {len(directions)}"
        )
    return nx.is_directed_acyclic_graph(_digraph(g, directions))


def _digraph(g: Graph, directions: Sequence[int]) -> nx.DiGraph:
    digraph = nx.DiGraph()
    digraph.add_nodes_from(g.vertices)
    digraph.add_edges_from(
        (i, j) if bit else (j, i) for (i, j), bit in zip(g.edges, directions)
    )
    return digraph


@dataclass(frozen=True)
class Orientation:
    """Acyclic orientation of a Graph; construction rejects directed cycles."""

    graph: Graph
    bits: Tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise OrientationError(f"Direction bits must be 0 or 1: {self.bits}")
        if not is_acyclic(self.graph, self.bits):
            raise OrientationError(f"Orientation {self.describe()} has a directed cycle")

    @classmethod
    def from_code(cls, graph: Graph, code: int) -> "Orientation":
        """Decode the integer encoding: bit e of code is the direction of edge e."""
        m = len(graph.edges)
        if not 0 <= code < (1 << m):
            raise OrientationError(f"Code {code} out of range for {m} edges")
        return cls(graph, tuple(code >> e & 1 for e in range(m)))

    @classmethod
    def from_edges(cls, graph: Graph, arcs: Iterable[Sequence[int]]) -> "Orientation":
        """Build from (tail, head) pairs, one per edge in any order."""
        bits = [None] * len(graph.edges)
        for arc in arcs:
            tail, head = int(arc[0]), int(arc[1])
            try:
                e = graph.edge_index(tail, head)
            except GraphError as ex:
                raise OrientationError(str(ex)) from None
            if bits[e] is not None:
                raise OrientationError(f"Edge {tail}-{head} oriented twice")
            bits[e] = 1 if head > tail else 0
        missing = [graph.edges[e] for e, b in enumerate(bits) if b is None]
        if missing:
            raise OrientationError(f"Edges without a direction: {missing}")
        return cls(graph, tuple(bits))

    @property
    def code(self) -> int:
        return sum(bit << e for e, bit in enumerate(self.bits))

    @property
    def arcs(self) -> List[Tuple[int, int]]:
        """(tail, head) per edge in edge-index order."""
        return [(i, j) if bit else (j, i) for (i, j), bit in zip(self.graph.edges, self.bits)]

    def head(self, edge: int) -> int:
        i, j = self.graph.edges[edge]
        return j if self.bits[edge] else i

    def describe(self) -> str:
        return " ".join(
            f"{i}->{j}" if bit else f"{j}->{i}" for (i, j), bit in zip(self.graph.edges, self.bits)
        )

    def __str__(self) -> str:
        return "{" + ", ".join(f"{t}->{h}" for t, h in self.arcs) + "}"

    def to_model(self) -> OrientationModel:
        return OrientationModel(edges=self.arcs)

    def to_enumerated_model(self) -> EnumeratedOrientationModel:
        return EnumeratedOrientationModel(code=self.code, edges=self.arcs)

    @classmethod
    def from_model(cls, graph: Graph, model: OrientationModel) -> "Orientation":
        return cls.from_edges(graph, model.edges)


def vertex_roles(o: Orientation) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """
    Sources (every incident edge outgoing) and sinks (every incident edge incoming).

    Returns:
        (sources, sinks)
    """
    outgoing = Counter()
    incoming = Counter()
    for tail, head in o.arcs:
        outgoing[tail] += 1
        incoming[head] += 1
    sources = frozenset(v for v in o.graph.vertices if incoming[v] == 0)
    sinks = frozenset(v for v in o.graph.vertices if outgoing[v] == 0)
    return sources, sinks


def _redirect(o: Orientation, i: int, toward: bool) -> Orientation:
    bits = list(o.bits)
    for e in o.graph.incident_edges(i):
        _, larger = o.graph.edges[e]
        # head == i when firing, tail == i when unfiring
        bits[e] = int((larger == i) == toward)
    return Orientation(o.graph, tuple(bits))


def fire(o: Orientation, i: int) -> Orientation:
    """Reverse every edge at the source i so that i becomes a sink."""
    sources, _ = vertex_roles(o)
    if i not in sources:
        raise OrientationError(f"Vertex {i} is not a source of {o}")
    return _redirect(o, i, toward=True)


def unfire(o: Orientation, i: int) -> Orientation:
    """Inverse of fire: reverse every edge at the sink i."""
    _, sinks = vertex_roles(o)
    if i not in sinks:
        raise OrientationError(f"Vertex {i} is not a sink of {o}")
    return _redirect(o, i, toward=False)


def enumerate_acyclic(g: Graph) -> List[Orientation]:
    """All acyclic orientations in ascending code order."""
    m = len(g.edges)
    result = []
    for code in range(1 << m):
        bits = tuple(code >> e & 1 for e in range(m))
        if is_acyclic(g, bits):
            result.append(Orientation(g, bits))
    logger.debug(f"{len(result)} acyclic orientations of {g!r}")
    return result


def _root_mask(g: Graph) -> int:
    # edges (0, j) point into 0 exactly when their bit is 0
    return sum(1 << e for e in g.incident_edges(0))


def enumerate_sink_zero(g: Graph) -> List[Orientation]:
    """Acyclic orientations with 0 as a sink, ascending by code."""
    m = len(g.edges)
    mask = _root_mask(g)
    result = []
    for code in range(1 << m):
        if code & mask:
            continue
        bits = tuple(code >> e & 1 for e in range(m))
        if is_acyclic(g, bits):
            result.append(Orientation(g, bits))
    logger.debug(f"{len(result)} orientations of {g!r} with sink 0")
    return result


def unique_sink_zero(g: Graph) -> List[Orientation]:
    """Acyclic orientations whose only sink is 0."""
    return [o for o in enumerate_sink_zero(g) if vertex_roles(o)[1] == frozenset({0})]


def forbidden_firings(g: Graph, mode: FiringMode) -> FrozenSet[int]:
    """Vertices that may never fire: 0 and its neighbors in P0, none in P."""
    if mode == FiringMode.POSET:
        return frozenset({0}) | neighbors(g, 0)
    return frozenset()


def legal_firings(o: Orientation, mode: FiringMode) -> List[int]:
    """Sources of o that the mode allows to fire, ascending."""
    sources, _ = vertex_roles(o)
    return sorted(sources - forbidden_firings(o.graph, mode))


@dataclass(frozen=True)
class FiringSequence:
    """A start orientation and the vertices F(1), ..., F(m) fired from it."""

    start: Orientation
    fires: Tuple[int, ...] = ()

    @property
    def graph(self) -> Graph:
        return self.start.graph

    @property
    def counts(self) -> Tuple[int, ...]:
        """|F^{-1}(i)| for every vertex i."""
        tally = Counter(self.fires)
        return tuple(tally[v] for v in self.graph.vertices)

    def __len__(self) -> int:
        return len(self.fires)

    def to_model(self) -> FiringSequenceModel:
        return FiringSequenceModel(start=self.start.to_model(), fires=list(self.fires))

    @classmethod
    def from_model(cls, graph: Graph, model: FiringSequenceModel) -> "FiringSequence":
        return cls(Orientation.from_model(graph, model.start), tuple(model.fires))


@dataclass(frozen=True)
class FiringReport:
    final: Orientation
    counts: Tuple[int, ...]
    lemma1_ok: bool
    bound_ok: Optional[bool]
    bound: Optional[int]
    length: int

    def to_model(self) -> FiringReportModel:
        return FiringReportModel(
            final=self.final.to_model(),
            counts=list(self.counts),
            length=self.length,
            lemma1_ok=self.lemma1_ok,
            bound_ok=self.bound_ok,
            bound=self.bound,
        )


def firing_bound(g: Graph) -> int:
    """Sum over nonzero vertices of d(0, i) - 1: the longest possible P0 firing sequence."""
    return sum(d - 1 for d in distances_from_root(g)[1:])


def validate_firing_sequence(f: FiringSequence, mode: FiringMode) -> FiringReport:
    """
    Replay a firing sequence and check the firing-count inequalities.

    lemma1_ok holds when |F^{-1}(i)| <= |F^{-1}(j)| + 1 for both
    directions of every edge ij. In P0 mode bound_ok additionally checks
    |F^{-1}(i)| <= d(0, i) - 1 per vertex and m <= sum of those bounds.

    Args:
        f: Sequence to replay
        mode: FiringMode.PREORDER or FiringMode.POSET

    Returns:
        FiringReport with the final orientation and both verdicts

    Raises:
        OrientationError: P0 mode and 0 is not a sink of the start
        FiringSequenceError: a fired vertex is not a legal source at its step
    """
    g = f.graph
    if mode == FiringMode.POSET and 0 not in vertex_roles(f.start)[1]:
        raise OrientationError(f"Start orientation {f.start} does not have 0 as a sink")

    forbidden = forbidden_firings(g, mode)
    current = f.start
    for step, v in enumerate(f.fires, 1):
        if not 0 <= v <= g.n:
            raise FiringSequenceError(f"vertex {v} out of range", step, v)
        if v in forbidden:
            raise FiringSequenceError(
                f"vertex {v} is 0 or a neighbor of the distinguished sink", step, v
            )
        if v not in vertex_roles(current)[0]:
            raise FiringSequenceError(f"vertex {v} is not a source", step, v)
        current = _redirect(current, v, toward=True)

    counts = f.counts
    lemma1_ok = all(
        counts[i] <= counts[j] + 1 and counts[j] <= counts[i] + 1 for i, j in g.edges
    )
    bound_ok = None
    bound = None
    if mode == FiringMode.POSET:
        bound = firing_bound(g)
        distances = distances_from_root(g)
        bound_ok = all(counts[i] <= distances[i] - 1 for i in range(1, g.n + 1)) and len(f) <= bound
    if not lemma1_ok or bound_ok is False:
        logger.error(f"Firing-count check failed for {f.fires} from {f.start}: counts {counts}")
    return FiringReport(
        final=current,
        counts=counts,
        lemma1_ok=lemma1_ok,
        bound_ok=bound_ok,
        bound=bound,
        length=len(f),
    )


def random_firing_sequence(
    start: Orientation,
    length: int,
    rng: random.Random,
    mode: FiringMode = FiringMode.POSET,
) -> FiringSequence:
    """
    Fire uniformly random legal vertices, stopping early when none is legal.

    Args:
        start: Orientation to start from
        length: Maximum number of firings
        rng: Seeded random source
        mode: Which vertices may fire
    """
    current = start
    fires: List[int] = []
    for _ in range(length):
        legal = legal_firings(current, mode)
        if not legal:
            break
        v = rng.choice(legal)
        fires.append(v)
        current = _redirect(current, v, toward=True)
    return FiringSequence(start, tuple(fires))
