"""
The poset P0 of acyclic orientations with sink 0 under source-firing.

Elements are the orientations with 0 as a sink; a cover pair (a, b)
records that b comes from a by firing one vertex that is neither 0 nor
adjacent to 0. The order is the reflexive-transitive closure of those
firings.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx

from src.exceptions import PosetError, TheoremViolation
from src.graph_core import Graph
from src.orientations import (
    FiringMode,
    FiringSequence,
    Orientation,
    enumerate_sink_zero,
    fire,
    legal_firings,
    vertex_roles,
)
from src.schemas import ComponentModel, PosetModel

logger = logging.getLogger(__name__)


class StepDirection(str, Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class ZigzagStep:
    """One cover step: fire (up) or unfire (down) `vertex`, arriving at `orientation`."""

    vertex: int
    direction: StepDirection
    orientation: Orientation


class Poset:
    """Elements of P0, their single-firing covers, and the reachability order."""

    def __init__(
        self,
        graph: Graph,
        elements: Sequence[Orientation],
        covers: Sequence[Tuple[int, int, int]],
    ):
        """
        Args:
            graph: Underlying rooted graph
            elements: Orientations, indexed by position
            covers: (a_index, b_index, fired vertex) triples
        """
        self.graph = graph
        self.elements: Tuple[Orientation, ...] = tuple(elements)
        self._index: Dict[Orientation, int] = {o: k for k, o in enumerate(self.elements)}

        self.digraph = nx.DiGraph()
        self.digraph.add_nodes_from(range(len(self.elements)))
        for a, b, v in covers:
            self.digraph.add_edge(a, b, vertex=v)

        if not nx.is_directed_acyclic_graph(self.digraph):
            cycle = nx.find_cycle(self.digraph)
            raise TheoremViolation(
                f"P0 of {graph!r} is not antisymmetric: firing cycle through {cycle}"
            )

        self.reach: Tuple[FrozenSet[int], ...] = tuple(
            frozenset(nx.descendants(self.digraph, k)) | {k} for k in range(len(self.elements))
        )

    @property
    def covers(self) -> List[Tuple[int, int]]:
        return sorted(self.digraph.edges())

    def cover_vertex(self, a: int, b: int) -> int:
        return self.digraph.edges[a, b]["vertex"]

    def index(self, o: Orientation) -> int:
        try:
            return self._index[o]
        except KeyError:
            raise PosetError(f"Orientation {o} is not an element of P0") from None

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"Poset({self.graph!r}, elements={len(self)}, covers={self.digraph.number_of_edges()})"

    def to_model(self) -> PosetModel:
        return PosetModel(
            elements=[o.to_model() for o in self.elements],
            covers=self.covers,
        )


@dataclass(frozen=True)
class Component:
    """Weakly connected component of P0."""

    poset: Poset = field(compare=False, repr=False)
    index: int
    members: Tuple[int, ...]

    @property
    def orientations(self) -> List[Orientation]:
        return [self.poset.elements[k] for k in self.members]

    @property
    def covers(self) -> List[Tuple[int, int]]:
        keep = set(self.members)
        return [(a, b) for a, b in self.poset.covers if a in keep]

    def __contains__(self, o: Orientation) -> bool:
        index = self.poset._index.get(o)
        return index is not None and index in self.members

    def __len__(self) -> int:
        return len(self.members)

    def to_model(self, minimum: Optional[int] = None) -> ComponentModel:
        return ComponentModel(
            index=self.index,
            members=list(self.members),
            codes=[self.poset.elements[k].code for k in self.members],
            covers=self.covers,
            minimum=minimum,
        )


def allowed_firings_p0(o: Orientation) -> List[int]:
    """Sources of o other than 0 and the neighbors of 0."""
    if 0 not in vertex_roles(o)[1]:
        raise PosetError(f"0 is not a sink of {o}")
    return legal_firings(o, FiringMode.POSET)


def build_p0(g: Graph) -> Poset:
    """
    Build P0 from every legal single firing.

    Raises:
        TheoremViolation: the firing relation has a cycle (P0 not antisymmetric)
    """
    elements = enumerate_sink_zero(g)
    index = {o: k for k, o in enumerate(elements)}
    covers = []
    for a, o in enumerate(elements):
        for v in allowed_firings_p0(o):
            covers.append((a, index[fire(o, v)], v))
    poset = Poset(g, elements, covers)
    logger.info(f"Built {poset!r}")
    return poset


def leq(p: Poset, a: Orientation, b: Orientation) -> bool:
    """True iff b is reachable from a by legal firings."""
    return p.index(b) in p.reach[p.index(a)]


def components(p: Poset) -> List[Component]:
    """Weak components of the cover graph, ordered by smallest member index."""
    groups = sorted(sorted(c) for c in nx.weakly_connected_components(p.digraph))
    return [Component(p, k, tuple(members)) for k, members in enumerate(groups)]


def component_of(p: Poset, o: Orientation) -> Component:
    target = p.index(o)
    for component in components(p):
        if target in component.members:
            return component
    raise PosetError(f"No component contains {o}")  # unreachable for a built poset


def _ordered_neighbors(p: Poset, k: int, undirected: bool) -> List[Tuple[int, StepDirection, int]]:
    steps = [(p.cover_vertex(k, b), StepDirection.UP, b) for b in p.digraph.successors(k)]
    if undirected:
        steps += [(p.cover_vertex(a, k), StepDirection.DOWN, a) for a in p.digraph.predecessors(k)]
    # ascending vertex, then ascending element index
    return sorted(steps, key=lambda s: (s[0], s[2]))


def _bfs(p: Poset, start: int, goal: int, undirected: bool) -> List[Tuple[int, StepDirection, int]]:
    parent: Dict[int, Tuple[int, int, StepDirection]] = {}
    seen: Set[int] = {start}
    queue = deque([start])
    while queue and goal not in seen:
        k = queue.popleft()
        for vertex, direction, nxt in _ordered_neighbors(p, k, undirected):
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (k, vertex, direction)
            queue.append(nxt)
    if goal not in seen:
        raise PosetError(f"No path from element {start} to element {goal}")
    path = []
    k = goal
    while k != start:
        prev, vertex, direction = parent[k]
        path.append((vertex, direction, k))
        k = prev
    return list(reversed(path))


def cover_path(p: Poset, a: Orientation, b: Orientation) -> FiringSequence:
    """
    Shortest chain of covers from a up to b, as a firing sequence.

    Raises:
        PosetError: a is not below b
    """
    if not leq(p, a, b):
        raise PosetError(f"{a} is not below {b} in P0")
    path = _bfs(p, p.index(a), p.index(b), undirected=False)
    return FiringSequence(a, tuple(vertex for vertex, _, _ in path))


def zigzag_path(c: Component, a: Orientation, b: Orientation) -> List[ZigzagStep]:
    """
    Shortest walk from a to b in the undirected cover graph of a component.

    Each step either fires a vertex (up) or unfires one (down).

    Raises:
        PosetError: a and b lie in different components
    """
    if a not in c or b not in c:
        raise PosetError(f"{a} and {b} are not both in component {c.index}")
    p = c.poset
    path = _bfs(p, p.index(a), p.index(b), undirected=True)
    return [ZigzagStep(vertex, direction, p.elements[k]) for vertex, direction, k in path]


def cover_steps(p: Poset, o: Orientation) -> List[ZigzagStep]:
    """Every single cover step out of o, up or down, in tie-break order."""
    return [
        ZigzagStep(vertex, direction, p.elements[k])
        for vertex, direction, k in _ordered_neighbors(p, p.index(o), undirected=True)
    ]


def steps_from_firings(f: FiringSequence) -> List[ZigzagStep]:
    """Upward steps for a firing sequence (a chain of covers)."""
    steps = []
    current = f.start
    for v in f.fires:
        current = fire(current, v)
        steps.append(ZigzagStep(v, StepDirection.UP, current))
    return steps


def hasse_covers(p: Poset) -> List[Tuple[int, int]]:
    """Transitive reduction of the single-firing relation."""
    return sorted(nx.transitive_reduction(p.digraph).edges())


def non_cover_firings(p: Poset) -> List[Tuple[int, int]]:
    """Single firings that the transitive reduction drops."""
    reduced = set(hasse_covers(p))
    found = [pair for pair in p.covers if pair not in reduced]
    if found:
        logger.warning(f"{len(found)} single firings of {p!r} are not covers: {found}")
    return found


def to_dot(p: Poset) -> str:
    """Hasse diagram as DOT text; nodes are element codes, edges carry the fired vertex."""
    lines = ["digraph P0 {", "  rankdir=BT;"]
    for k, o in enumerate(p.elements):
        lines.append(f'  {k} [label="{o.code}: {o.describe()}"];')
    for a, b in hasse_covers(p):
        lines.append(f'  {a} -> {b} [label="{p.cover_vertex(a, b)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
