"""
Rooted simple graphs on the vertex set {0, ..., n}.

Parses edge-list files, validates them, and answers the distance and
adjacency queries the rest of the package needs. Vertex 0 is the
distinguished root (the sink of every orientation in P0).
"""

import logging
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

import networkx as nx

from src.exceptions import GraphError
from src.schemas import GraphModel

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def _first_missing(covered: Set[int], n: int, limit: int) -> List[int]:
    """Smallest vertices of 0..n absent from covered, scanning gaps only."""
    missing: List[int] = []
    expected = 0
    for v in sorted(covered) + [n + 1]:
        while expected < v and len(missing) < limit:
            missing.append(expected)
            expected += 1
        if len(missing) == limit:
            break
        expected = v + 1
    return missing


class Graph:
    """Immutable connected simple graph with root 0 and a fixed edge order."""

    __slots__ = ("_n", "_edges", "_edge_index", "_adjacency", "_distances", "_nx")

    def __init__(self, n: int, edges: Iterable[Edge]):
        """
        Build and validate a rooted graph.

        Args:
            n: Number of nonzero vertices; the vertex set is {0, ..., n}
            edges: Unordered pairs; stored canonically as (min, max)

        Raises:
            GraphError: loops, duplicate edges, out-of-range or isolated
                vertices, or a disconnected graph
        """
        if n < 0:
            raise GraphError(f"Vertex count must be nonnegative, got n={n}")

        canonical: List[Edge] = []
        seen = set()
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise GraphError(f"Loop edge at vertex {i}")
            if min(i, j) < 0 or max(i, j) > n:
                raise GraphError(f"Edge {i}-{j} has a vertex outside 0..{n}")
            edge = (min(i, j), max(i, j))
            if edge in seen:
                raise GraphError(f"Duplicate edge {edge[0]}-{edge[1]}")
            seen.add(edge)
            canonical.append(edge)

        if n > 0:
            covered = {v for edge in canonical for v in edge}
            if 0 not in covered:
                raise GraphError("Vertex 0 does not appear in any edge")
            if len(covered) < n + 1:
                missing = n + 1 - len(covered)
                shown = _first_missing(covered, n, limit=5)
                more = f" and {missing - len(shown)} more" if missing > len(shown) else ""
                raise GraphError(f"Isolated vertices: {shown}{more}")

        self._n = n
        self._edges: Tuple[Edge, ...] = tuple(sorted(canonical))
        self._edge_index: Dict[Edge, int] = {e: k for k, e in enumerate(self._edges)}

        graph = nx.Graph()
        graph.add_nodes_from(range(n + 1))
        graph.add_edges_from(self._edges)
        if not nx.is_connected(graph):
            raise GraphError("Graph is disconnected")

        self._nx = nx.freeze(graph)
        self._adjacency: Tuple[FrozenSet[int], ...] = tuple(
            frozenset(graph.neighbors(v)) for v in range(n + 1)
        )
        lengths = nx.single_source_shortest_path_length(graph, 0)
        self._distances: Tuple[int, ...] = tuple(lengths[v] for v in range(n + 1))

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(self._n + 1)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """Canonical edges (min, max) in lexicographic index order."""
        return self._edges

    @property
    def nx_graph(self) -> nx.Graph:
        """Frozen networkx view of the graph."""
        return self._nx

    def edge_index(self, i: int, j: int) -> int:
        """Index of the edge {i, j} in the fixed edge order."""
        try:
            return self._edge_index[(min(i, j), max(i, j))]
        except KeyError:
            raise GraphError(f"{i}-{j} is not an edge") from None

    def incident_edges(self, i: int) -> List[int]:
        """Indices of the edges at vertex i, ascending."""
        self._check_vertex(i)
        return sorted(self._edge_index[(min(i, j), max(i, j))] for j in self._adjacency[i])

    def _check_vertex(self, i: int) -> None:
        if not 0 <= i <= self._n:
            raise GraphError(f"Vertex {i} out of range 0..{self._n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        edges = ",".join(f"{i}{j}" if self._n < 10 else f"{i}-{j}" for i, j in self._edges)
        return f"Graph(n={self._n}, edges={{{edges}}})"

    def to_model(self) -> GraphModel:
        return GraphModel(n=self._n, edges=[(i, j) for i, j in self._edges])

    @classmethod
    def from_model(cls, model: GraphModel) -> "Graph":
        return cls(model.n, model.edges)


def from_edges(edges: Iterable[Edge]) -> "Graph":
    """Graph on {0, ..., max vertex seen}."""
    edges = list(edges)
    if not edges:
        raise GraphError("Vertex 0 is absent: no edges given")
    n = max(max(e) for e in edges)
    return Graph(n, edges)


def parse_edge_list(text: str) -> Graph:
    """
    Parse whitespace-separated vertex pairs, one edge per line.

    '#' starts a comment; blank lines are ignored.

    Args:
        text: Edge-list file contents

    Returns:
        Validated Graph whose vertex set is {0, ..., max vertex seen}
    """
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphError(f"Line {lineno}: expected two vertices, got {len(tokens)} tokens")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphError(f"Line {lineno}: vertices must be integers: {line!r}") from None
        if i < 0 or j < 0:
            raise GraphError(f"Line {lineno}: vertices must be nonnegative: {line!r}")
        edges.append((i, j))

    if not any(0 in e for e in edges):
        raise GraphError("Vertex 0 is absent from the edge list")
    graph = from_edges(edges)
    logger.debug(f"Parsed {graph!r}")
    return graph


def distances_from_root(g: Graph) -> Tuple[int, ...]:
    """Shortest-path distance d(0, i) for every vertex i."""
    return g._distances


def neighbors(g: Graph, i: int) -> FrozenSet[int]:
    """Adjacency set of vertex i."""
    g._check_vertex(i)
    return g._adjacency[i]


def canonical_form(vertex_count: int, edges: Iterable[Edge]) -> Tuple[int, Tuple[Edge, ...]]:
    """
    Relabel vertices by degree refinement and return the sorted edge list.

    The result is a relabelling of the input, so equal forms imply
    isomorphic graphs. Isomorphic graphs can still get different forms;
    callers only use this as a cache key and sort key.
    """
    edges = [(min(u, v), max(u, v)) for u, v in edges]
    adjacency: Dict[int, List[int]] = {v: [] for v in range(vertex_count)}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    degree = {v: len(adj) for v, adj in adjacency.items()}
    order = sorted(
        range(vertex_count),
        key=lambda v: (degree[v], sorted(degree[w] for w in adjacency[v]), v),
    )
    relabel = {v: k for k, v in enumerate(order)}
    relabelled = sorted(
        (min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u, v in edges
    )
    return vertex_count, tuple(relabelled)


def certificate(g: Graph) -> str:
    """Short printable form of canonical_form, e.g. '3:0-2,1-2'."""
    count, edges = canonical_form(g.n + 1, g.edges)
    return f"{count}:" + ",".join(f"{u}-{v}" for u, v in edges)


def all_connected_graphs(max_vertices: int, min_vertices: int = 2) -> Iterator[Graph]:
    """
    Every connected labelled graph on {0, ..., N-1} for min..max vertex counts.

    Graphs come out ordered by (vertex count, edge-subset bitmask).
    """
    for count in range(min_vertices, max_vertices + 1):
        pairs = list(combinations(range(count), 2))
        found = 0
        for mask in range(1, 1 << len(pairs)):
            edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
            candidate = nx.Graph()
            candidate.add_nodes_from(range(count))
            candidate.add_edges_from(edges)
            if nx.is_connected(candidate):
                found += 1
                yield Graph(count - 1, edges)
        logger.info(f"{found} connected graphs on {count} vertices")


def path_graph(vertices: int) -> Graph:
    """Path 0-1-...-(vertices-1)."""
    return Graph(vertices - 1, [(i, i + 1) for i in range(vertices - 1)])


def cycle_graph(vertices: int) -> Graph:
    """Cycle 0-1-...-(vertices-1)-0."""
    if vertices < 3:
        raise GraphError("A cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(vertices - 1)] + [(0, vertices - 1)]
    return Graph(vertices - 1, edges)


def complete_graph(vertices: int) -> Graph:
    return Graph(vertices - 1, combinations(range(vertices), 2))


def complete_bipartite_graph(a: int, b: int) -> Graph:
    """K_{a,b} with parts {0, ..., a-1} and {a, ..., a+b-1}; the root sits in the first part."""
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return Graph(a + b - 1, edges)


def load_graph(path: str, encoding: Optional[str] = "utf-8") -> Graph:
    """Read and parse an edge-list file."""
    with open(path, encoding=encoding) as handle:
        return parse_edge_list(handle.read())
