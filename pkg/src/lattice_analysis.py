"""
Lattice checks for the components of P0.

Meets and joins are computed two ways: by exhaustive scan of a component
and geometrically, by lifting both orientations into one region and
taking the componentwise min / max. verify_theorem runs every check on a
graph and compares the component count with the Greene-Zaslavsky number
read off the chromatic polynomial.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, Generic, Hashable, Iterator, List, Mapping, Optional, Sequence, Tuple, TypeVar

import networkx as nx

from src.exceptions import AcyclicError, NotALatticeError, PosetError, TheoremViolation
from src.firing_poset import (
    Component,
    Poset,
    build_p0,
    component_of,
    components,
    cover_steps,
    leq,
    non_cover_firings,
    zigzag_path,
)
from src.geometry import (
    Point,
    canonical_lift,
    cube_anchor,
    lift_comparable,
    lift_fire,
    lift_unfire,
    phi,
    point_join,
    point_meet,
    random_point,
    random_same_region,
    region_signature,
    require_max_denominator,
    segment_firings,
)
from src.graph_core import Graph, all_connected_graphs, canonical_form, certificate, neighbors
from src.orientations import Orientation, fire, unique_sink_zero, vertex_roles
from src.schemas import (
    ChromaticPolynomialModel,
    ComponentReportModel,
    CorpusReportModel,
    GeometryCheckModel,
    LatticeReportModel,
)

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)


class BoundDirection(str, Enum):
    MEET = "meet"
    JOIN = "join"


def _unique_bound(
    elements: Sequence[T],
    order: Callable[[T, T], bool],
    a: T,
    b: T,
    direction: BoundDirection,
) -> T:
    if direction == BoundDirection.MEET:
        below = lambda u, v: order(u, v)  # noqa: E731
    else:
        below = lambda u, v: order(v, u)  # noqa: E731
    bounds = [c for c in elements if below(c, a) and below(c, b)]
    best = [c for c in bounds if all(below(d, c) for d in bounds)]
    if len(best) != 1:
        raise NotALatticeError(
            f"{a} and {b} have {len(best)} candidate {direction.value}s among {len(bounds)} bounds",
            (a, b),
            direction.value,
        )
    return best[0]


class FiniteLattice(Generic[T]):
    """Finite poset whose meet and join tables are filled by exhaustive scan."""

    def __init__(self, elements: Sequence[T], order: Callable[[T, T], bool]):
        """
        Args:
            elements: Distinct hashable elements
            order: order(u, v) is True iff u <= v

        Raises:
            NotALatticeError: some pair lacks a unique meet or join
        """
        self.elements: List[T] = list(elements)
        self.order = order
        self._meet: Dict[Tuple[T, T], T] = {}
        self._join: Dict[Tuple[T, T], T] = {}
        for a in self.elements:
            for b in self.elements:
                self._meet[a, b] = _unique_bound(self.elements, order, a, b, BoundDirection.MEET)
                self._join[a, b] = _unique_bound(self.elements, order, a, b, BoundDirection.JOIN)

    @classmethod
    def from_covers(cls, elements: Sequence[T], covers: Sequence[Tuple[T, T]]) -> "FiniteLattice[T]":
        """Lattice given by its Hasse diagram."""
        hasse = nx.DiGraph()
        hasse.add_nodes_from(elements)
        hasse.add_edges_from(covers)
        reach = {u: nx.descendants(hasse, u) | {u} for u in elements}
        return cls(elements, lambda u, v: v in reach[u])

    def meet(self, a: T, b: T) -> T:
        return self._meet[a, b]

    def join(self, a: T, b: T) -> T:
        return self._join[a, b]

    def bound(self, a: T, b: T, direction: BoundDirection) -> T:
        return self.meet(a, b) if direction == BoundDirection.MEET else self.join(a, b)

    def __len__(self) -> int:
        return len(self.elements)


def pentagon() -> Tuple[List[str], List[Tuple[str, str]]]:
    """The non-modular lattice N5 as (elements, covers): 0 < a < b < 1 and 0 < c < 1."""
    elements = ["0", "a", "b", "c", "1"]
    covers = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]
    return elements, covers


def is_distributive(lattice: FiniteLattice) -> bool:
    """
    Check a meet (b join c) = (a meet b) join (a meet c) over all triples,
    and the dual law as well.
    """
    meet, join = lattice.meet, lattice.join
    for a in lattice.elements:
        for b in lattice.elements:
            for c in lattice.elements:
                if meet(a, join(b, c)) != join(meet(a, b), meet(a, c)):
                    logger.debug(f"Meet over join fails at ({a}, {b}, {c})")
                    return False
                if join(a, meet(b, c)) != meet(join(a, b), join(a, c)):
                    logger.debug(f"Join over meet fails at ({a}, {b}, {c})")
                    return False
    return True


def component_lattice(c: Component) -> FiniteLattice[Orientation]:
    """Brute-force lattice structure of a component."""
    p = c.poset
    return FiniteLattice(c.orientations, lambda u, v: leq(p, u, v))


def poset_bound(c: Component, a: Orientation, b: Orientation, direction: BoundDirection) -> Orientation:
    """
    Greatest lower bound or least upper bound of a and b by scanning c.

    Raises:
        PosetError: a or b not in c
        TheoremViolation: no unique bound exists
    """
    if a not in c or b not in c:
        raise PosetError(f"{a} and {b} are not both in component {c.index}")
    p = c.poset
    try:
        return _unique_bound(c.orientations, lambda u, v: leq(p, u, v), a, b, direction)
    except NotALatticeError as e:
        raise TheoremViolation(f"Component {c.index} is not a lattice: {e}") from e


def lift_component(c: Component, base: Orientation) -> Dict[Orientation, Point]:
    """
    Lift every orientation of c into the region of canonical_lift(base).

    Walks a breadth-first tree of cover steps from base, so each member
    costs one lift.
    """
    if base not in c:
        raise PosetError(f"{base} is not in component {c.index}")
    g = c.poset.graph
    lifts = {base: canonical_lift(base)}
    frontier = [base]
    while frontier:
        nxt = []
        for o in frontier:
            for step in cover_steps(c.poset, o):
                if step.orientation in lifts:
                    continue
                lifts[step.orientation] = lift_comparable(g, lifts[o], step.orientation, [step])
                nxt.append(step.orientation)
        frontier = nxt
    return lifts


def geometric_bound(
    c: Component,
    a: Orientation,
    b: Orientation,
    direction: BoundDirection,
    lifts: Optional[Mapping[Orientation, Point]] = None,
) -> Orientation:
    """
    Meet or join through the region of a's canonical lift.

    x = canonical_lift(a); y lifts b into the same region along a zigzag
    path; the result is phi(x meet y) or phi(x join y).

    Args:
        lifts: Optional output of lift_component(c, a) to reuse
    """
    if a not in c or b not in c:
        raise PosetError(f"{a} and {b} are not both in component {c.index}")
    g = c.poset.graph
    if lifts is not None:
        x, y = lifts[a], lifts[b]
    else:
        x = canonical_lift(a)
        y = lift_comparable(g, x, b, zigzag_path(c, a, b))
    combined = point_meet(x, y) if direction == BoundDirection.MEET else point_join(x, y)
    return phi(g, combined)


def component_minimum(c: Component) -> Orientation:
    """
    The unique minimal element of c, which must have 0 as its only sink.

    Raises:
        TheoremViolation: several minimal elements, or extra sinks at the minimum
    """
    p = c.poset
    keep = set(c.members)
    minima = [k for k in c.members if not any(a in keep for a in p.digraph.predecessors(k))]
    if len(minima) != 1:
        raise TheoremViolation(f"Component {c.index} has {len(minima)} minimal elements")
    minimum = p.elements[minima[0]]
    sinks = vertex_roles(minimum)[1]
    if sinks != frozenset({0}):
        raise TheoremViolation(f"Minimum {minimum} of component {c.index} has sinks {sorted(sinks)}")
    return minimum


@dataclass(frozen=True)
class ChromaticPolynomial:
    """Integer coefficients, index = power of t."""

    coefficients: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def linear_coefficient(self) -> int:
        return self.coefficients[1] if len(self.coefficients) > 1 else 0

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coefficients) - 1, -1, -1):
            a = self.coefficients[k]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            magnitude = abs(a)
            if k == 0:
                body = str(magnitude)
            else:
                power = "t" if k == 1 else f"t^{k}"
                body = power if magnitude == 1 else f"{magnitude}{power}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(f" {s} {b}" for s, b in terms[1:])

    def to_model(self) -> ChromaticPolynomialModel:
        return ChromaticPolynomialModel(list(self.coefficients))


def _subtract(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    size = max(len(p), len(q))
    p = p + (0,) * (size - len(p))
    q = q + (0,) * (size - len(q))
    return tuple(a - b for a, b in zip(p, q))


@lru_cache(maxsize=None)
def _deletion_contraction(vertex_count: int, edges: Tuple[Tuple[int, int], ...]) -> Tuple[int, ...]:
    if any(u == v for u, v in edges):
        return (0,) * (vertex_count + 1)
    if not edges:
        return (0,) * vertex_count + (1,)
    (u, v), rest = edges[0], edges[1:]
    deleted = _chromatic(vertex_count, rest)

    # merge v into u, shift labels above v down by one; parallel edges collapse
    def relabel(w: int) -> int:
        w = u if w == v else w
        return w - 1 if w > v else w

    merged = {(min(relabel(a), relabel(b)), max(relabel(a), relabel(b))) for a, b in rest}
    contracted = _chromatic(vertex_count - 1, merged)
    return _subtract(deleted, contracted)


def _chromatic(vertex_count: int, edges) -> Tuple[int, ...]:
    edges = list(edges)
    if any(a == b for a, b in edges):
        return (0,) * (vertex_count + 1)
    return _deletion_contraction(*canonical_form(vertex_count, edges))


def chromatic_polynomial(g: Graph) -> ChromaticPolynomial:
    """Deletion-contraction, memoised on the degree-refined canonical edge list."""
    coefficients = _chromatic(g.n + 1, g.edges)
    coefficients = coefficients + (0,) * (g.n + 2 - len(coefficients))
    return ChromaticPolynomial(coefficients[: g.n + 2])


def greene_zaslavsky_count(g: Graph) -> int:
    """
    (-1)^n times the linear coefficient of the chromatic polynomial.

    Raises:
        TheoremViolation: the result is negative
    """
    count = (-1) ** g.n * chromatic_polynomial(g).linear_coefficient
    if count < 0:
        raise TheoremViolation(f"Negative Greene-Zaslavsky count {count} for {g!r}")
    return count


GEOMETRY_CHECKS = (
    "region_closure",
    "cube_anchor",
    "monotonicity",
    "meet_homomorphism",
    "join_homomorphism",
    "lift_fire",
    "lift_unfire",
    "segment_firings",
)


@dataclass
class GeometryCheck:
    samples: int = 0
    violations: Dict[str, int] = field(default_factory=lambda: dict.fromkeys(GEOMETRY_CHECKS, 0))

    def record(self, name: str, ok: bool) -> None:
        if not ok:
            self.violations[name] += 1
            logger.error(f"Geometric check {name} failed")

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def to_model(self) -> GeometryCheckModel:
        return GeometryCheckModel(samples=self.samples, violations=dict(self.violations), passed=self.passed)


def check_geometry(
    g: Graph,
    poset: Poset,
    samples: int,
    rng: random.Random,
    max_denominator: int = 1000,
) -> GeometryCheck:
    """
    Run the geometric property checks on seeded random same-region point pairs.

    Per sample: region closure under meet/join, cube-anchor constancy,
    monotonicity of phi, phi(x meet y) / phi(x join y) against the poset
    bounds, lift round-trips at every movable vertex, and the segment
    firing sequence from x meet y to x join y.
    """
    check = GeometryCheck()
    forbidden = {0} | neighbors(g, 0)
    for _ in range(samples):
        check.samples += 1
        x = random_point(g, rng, max_denominator)
        y = random_same_region(g, x, rng, max_denominator)
        sig = region_signature(g, x)
        low, high = point_meet(x, y), point_join(x, y)
        try:
            check.record(
                "region_closure",
                region_signature(g, low) == sig and region_signature(g, high) == sig,
            )
        except AcyclicError:
            check.record("region_closure", False)
            continue

        ox, oy = phi(g, x), phi(g, y)
        component = component_of(poset, ox)
        try:
            # lift phi(x) back into the region starting from y: same region, same image
            w = lift_comparable(g, y, ox, zigzag_path(component, oy, ox))
            check.record("cube_anchor", cube_anchor(w) == cube_anchor(x))
        except AcyclicError:
            check.record("cube_anchor", False)

        olow, ohigh = phi(g, low), phi(g, high)
        check.record(
            "monotonicity",
            leq(poset, olow, ox) and leq(poset, ox, ohigh) and leq(poset, olow, ohigh),
        )
        for name, direction, image in (
            ("meet_homomorphism", BoundDirection.MEET, olow),
            ("join_homomorphism", BoundDirection.JOIN, ohigh),
        ):
            try:
                check.record(name, image == poset_bound(component, ox, oy, direction))
            except AcyclicError:
                check.record(name, False)

        sources, sinks = vertex_roles(ox)
        for v in sorted(sources - forbidden):
            try:
                z = lift_fire(g, x, v)
                check.record("lift_fire", phi(g, z) == fire(ox, v) and region_signature(g, z) == sig)
            except AcyclicError:
                check.record("lift_fire", False)
        for v in sorted(sinks - forbidden):
            try:
                z = lift_unfire(g, x, v)
                check.record("lift_unfire", fire(phi(g, z), v) == ox and region_signature(g, z) == sig)
            except AcyclicError:
                check.record("lift_unfire", False)

        try:
            segment_firings(g, low, high)
            check.record("segment_firings", True)
        except AcyclicError:
            check.record("segment_firings", False)
    return check


def _check_component(c: Component) -> ComponentReportModel:
    failures: List[str] = []
    is_lattice = False
    distributive = False
    lattice = None
    try:
        lattice = component_lattice(c)
        is_lattice = True
        distributive = is_distributive(lattice)
        if not distributive:
            failures.append("distributivity")
    except NotALatticeError as e:
        failures.append(f"lattice: {e}")

    minimum = None
    unique_sink_minimum = False
    try:
        minimum = component_minimum(c)
        unique_sinks = [o for o in c.orientations if vertex_roles(o)[1] == frozenset({0})]
        unique_sink_minimum = unique_sinks == [minimum]
        if not unique_sink_minimum:
            failures.append("minimum is not the only unique-sink element")
    except TheoremViolation as e:
        failures.append(f"minimum: {e}")

    mismatches = 0
    if lattice is not None:
        for a in c.orientations:
            try:
                lifts = lift_component(c, a)
            except AcyclicError as e:
                failures.append(f"lifting from {a.code}: {e}")
                mismatches += len(c) * 2
                continue
            for b in c.orientations:
                for direction in BoundDirection:
                    try:
                        agree = geometric_bound(c, a, b, direction, lifts) == lattice.bound(a, b, direction)
                    except AcyclicError:
                        agree = False
                    if not agree:
                        mismatches += 1
        if mismatches:
            failures.append(f"geometric bounds disagree on {mismatches} pairs")

    return ComponentReportModel(
        index=c.index,
        size=len(c),
        members=list(c.members),
        is_lattice=is_lattice,
        is_distributive=distributive,
        minimum=minimum.to_model() if minimum is not None else None,
        minimum_code=minimum.code if minimum is not None else None,
        minimum_unique_sink=unique_sink_minimum,
        bounds_agree=is_lattice and mismatches == 0,
        bound_mismatches=mismatches,
        failures=failures,
    )


def verify_theorem(
    g: Graph,
    samples: int = 0,
    rng: Optional[random.Random] = None,
    max_denominator: int = 1000,
) -> LatticeReportModel:
    """
    Check every component of P0(g) and the Greene-Zaslavsky count.

    Failures become report entries; nothing is raised for a failed check.

    Args:
        g: Graph to verify
        samples: Random geometric samples to check (0 skips them)
        rng: Seeded random source for the geometric samples
        max_denominator: Denominator bound for random points

    Returns:
        LatticeReportModel whose `pass` field is the conjunction of all checks
    """
    if samples > 0:
        require_max_denominator(g.n + 1, max_denominator)
    failures: List[str] = []
    try:
        poset = build_p0(g)
    except TheoremViolation as e:
        logger.error(str(e))
        return LatticeReportModel(
            graph=g.to_model(),
            certificate=certificate(g),
            elements=0,
            covers=0,
            non_cover_firings=0,
            component_count=0,
            unique_sink_count=len(unique_sink_zero(g)),
            counts_match=False,
            components=[],
            failures=[f"antisymmetry: {e}"],
            passed=False,
        )

    comps = components(poset)
    component_reports = [_check_component(c) for c in comps]
    for report in component_reports:
        failures.extend(f"component {report.index}: {f}" for f in report.failures)

    gz: Optional[int] = None
    try:
        gz = greene_zaslavsky_count(g)
    except TheoremViolation as e:
        failures.append(f"greene-zaslavsky: {e}")
    unique_sinks = len(unique_sink_zero(g))
    counts_match = gz is not None and len(comps) == gz == unique_sinks
    if not counts_match:
        failures.append(
            f"component count {len(comps)}, Greene-Zaslavsky {gz}, unique-sink orientations {unique_sinks}"
        )

    geometry = None
    if samples > 0:
        geometry = check_geometry(g, poset, samples, rng or random.Random(0), max_denominator)
        failures.extend(f"geometry: {name} x{count}" for name, count in geometry.violations.items() if count)

    report = LatticeReportModel(
        graph=g.to_model(),
        certificate=certificate(g),
        elements=len(poset),
        covers=len(poset.covers),
        non_cover_firings=len(non_cover_firings(poset)),
        component_count=len(comps),
        greene_zaslavsky_count=gz,
        unique_sink_count=unique_sinks,
        counts_match=counts_match,
        components=component_reports,
        geometry=geometry.to_model() if geometry is not None else None,
        failures=failures,
        passed=not failures,
    )
    if failures:
        logger.error(f"Verification of {g!r} failed: {failures}")
    else:
        logger.info(f"Verified {g!r}: {len(comps)} components, all distributive lattices")
    return report


def iter_corpus(max_vertices: int) -> Iterator[Graph]:
    """Connected graphs on up to max_vertices vertices, ordered by (size, certificate)."""
    graphs = list(all_connected_graphs(max_vertices))
    graphs.sort(key=lambda g: (g.n, certificate(g)))
    return iter(graphs)


def verify_all_connected(
    max_vertices: int,
    samples: int = 0,
    seed: int = 0,
    max_denominator: int = 1000,
) -> CorpusReportModel:
    """Run verify_theorem on every connected graph with at most max_vertices vertices."""
    if samples > 0:
        require_max_denominator(max_vertices, max_denominator)
    reports = []
    failed = []
    for g in iter_corpus(max_vertices):
        rng = random.Random(f"{seed}:{certificate(g)}:{g.edges}")
        report = verify_theorem(g, samples=samples, rng=rng, max_denominator=max_denominator)
        reports.append(report)
        if not report.passed:
            failed.append(repr(g))
    logger.info(f"Verified {len(reports)} graphs on <= {max_vertices} vertices, {len(failed)} failed")
    return CorpusReportModel(
        max_vertices=max_vertices,
        graphs=len(reports),
        failed=failed,
        reports=reports,
        passed=not failed,
    )
