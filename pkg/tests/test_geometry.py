import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from corpus import CORPUS, K3, P3, P3_A, P3_B, P4, T, T_BOTTOM, T_LEFT, T_TOP
from src.exceptions import GeometryError
from src.firing_poset import StepDirection, ZigzagStep, build_p0
from src.geometry import (
    Point,
    arrangement_violation,
    canonical_lift,
    cube_anchor,
    lift_comparable,
    lift_fire,
    lift_unfire,
    parse_point,
    phi,
    point_join,
    point_meet,
    random_point,
    random_same_region,
    region_signature,
    segment_firings,
    translate,
)
from src.graph_core import neighbors
from src.orientations import (
    FiringMode,
    FiringSequence,
    Orientation,
    validate_firing_sequence,
    vertex_roles,
)

F = Fraction


def test_phi():
    assert phi(P3, Point.of(0, "1/2", "1/4")).code == P3_B
    assert phi(P3, Point.of(0, "1/3", "2/3")).code == P3_A


def test_phi_rejects_points_on_the_arrangement():
    with pytest.raises(GeometryError) as info:
        phi(P3, Point.of(0, "1/2", "1/2"))
    assert info.value.edge == (1, 2)
    assert arrangement_violation(P3, Point.of(0, "1/2", "3/2")) == (1, 2)
    assert arrangement_violation(P3, Point.of(0, 2, "1/2")) == (0, 1)


def test_point_needs_zero_root():
    with pytest.raises(GeometryError, match="x_0"):
        Point.of(1, "1/2")
    with pytest.raises(GeometryError, match="coordinates"):
        phi(P3, Point.of(0, "1/2"))


def test_region_signature():
    signature = region_signature(P3, Point.of(0, "1/2", "-1/4"))
    assert signature.to_model().model_dump_json() == '{"0-1":0,"1-2":-1}'
    assert region_signature(P3, Point.of(0, "1/2", "1/4")).as_dict() == {"0-1": 0, "1-2": -1}
    assert region_signature(P3, Point.of(0, "1/3", "2/3")).as_dict() == {"0-1": 0, "1-2": 0}
    assert region_signature(T, Point.of(0, "3/8", "17/16", "7/8")).as_dict() == {
        "0-1": 0,
        "1-2": 0,
        "1-3": 0,
    }


def test_cube_anchor():
    assert cube_anchor(Point.of(0, "1/2", "-1/4")).floors == (0, 0, -1)
    assert cube_anchor(Point.of(0, "1/3", "2/3")).floors == (0, 0, 0)
    assert cube_anchor(Point.of(0, "3/8", "17/16", "7/8")).floors == (0, 0, 1, 0)
    assert cube_anchor(Point.of(0, "1/2", "-1/4")).to_model().model_dump_json() == '{"floors":[0,0,-1]}'


def test_canonical_lift():
    assert canonical_lift(Orientation.from_code(P3, P3_A)) == Point.of(0, "1/3", "2/3")
    assert canonical_lift(Orientation.from_code(P3, P3_B)) == Point.of(0, "2/3", "1/3")
    assert canonical_lift(Orientation.from_code(T, T_BOTTOM)) == Point.of(0, "1/4", "1/2", "3/4")


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_canonical_lift_maps_back(name):
    for o in build_p0(CORPUS[name]).elements:
        x = canonical_lift(o)
        assert phi(o.graph, x) == o
        assert all(0 <= c < 1 for c in x.coords)


def test_lift_fire_on_tree():
    z = lift_fire(T, Point.of(0, "1/4", "1/2", "3/4"), 2)
    assert z == Point.of(0, "3/8", "17/16", "7/8")
    assert phi(T, z).code == T_LEFT


def test_lift_fire_on_path():
    x = canonical_lift(Orientation.from_code(P4, 0))
    assert x == Point.of(0, "1/4", "1/2", "3/4")
    z = lift_fire(P4, x, 3)
    assert z == Point.of(0, "3/8", "5/8", "17/16")
    assert region_signature(P4, z) == region_signature(P4, x)


def test_lift_fire_errors():
    with pytest.raises(GeometryError, match="neighbor"):
        lift_fire(P3, Point.of(0, "1/3", "2/3"), 1)
    with pytest.raises(GeometryError, match="not a source"):
        lift_fire(P3, Point.of(0, "1/2", "1/4"), 2)


def test_lift_unfire():
    z = lift_unfire(P3, Point.of(0, "1/2", "1/4"), 2)
    assert z == Point.of(0, "1/2", "-1/8")
    assert phi(P3, z).code == P3_A

    z = lift_unfire(T, Point.of(0, "3/8", "17/16", "7/8"), 2)
    assert z[2] == F(31, 32)
    assert phi(T, z).code == T_BOTTOM

    with pytest.raises(GeometryError, match="not a sink"):
        lift_unfire(P3, Point.of(0, "1/3", "2/3"), 2)


def test_lift_comparable_up():
    x = canonical_lift(Orientation.from_code(T, T_BOTTOM))
    top = Orientation.from_code(T, T_TOP)
    z = lift_comparable(T, x, top, FiringSequence(phi(T, x), (2, 3)))
    assert z == Point.of(0, "7/16", "9/8", "33/32")
    assert phi(T, z) == top
    assert set(region_signature(T, z).slabs) == {0}


def test_lift_comparable_down_and_empty():
    x = Point.of(0, "1/2", "1/4")
    a = Orientation.from_code(P3, P3_A)
    steps = [ZigzagStep(2, StepDirection.DOWN, a)]
    assert lift_comparable(P3, x, a, steps) == Point.of(0, "1/2", "-1/8")
    assert lift_comparable(P3, x, phi(P3, x), []) == x
    with pytest.raises(GeometryError):
        lift_comparable(P3, x, a, [])


def test_meet_and_join():
    x = Point.of(0, "1/2", "-1/8")
    y = Point.of(0, "3/8", "1/4")
    assert point_meet(x, y) == Point.of(0, "3/8", "-1/8")
    assert point_join(x, y) == Point.of(0, "1/2", "1/4")
    assert point_meet(x, x) == x


def test_translate_keeps_phi_and_shifts_slabs():
    x = Point.of(0, "1/2", "1/4")
    moved = translate(x, (0, 1, 3))
    assert moved == Point.of(0, "3/2", "13/4")
    assert phi(P3, moved) == phi(P3, x)
    assert region_signature(P3, moved).slabs == (1, 1)
    with pytest.raises(GeometryError):
        translate(x, (1, 0, 0))


def test_segment_firings():
    y = Point.of(0, "1/4", "1/2", "3/4")
    z = Point.of(0, "7/16", "9/8", "33/32")
    f = segment_firings(T, y, z)
    assert f.start.code == T_BOTTOM
    assert f.fires == (2, 3)
    assert segment_firings(T, y, y).fires == ()


def test_segment_firings_errors():
    with pytest.raises(GeometryError, match="different regions"):
        segment_firings(P3, Point.of(0, "1/2", "1/4"), Point.of(0, "1/3", "2/3"))
    with pytest.raises(GeometryError, match="not below"):
        segment_firings(T, Point.of(0, "7/16", "9/8", "33/32"), Point.of(0, "1/4", "1/2", "3/4"))


def test_point_json():
    x = Point.of(0, "1/2", "-1/8")
    assert x.to_model().model_dump_json() == '{"coords":["0","1/2","-1/8"]}'
    assert str(x) == "(0, 1/2, -1/8)"
    assert parse_point(["0", "3", "-2/6"]) == Point.of(0, 3, "-1/3")


@pytest.mark.parametrize("bad", [["0", "0.5"], ["0", "1e3"], ["0", "x"], ["0", "1/0"]])
def test_parse_point_rejects_inexact_values(bad):
    with pytest.raises(ValidationError):
        parse_point(bad)


graph_names = st.sampled_from(sorted(CORPUS))


@settings(max_examples=80, deadline=None)
@given(name=graph_names, seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_same_region_points_form_a_sublattice(name, seed):
    g = CORPUS[name]
    rng = random.Random(seed)
    x = random_point(g, rng, max_denominator=60)
    y = random_same_region(g, x, rng, max_denominator=60)
    signature = region_signature(g, x)
    assert region_signature(g, y) == signature
    low, high = point_meet(x, y), point_join(x, y)
    assert region_signature(g, low) == signature
    assert region_signature(g, high) == signature

    f = segment_firings(g, low, high)
    report = validate_firing_sequence(f, FiringMode.POSET)
    assert report.final == phi(g, high)
    assert report.lemma1_ok and report.bound_ok


@settings(max_examples=80, deadline=None)
@given(name=graph_names, seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_lifts_fire_exactly_one_vertex(name, seed):
    g = CORPUS[name]
    rng = random.Random(seed)
    x = random_point(g, rng, max_denominator=60)
    sources, sinks = vertex_roles(phi(g, x))
    for v in set(g.vertices) - {0} - neighbors(g, 0):
        if v in sources:
            z = lift_fire(g, x, v)
            assert segment_firings(g, x, z).fires == (v,)
        elif v in sinks:
            z = lift_unfire(g, x, v)
            assert segment_firings(g, z, x).fires == (v,)
        else:
            continue
        assert region_signature(g, z) == region_signature(g, x)


@pytest.mark.parametrize("g, max_denominator", [(P3, 0), (P3, 1), (P3, 2), (K3, 2), (T, 3)])
def test_random_points_need_enough_denominators(g, max_denominator):
    rng = random.Random(0)
    with pytest.raises(GeometryError, match="max_denominator"):
        random_point(g, rng, max_denominator=max_denominator)
    with pytest.raises(GeometryError, match="max_denominator"):
        random_same_region(g, canonical_lift(Orientation.from_code(g, 0)), rng, max_denominator)


def test_smallest_allowed_denominator_still_finds_points():
    rng = random.Random(5)
    for _ in range(20):
        x = random_point(K3, rng, max_denominator=3)
        assert arrangement_violation(K3, x) is None
        assert {c.denominator for c in x.coords[1:]} <= {3}
