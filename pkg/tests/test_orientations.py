import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import C4, CORPUS, K3, P3, P3_A, P3_B, T, T_BOTTOM, T_TOP
from src.exceptions import FiringSequenceError, OrientationError
from src.graph_core import distances_from_root, neighbors
from src.orientations import (
    FiringMode,
    FiringSequence,
    Orientation,
    enumerate_acyclic,
    enumerate_sink_zero,
    fire,
    firing_bound,
    is_acyclic,
    random_firing_sequence,
    unfire,
    unique_sink_zero,
    validate_firing_sequence,
    vertex_roles,
)


def orient(g, *arcs):
    return Orientation.from_edges(g, arcs)


def test_codes_match_arcs():
    assert orient(P3, (1, 0), (2, 1)).code == P3_A
    assert orient(P3, (1, 0), (1, 2)).code == P3_B
    assert Orientation.from_code(T, T_TOP).arcs == [(1, 0), (1, 2), (1, 3)]


def test_vertex_roles():
    assert vertex_roles(Orientation.from_code(P3, P3_A)) == ({2}, {0})
    assert vertex_roles(Orientation.from_code(P3, P3_B)) == ({1}, {0, 2})
    assert vertex_roles(orient(K3, (1, 0), (2, 0), (1, 2))) == ({1}, {0})


def test_fire():
    assert fire(Orientation.from_code(P3, P3_A), 2) == Orientation.from_code(P3, P3_B)
    bottom = orient(T, (1, 0), (2, 1), (3, 1))
    assert fire(bottom, 2) == orient(T, (1, 0), (1, 2), (3, 1))


def test_fire_requires_a_source():
    with pytest.raises(OrientationError, match="not a source"):
        fire(Orientation.from_code(P3, P3_B), 2)


def test_unfire_inverts_fire():
    omega_b = Orientation.from_code(P3, P3_B)
    assert unfire(omega_b, 2) == Orientation.from_code(P3, P3_A)
    with pytest.raises(OrientationError, match="not a sink"):
        unfire(omega_b, 1)


def test_is_acyclic():
    # K3 edges (0,1), (0,2), (1,2): 0->1, 2->0, 1->2
    assert not is_acyclic(K3, (1, 0, 1))
    # C4 edges (0,1), (0,3), (1,2), (2,3)
    assert is_acyclic(C4, (1, 1, 1, 1))
    assert not is_acyclic(C4, (1, 0, 1, 1))
    assert all(is_acyclic(T, tuple(code >> e & 1 for e in range(3))) for code in range(8))


def test_cyclic_orientation_rejected():
    with pytest.raises(OrientationError, match="cycle"):
        Orientation(K3, (1, 0, 1))


def test_from_edges_rejects_non_edges():
    with pytest.raises(OrientationError):
        orient(P3, (1, 0), (2, 0))


def test_enumerate_acyclic():
    assert len(enumerate_acyclic(K3)) == 6
    assert len(enumerate_acyclic(P3)) == 4
    assert len(enumerate_acyclic(C4)) == 14
    codes = [o.code for o in enumerate_acyclic(C4)]
    assert codes == sorted(set(codes))


def test_enumerate_sink_zero():
    assert len(enumerate_sink_zero(K3)) == 2
    assert [o.code for o in enumerate_sink_zero(P3)] == [P3_A, P3_B]
    assert len(enumerate_sink_zero(C4)) == 4
    for o in enumerate_sink_zero(C4):
        assert 0 in vertex_roles(o)[1]


def test_unique_sink_zero():
    assert len(unique_sink_zero(K3)) == 2
    assert len(unique_sink_zero(C4)) == 3
    assert len(unique_sink_zero(T)) == 1


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_fire_preserves_acyclicity_and_changes_only_incident_edges(name):
    g = CORPUS[name]
    for o in enumerate_acyclic(g):
        sources, _ = vertex_roles(o)
        for v in sources:
            fired = fire(o, v)
            assert v in vertex_roles(fired)[1]
            changed = {g.edges[e] for e in range(len(g.edges)) if fired.bits[e] != o.bits[e]}
            assert changed == {e for e in g.edges if v in e and o.head(g.edges.index(e)) != v}


def test_validate_single_firing():
    report = validate_firing_sequence(
        FiringSequence(Orientation.from_code(P3, P3_A), (2,)), FiringMode.POSET
    )
    assert report.final.code == P3_B
    assert report.counts == (0, 0, 1)
    assert report.lemma1_ok
    assert report.bound_ok
    assert report.bound == 1


def test_validate_two_firings():
    report = validate_firing_sequence(
        FiringSequence(Orientation.from_code(T, T_BOTTOM), (2, 3)), FiringMode.POSET
    )
    assert report.final == orient(T, (1, 0), (1, 2), (1, 3))
    assert report.counts == (0, 0, 1, 1)
    assert report.lemma1_ok and report.bound_ok
    assert report.bound == 2


def test_validate_rejects_firing_a_sink():
    with pytest.raises(FiringSequenceError) as info:
        validate_firing_sequence(
            FiringSequence(Orientation.from_code(P3, P3_A), (2, 2)), FiringMode.POSET
        )
    assert info.value.step == 2
    assert info.value.vertex == 2


def test_validate_rejects_neighbors_of_root_in_p0():
    start = Orientation.from_code(T, T_BOTTOM)
    with pytest.raises(FiringSequenceError, match="neighbor") as info:
        validate_firing_sequence(FiringSequence(start, (1,)), FiringMode.POSET)
    assert info.value.step == 1


def test_preorder_mode_allows_root_when_it_is_a_source():
    # 0->1, 0->2, 1->2
    start = orient(K3, (0, 1), (0, 2), (1, 2))
    report = validate_firing_sequence(FiringSequence(start, (0,)), FiringMode.PREORDER)
    assert report.final == orient(K3, (1, 0), (2, 0), (1, 2))
    assert report.bound_ok is None
    with pytest.raises(OrientationError, match="sink"):
        validate_firing_sequence(FiringSequence(start, (0,)), FiringMode.POSET)


def test_firing_sequence_json():
    f = FiringSequence(Orientation.from_code(P3, P3_A), (2,))
    assert f.to_model().model_dump_json() == '{"start":{"edges":[[1,0],[2,1]]},"fires":[2]}'
    assert FiringSequence.from_model(P3, f.to_model()) == f


@settings(max_examples=60, deadline=None)
@given(
    name=st.sampled_from(sorted(CORPUS)),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    length=st.integers(min_value=0, max_value=40),
)
def test_random_sequences_keep_neighbor_counts_close_in_both_modes(name, seed, length):
    g = CORPUS[name]
    rng = random.Random(seed)
    for mode, starts in (
        (FiringMode.PREORDER, enumerate_acyclic(g)),
        (FiringMode.POSET, enumerate_sink_zero(g)),
    ):
        start = rng.choice(starts)
        f = random_firing_sequence(start, length, rng, mode)
        report = validate_firing_sequence(f, mode)
        assert report.lemma1_ok
        if mode == FiringMode.POSET:
            assert report.bound_ok
            assert len(f) <= firing_bound(g)
            assert not set(f.fires) & ({0} | neighbors(g, 0))


def test_firing_bound():
    assert firing_bound(T) == 2
    assert firing_bound(K3) == 0
    assert firing_bound(CORPUS["P6"]) == sum(d - 1 for d in distances_from_root(CORPUS["P6"])[1:]) == 10
