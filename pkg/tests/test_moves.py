import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from traintrack_faces.errors import DeadEnd, NotLarge, NotShiftable
from traintrack_faces.exact import kernel_basis
from traintrack_faces.measures import (
    TangentialMeasure,
    WeightSystem,
    is_birecurrent,
    is_recurrent,
    move_matrix,
    pairing_values,
    same_class,
    switch_matrix,
    tangential_class_dim,
    weight_space_dim,
)
from traintrack_faces.moves import (
    CarryingData,
    carrying_from_moves,
    check_carrying,
    compose,
    identity_carrying,
    large_branches,
    lift_weights,
    push_tangential,
    push_tangential_values,
    push_weights,
    push_weights_values,
    random_carried_moves,
    shift,
    shift_with_carrying,
    shiftable_switches,
    split,
    split_with_carrying,
    subtrack,
    subtrack_with_carrying,
)
from traintrack_faces.track import dumps_track, trace_regions


def rand_fraction(rng):
    return Fraction(rng.randint(-20, 20), rng.randint(1, 9))


# sub-tracks


def test_full_subset_is_identity(maxg2):
    assert subtrack(maxg2, maxg2.branch_ids) == maxg2


def test_closed_circuit_smooths_to_a_curve(manifest, maxg2):
    circuit = manifest["max-g2"].fixtures["closed_circuit"]
    cd = subtrack_with_carrying(maxg2, circuit)
    curve = cd.fine
    assert curve.num_switches == 0 and curve.num_branches == 1
    assert curve.branches[0].closed
    assert tangential_class_dim(curve) == 1
    assert sorted(cd.path_ids(curve.branch_ids[0])) == sorted(circuit)
    assert sum(r.euler for r in curve.regions) == -2
    assert not check_carrying(cd)


def test_dead_end(maxg2):
    s = maxg2.switches[0]
    large = maxg2.occupant(s, "large")
    with pytest.raises(DeadEnd):
        subtrack(maxg2, [b for b in maxg2.branch_ids if b != large])
    with pytest.raises(DeadEnd):
        subtrack(maxg2, [])


def test_subtrack_dimensions_are_monotone(maxg2):
    from traintrack_faces.faces import recurrent_supports

    full = weight_space_dim(maxg2)
    for support in recurrent_supports(maxg2):
        cd = subtrack_with_carrying(maxg2, support)
        assert weight_space_dim(cd.fine) <= full
        assert not check_carrying(cd)


def test_mixed_subtrack_drops_the_isolated_leaf(tracks):
    cd = subtrack_with_carrying(tracks["mixed-g2"], [1, 2])
    assert cd.fine.num_branches == 1 and cd.fine.branches[0].closed
    assert sorted(cd.path_ids(1)) == [1, 2]


# shifts


def test_shift_is_an_involution(tracks):
    for name in ("max-g2", "max-g3", "max-g2-split"):
        t = tracks[name]
        for s in shiftable_switches(t):
            once = shift(t, s)
            assert once.num_switches == t.num_switches
            assert once.num_branches == t.num_branches
            assert dumps_track(shift(once, s)) == dumps_track(t)


def test_shift_keeps_dimension(manifest, maxg2):
    s = manifest["max-g2"].fixtures["shift_switch"]
    assert weight_space_dim(shift(maxg2, s)) == 6


def test_unshiftable(tracks):
    with pytest.raises(NotShiftable):
        shift(tracks["circle-g2"], 1)
    t4 = tracks["T4"]
    bad = [s for s in t4.switches if s not in shiftable_switches(t4)]
    for s in bad:
        with pytest.raises(NotShiftable):
            shift(t4, s)


# splits


def test_left_split_keeps_dimension(manifest, maxg2):
    b = manifest["max-g2"].fixtures["split_branch"]
    t = split(maxg2, b, "left")
    assert weight_space_dim(t) == 6
    assert (t.num_switches, t.num_branches) == (12, 18)


def test_central_split_bookkeeping(maxg2):
    for b in large_branches(maxg2):
        t = split(maxg2, b, "central")
        assert t.num_switches == maxg2.num_switches - 2
        assert t.num_branches == maxg2.num_branches - 3
        assert sum(r.euler for r in t.regions) - sum(r.cusps for r in t.regions) // 2 == -2


def test_split_needs_a_large_branch(maxg2):
    small = next(b for b in maxg2.branch_ids if b not in large_branches(maxg2))
    with pytest.raises(NotLarge):
        split(maxg2, small, "left")
    with pytest.raises(ValueError):
        split(maxg2, large_branches(maxg2)[0], "sideways")


def test_left_and_right_differ(maxg2):
    b = large_branches(maxg2)[0]
    assert split(maxg2, b, "left") != split(maxg2, b, "right")


# carrying data


def test_empty_sequence_is_identity(maxg2):
    cd = carrying_from_moves(maxg2, [])
    assert cd.fine == maxg2
    assert all(cd.path_ids(b) == [b] for b in maxg2.branch_ids)


def test_one_split_paths(manifest, maxg2):
    b = manifest["max-g2"].fixtures["split_branch"]
    cd = carrying_from_moves(maxg2, [("split", b, "left")])
    lengths = sorted(len(cd.paths[x]) for x in cd.fine.branch_ids)
    assert max(lengths) == 2 and lengths.count(2) == 2
    assert not check_carrying(cd)


def test_all_ones_through_left_split(manifest, maxg2):
    b = manifest["max-g2"].fixtures["split_branch"]
    cd = split_with_carrying(maxg2, b, "left")
    w = push_tangential(cd, TangentialMeasure(maxg2, [1] * 18))
    for x in cd.fine.branch_ids:
        assert w[x] == len(cd.paths[x])


def test_path_of_length_two(tracks):
    coarse = tracks["mixed-g2"]
    cd = subtrack_with_carrying(coarse, [1, 2])
    w = TangentialMeasure(coarse, {1: 1, 2: 2, 3: 7})
    assert push_tangential(cd, w).values == (3,)
    v = push_weights(cd, WeightSystem(cd.fine, [5]))
    assert (v[1], v[2], v[3]) == (5, 5, 0)


def test_identity_pushes(maxg2):
    cd = identity_carrying(maxg2)
    w = TangentialMeasure(maxg2, [1] * 18)
    assert push_tangential(cd, w) == w
    v = WeightSystem(maxg2, is_recurrent(maxg2).witness)
    assert push_weights(cd, v) == v


def test_random_sequences_revalidate(maxg2):
    rng = random.Random(5)
    for _ in range(5):
        moves = [mv for mv, _, _ in random_carried_moves(maxg2, rng, 5)]
        cd = carrying_from_moves(maxg2, moves)
        assert check_carrying(cd) == []
        assert is_birecurrent(cd.fine)


def test_carrying_json_round_trip(maxg2):
    rng = random.Random(11)
    moves = [mv for mv, _, _ in random_carried_moves(maxg2, rng, 6)]
    cd = carrying_from_moves(maxg2, moves)
    data = json.loads(json.dumps(cd.to_json()))
    again = CarryingData.from_json(data)
    assert again.to_json() == cd.to_json()
    assert again.incidence() == cd.incidence()


def test_composition_is_functorial(maxg2):
    rng = random.Random(3)
    steps = list(random_carried_moves(maxg2, rng, 6))
    total = identity_carrying(maxg2)
    w = [Fraction(1)] * 18
    stepwise = w
    for _, cd, _ in steps:
        total = compose(total, cd)
        stepwise = push_tangential_values(cd, stepwise)
    assert push_tangential_values(total, w) == stepwise
    assert total.paths == carrying_from_moves(maxg2, [m for m, _, _ in steps]).paths


def test_pushforward_is_well_defined_on_classes(maxg2):
    rng = random.Random(8)
    steps = list(random_carried_moves(maxg2, rng, 4))
    cd = carrying_from_moves(maxg2, [m for m, _, _ in steps])
    w = TangentialMeasure(maxg2, [4] * 18)
    base = push_tangential(cd, w)
    for k in move_matrix(maxg2).entries:
        moved = TangentialMeasure(maxg2, [a + Fraction(1, 2) * b for a, b in zip(w.values, k)])
        assert same_class(base, push_tangential(cd, moved))


def test_lift_inverts_push(maxg2):
    rng = random.Random(2)
    for _, cd, w in random_carried_moves(maxg2, rng, 6):
        assert lift_weights(cd, push_weights_values(cd, w)) == w


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_adjointness(seed):
    from traintrack_faces.corpus import entry

    rng = random.Random(seed)
    t = entry("max-g2").track()
    _, cd, _ = next(random_carried_moves(t, rng, 1))
    basis = kernel_basis(switch_matrix(cd.fine))
    coeffs = [rand_fraction(rng) for _ in basis]
    v = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(cd.fine.num_branches)]
    w = [rand_fraction(rng) for _ in range(t.num_branches)]
    assert pairing_values(push_weights_values(cd, v), w) == pairing_values(v, push_tangential_values(cd, w))


def test_regions_follow_moves(maxg2):
    rng = random.Random(4)
    for _, cd, _ in random_carried_moves(maxg2, rng, 8):
        trace = trace_regions(cd.fine)
        assert sorted(trace.cusps_per_circuit) == [3, 3, 3, 3]
        assert all(r.kind == "polygon" for r in cd.fine.regions)
