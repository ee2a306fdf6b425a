"""Sub-tracks, shifts, splits and the carrying maps they induce.

A carrying of a fine track by a coarse one is stored as branch paths: each
fine branch maps to the oriented sequence of coarse branches it runs over.
Tangential measures push forward by summing along paths; weight systems
pull back the other way (the adjoint).

Ids are reused deterministically: a move keeps every switch and branch id it
does not destroy, the diagonal branch of a split takes the id of the split
branch, and a branch made by joining several branches takes the smallest of
their ids.  Branch paths of a shift's connector are empty: after a shift the
connector lies inside a switch neighbourhood of the coarse track.

Complementary regions are carried across a move by following surviving
branch sides; regions that become connected are merged and their Euler
characteristics added, with the local correction of the move.  Every result
is re-validated, so a bookkeeping error surfaces as ``RegionMismatch``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DeadEnd, InvalidResult, NotLarge, NotShiftable, RegionMismatch
from .exact import RationalMatrix, kernel_basis, solve
from .measures import (
    TangentialMeasure,
    WeightSystem,
    switch_matrix,
)
from .track import (
    SLOTS,
    Branch,
    End,
    Region,
    TrainTrack,
    build_track,
    trace_regions,
)

OStep = tuple[int, bool]  # (coarse branch id, traversed from end 0 to end 1)
EndRef = tuple[object, int]  # (piece key, end index)


# ---------------------------------------------------------------------------
# carrying data


@dataclass(frozen=True)
class CarryingData:
    coarse: TrainTrack
    fine: TrainTrack
    paths: dict = field(hash=False)

    def path_ids(self, bid: int) -> list[int]:
        return [b for b, _ in self.paths[bid]]

    def incidence(self) -> RationalMatrix:
        """Coarse x fine matrix counting how often each fine path runs over each coarse branch."""
        rows = [[0] * self.fine.num_branches for _ in range(self.coarse.num_branches)]
        for j, fb in enumerate(self.fine.branch_ids):
            for b, _ in self.paths[fb]:
                rows[self.coarse.index[b]][j] += 1
        return RationalMatrix.from_rows(rows, self.fine.num_branches)

    def to_json(self) -> dict:
        return {
            "coarse": self.coarse.to_dict(),
            "fine": self.fine.to_dict(),
            "paths": {str(b): self.path_ids(b) for b in self.fine.branch_ids},
        }

    @classmethod
    def from_json(cls, data: dict) -> "CarryingData":
        coarse = build_track(data["coarse"])
        fine = build_track(data["fine"])
        paths = {}
        for k, ids in data["paths"].items():
            fb = int(k)
            paths[fb] = _orient_path(coarse, fine, fb, [int(x) for x in ids])
        return cls(coarse, fine, paths)


def identity_carrying(track: TrainTrack) -> CarryingData:
    return CarryingData(track, track, {b: ((b, True),) for b in track.branch_ids})


def _exit(track: TrainTrack, step: OStep) -> End:
    b = track.branch(step[0])
    return b.ends[1] if step[1] else b.ends[0]


def _entry(track: TrainTrack, step: OStep) -> End:
    b = track.branch(step[0])
    return b.ends[0] if step[1] else b.ends[1]


def _smooth_turn(a: End, b: End) -> bool:
    return a.switch == b.switch and (a.side == "large") != (b.side == "large")


def is_smooth_route(track: TrainTrack, path: Sequence[OStep]) -> bool:
    for s1, s2 in zip(path, path[1:]):
        if track.branch(s1[0]).closed or track.branch(s2[0]).closed:
            return False
        if not _smooth_turn(_exit(track, s1), _entry(track, s2)):
            return False
    return True


def _orient_path(coarse: TrainTrack, fine: TrainTrack, fb: int, ids: list[int]) -> tuple[OStep, ...]:
    """Recover traversal directions for a serialized path (ids only)."""
    unknown = [b for b in ids if b not in coarse.index]
    if unknown:
        raise InvalidResult(f"path of fine branch {fb} uses unknown branches {unknown}")
    if not ids:
        return ()
    if len(ids) == 1:
        return ((ids[0], True),)
    found = []

    def extend(prefix):
        if len(prefix) == len(ids):
            found.append(tuple(prefix))
            return
        for d in (True, False):
            step = (ids[len(prefix)], d)
            if not prefix or is_smooth_route(coarse, [prefix[-1], step]):
                extend(prefix + [step])
                if found:
                    return

    extend([])
    if not found:
        raise InvalidResult(f"path of fine branch {fb} is not a smooth route: {ids}")
    return found[0]


def _reverse(path: Sequence[OStep]) -> tuple[OStep, ...]:
    return tuple((b, not d) for b, d in reversed(path))


def compose(first: CarryingData, second: CarryingData) -> CarryingData:
    """Carrying of ``second.fine`` by ``first.coarse`` (``first.fine == second.coarse``)."""
    if first.fine.fingerprint != second.coarse.fingerprint:
        raise InvalidResult("carryings do not compose: intermediate tracks differ")
    paths = {}
    for fb, steps in second.paths.items():
        out: list[OStep] = []
        for b, d in steps:
            sub = first.paths[b]
            out.extend(sub if d else _reverse(sub))
        paths[fb] = tuple(out)
    return CarryingData(first.coarse, second.fine, paths)


def check_carrying(cd: CarryingData) -> list[str]:
    """Problems found with a carrying; an empty list means it re-validates.

    Paths must be smooth routes in the coarse track, and pulling back weight
    systems must send the fine switch kernel into the coarse one.
    """
    problems = []
    if set(cd.paths) != set(cd.fine.branch_ids):
        problems.append("paths do not cover exactly the fine branches")
        return problems
    for fb, path in cd.paths.items():
        if not is_smooth_route(cd.coarse, path):
            problems.append(f"path of {fb} is not a smooth route")
        if cd.fine.branch(fb).closed and path:
            if not is_smooth_route(cd.coarse, list(path) + [path[0]]):
                problems.append(f"path of closed branch {fb} does not close up smoothly")
    inc = cd.incidence()
    smat = switch_matrix(cd.coarse)
    for v in kernel_basis(switch_matrix(cd.fine)):
        if any(x != 0 for x in smat.apply(inc.apply(v))):
            problems.append("pulled-back weights violate coarse switch conditions")
            break
    return problems


def push_tangential_values(cd: CarryingData, values: Sequence) -> tuple[Fraction, ...]:
    """Linear part of :func:`push_tangential`, without validation."""
    idx = cd.coarse.index
    return tuple(sum((values[idx[b]] for b, _ in cd.paths[fb]), Fraction(0)) for fb in cd.fine.branch_ids)


def push_tangential(cd: CarryingData, w: TangentialMeasure, check: bool = True) -> TangentialMeasure:
    """``w'(b') = w(b_1) + ... + w(b_k)`` over the path of each fine branch."""
    if w.track.fingerprint != cd.coarse.fingerprint:
        from .errors import TrackMismatch

        raise TrackMismatch("measure does not live on the coarse track")
    return TangentialMeasure(cd.fine, push_tangential_values(cd, w.values), check=check)


def push_weights_values(cd: CarryingData, values: Sequence) -> tuple[Fraction, ...]:
    return cd.incidence().apply(values)


def push_weights(cd: CarryingData, v: WeightSystem, check: bool = True) -> WeightSystem:
    """Carried weights: each coarse branch collects the fine weights whose paths run over it."""
    if v.track.fingerprint != cd.fine.fingerprint:
        from .errors import TrackMismatch

        raise TrackMismatch("weights do not live on the fine track")
    return WeightSystem(cd.coarse, push_weights_values(cd, v.values), check=check)


def lift_weights(cd: CarryingData, values: Sequence) -> tuple[Fraction, ...] | None:
    """A weight system on the fine track pushing forward to ``values``, if one exists.

    Unique for splits and shifts; None when the fine track cannot carry them
    (for instance, a split in the wrong direction).
    """
    inc = cd.incidence()
    sw = switch_matrix(cd.fine)
    system = inc.vstack(sw)
    rhs = list(values) + [0] * sw.rows
    x = solve(system, rhs)
    if x is None or any(t < 0 for t in x):
        return None
    return x


# ---------------------------------------------------------------------------
# rebuilding tracks and regions


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb, key=repr)] = min(ra, rb, key=repr)


def _derive_kind(euler: int, circuits: Sequence[int], cusps: Sequence[int]) -> str:
    if euler == 1 and len(circuits) == 1:
        return "polygon"
    if euler == 0 and len(circuits) == 2 and any(cusps[c] == 0 for c in circuits):
        return "annulus"
    return "other"


def _carry_regions(
    old: TrainTrack,
    new: TrainTrack,
    side_map: dict[tuple[int, str], tuple[int, str]],
    extra_unions: Iterable[tuple[tuple[int, str], tuple[int, str]]] = (),
    euler_delta: Iterable[tuple[tuple[int, str], int]] = (),
) -> TrainTrack:
    """Attach region declarations to ``new`` (a track without regions).

    ``side_map`` sends surviving old branch sides to new ones.  Old sides in
    ``extra_unions`` end up in the same new region; ``euler_delta`` adds a
    correction to the region containing the given old side.
    """
    old_trace = trace_regions(old)
    circ_region = {}
    for i, r in enumerate(old.regions):
        for c in r.circuits:
            circ_region[c] = i
    step_region = {s: circ_region[i] for i, c in enumerate(old_trace.circuits) for s in c}

    new_trace = trace_regions(new)
    new_step_circ = new_trace.circuit_of()
    uf = _UnionFind()
    for r in range(len(old.regions)):
        uf.find(("old", r))
    for c in range(len(new_trace.circuits)):
        uf.find(("new", c))
    for o, n in side_map.items():
        uf.union(("old", step_region[o]), ("new", new_step_circ[n]))
    for a, b in extra_unions:
        uf.union(("old", step_region[a]), ("old", step_region[b]))

    groups: dict = defaultdict(lambda: {"old": [], "new": [], "delta": 0})
    for r in range(len(old.regions)):
        groups[uf.find(("old", r))]["old"].append(r)
    for c in range(len(new_trace.circuits)):
        groups[uf.find(("new", c))]["new"].append(c)
    for side, d in euler_delta:
        groups[uf.find(("old", step_region[side]))]["delta"] += d

    cusps = new_trace.cusps_per_circuit
    regions = []
    for g in groups.values():
        if not g["old"] or not g["new"]:
            raise RegionMismatch("a move left a complementary region without boundary bookkeeping")
        circuits = tuple(sorted(g["new"]))
        euler = sum(old.regions[r].euler for r in g["old"]) + g["delta"]
        ncusps = sum(cusps[c] for c in circuits)
        if len(g["old"]) == 1 and g["delta"] == 0:
            kind = old.regions[g["old"][0]].kind
        else:
            kind = _derive_kind(euler, circuits, cusps)
        regions.append(Region(circuits, ncusps, euler, kind))
    regions.sort(key=lambda r: r.circuits)
    return build_track(TrainTrack(new.genus, new.switches, new.branches, tuple(regions)))


def _identity_sides(old: TrainTrack, new: TrainTrack, keep: Iterable[int]):
    return {(b, s): (b, s) for b in keep for s in ("L", "R")}


def _rewire(track: TrainTrack, slots: dict[tuple[int, str], EndRef], switches, drop=()) -> TrainTrack:
    """Skeleton track from a slot assignment ``(switch, slot) -> (branch id, end index)``."""
    ends: dict[int, list] = {b.id: list(b.ends) for b in track.branches if b.id not in drop}
    for (sw, slot), (bid, k) in slots.items():
        ends[bid][k] = End(sw, slot)
    branches = tuple(
        Branch(bid, track.branch(bid).closed, tuple(ends[bid])) for bid in sorted(ends)
    )
    return TrainTrack(track.genus, tuple(sorted(switches)), branches)


def _merge_chains(pieces: dict, joins: dict[EndRef, EndRef]):
    """Join branch pieces end to end.

    ``pieces[key] = (ends, path, closed)`` where ``ends`` lists the real
    endpoints (``End`` or None when joined), ``path`` is the piece's own route
    in the old track and int keys are old branch ids (pseudo pieces use other
    keys).  Returns ``(branches, paths, side_map)`` for the merged track.
    """
    done = set()
    branches, paths, side_map = [], {}, {}

    def walk(key, k):
        """Walk from end k of key until reaching a real end; returns pieces traversed."""
        seq = []
        while True:
            seq.append((key, k == 0))
            out = (key, 1 - k)
            if out not in joins:
                return seq, out, False
            key, k = joins[out]
            if (key, k == 0) == seq[0] or (key, k == 0) in seq:
                return seq, None, True

    def emit(seq, closed, first_end=None, last_end=None):
        ids = [k for k, _ in seq if isinstance(k, int)]
        nid = min(ids)
        forward = next(d for k, d in seq if k == nid)
        if not forward:
            seq = [(k, not d) for k, d in reversed(seq)]
            first_end, last_end = last_end, first_end
        route: list[OStep] = []
        for key, d in seq:
            p = pieces[key][1]
            route.extend(p if d else _reverse(p))
            if isinstance(key, int):
                side_map[(key, "L")] = (nid, "L" if d else "R")
                side_map[(key, "R")] = (nid, "R" if d else "L")
        ends = () if closed else (first_end, last_end)
        branches.append(Branch(nid, closed, ends))
        paths[nid] = tuple(route)
        for key, _ in seq:
            done.add(key)

    order = sorted(pieces, key=repr)
    # open chains first; pieces joined at both ends may sit inside one
    for key in order:
        if key in done:
            continue
        ends, _, closed = pieces[key]
        if closed:
            emit([(key, True)], True)
            continue
        for k in (0, 1):
            if (key, k) not in joins:
                seq, out, _ = walk(key, k)
                end_key, end_k = out
                emit(seq, False, ends[k], pieces[end_key][0][end_k])
                break
    for key in order:
        if key not in done:
            seq, _, _ = walk(key, 0)
            emit(seq, True)
    branches.sort(key=lambda b: b.id)
    return tuple(branches), paths, side_map


# ---------------------------------------------------------------------------
# sub-tracks


def subtrack_with_carrying(track: TrainTrack, subset: Iterable[int]) -> CarryingData:
    """Restrict to ``subset`` and smooth switches left with one branch per side."""
    keep = set(subset)
    unknown = keep - set(track.branch_ids)
    if unknown:
        raise ValueError(f"unknown branches {sorted(unknown)}")
    if not keep:
        raise DeadEnd("empty branch subset")
    if keep == set(track.branch_ids):
        return identity_carrying(track)

    kept_switches, smoothed, removed_switches = [], [], []
    for s in track.switches:
        occ = {slot: track.occupant(s, slot) for slot in SLOTS}
        has_large = occ["large"] in keep
        smalls = [slot for slot in ("small_left", "small_right") if occ[slot] in keep]
        if not has_large and not smalls:
            removed_switches.append(s)
        elif has_large and len(smalls) == 2:
            kept_switches.append(s)
        elif has_large and len(smalls) == 1:
            smoothed.append((s, smalls[0]))
        else:
            raise DeadEnd(f"switch {s} keeps branches on one side only")

    smooth_at = {s for s, _ in smoothed}
    pieces = {}
    for bid in sorted(keep):
        b = track.branch(bid)
        ends = [None if e.switch in smooth_at else e for e in b.ends]
        pieces[bid] = (ends, ((bid, True),), b.closed)
    joins: dict[EndRef, EndRef] = {}
    for s, small in smoothed:
        a = track.slot_table[(s, "large")]
        c = track.slot_table[(s, small)]
        joins[a] = c
        joins[c] = a
    branches, paths, side_map = _merge_chains(pieces, joins)
    skeleton = TrainTrack(track.genus, tuple(kept_switches), branches)

    removed = [b for b in track.branch_ids if b not in keep]
    unions = [((b, "L"), (b, "R")) for b in removed]
    delta = [((b, "L"), -1) for b in removed if not track.branch(b).closed]
    for s in removed_switches:
        delta.append(((track.occupant(s, "large"), "L"), 1))
    fine = _carry_regions(track, skeleton, side_map, unions, delta)
    return CarryingData(track, fine, paths)


def subtrack(track: TrainTrack, subset: Iterable[int]) -> TrainTrack:
    return subtrack_with_carrying(track, subset).fine


# ---------------------------------------------------------------------------
# shifts


def shift_with_carrying(track: TrainTrack, switch: int) -> CarryingData:
    """Slide ``switch`` back along its large branch past the switch behind it.

    Needs the large branch ``m`` of ``switch`` to be small at its other end.
    The three branches fanning out of the pair are regrouped (a rotation of
    the binary splitting), so applying the shift twice restores the track.
    """
    if switch not in track.switches:
        raise NotShiftable(f"unknown switch {switch}")
    t = switch
    m, kt = track.slot_table[(t, "large")]
    ks = 1 - kt
    far = track.branch(m).ends[ks]
    s, slot_s = far.switch, far.side
    if s == t or slot_s == "large":
        raise NotShiftable(f"switch {t} is not followed by a diverging switch along branch {m}")
    x = track.slot_table[(s, "large")]
    other = "small_left" if slot_s == "small_right" else "small_right"
    a = track.slot_table[(s, other)]
    b1 = track.slot_table[(t, "small_left")]
    b2 = track.slot_table[(t, "small_right")]
    m_at_s = (m, ks)
    m_at_t = (m, kt)
    if slot_s == "small_right":
        # strands top to bottom: a, b1, b2; regroup (a)(b1 b2) -> (a b1)(b2)
        new = {(s, "large"): x, (s, "small_left"): m_at_s, (s, "small_right"): b2,
               (t, "large"): m_at_t, (t, "small_left"): a, (t, "small_right"): b1}
    else:
        # strands top to bottom: b1, b2, a; regroup (b1 b2)(a) -> (b1)(b2 a)
        new = {(s, "large"): x, (s, "small_left"): b1, (s, "small_right"): m_at_s,
               (t, "large"): m_at_t, (t, "small_left"): b2, (t, "small_right"): a}
    skeleton = _rewire(track, new, track.switches)

    m_from_s = (m, ks == 0)
    paths: dict[int, tuple[OStep, ...]] = {b: ((b, True),) for b in track.branch_ids}
    paths[m] = ()
    # b1 and b2 now branch off before m; they absorb m in the coarse track
    for bid, k in (b1, b2):
        if k == 0:
            paths[bid] = (m_from_s,) + paths[bid]
        else:
            paths[bid] = paths[bid] + (_reverse([m_from_s])[0],)
    keep = [b for b in track.branch_ids if b != m]
    fine = _carry_regions(track, skeleton, _identity_sides(track, skeleton, keep))
    return CarryingData(track, fine, paths)


def shift(track: TrainTrack, switch: int) -> TrainTrack:
    return shift_with_carrying(track, switch).fine


def shiftable_switches(track: TrainTrack) -> list[int]:
    out = []
    for t in track.switches:
        m, kt = track.slot_table[(t, "large")]
        far = track.branch(m).ends[1 - kt]
        if far.switch != t and far.side != "large":
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# splits


def large_branches(track: TrainTrack) -> list[int]:
    return [
        b.id
        for b in track.branches
        if not b.closed and all(e.side == "large" for e in b.ends)
    ]


def split_with_carrying(track: TrainTrack, branch: int, direction: str) -> CarryingData:
    """Split a large branch.

    ``direction`` is the side (``left``/``right``, looking along the branch
    from its end 0) on which the cusp at end 0 passes the cusp at end 1;
    ``central`` makes the cusps collide, deleting the branch and both of its
    switches.
    """
    if direction not in ("left", "right", "central"):
        raise ValueError(f"unknown split direction {direction!r}")
    b = track.branch(branch)
    if b.closed or any(e.side != "large" for e in b.ends):
        raise NotLarge(f"branch {branch} is not large at both ends")
    s, t = b.ends[0].switch, b.ends[1].switch
    # upper/lower as seen walking along the branch from s to t
    p = track.slot_table[(s, "small_right")]  # upper left
    q = track.slot_table[(s, "small_left")]  # lower left
    r = track.slot_table[(t, "small_left")]  # upper right
    u = track.slot_table[(t, "small_right")]  # lower right
    e_fwd: OStep = (branch, True)

    def through(ref, at_start: bool):
        """Path of a branch whose end ``ref`` now reaches across the split branch."""
        bid, k = ref
        step = e_fwd if at_start else (branch, False)
        if k == 0:
            return (step,) + paths[bid]
        return paths[bid] + (_reverse([step])[0],)

    paths: dict[int, tuple[OStep, ...]] = {x: ((x, True),) for x in track.branch_ids if x != branch}

    if direction == "central":
        pieces = {}
        for x in track.branch_ids:
            if x == branch:
                continue
            bb = track.branch(x)
            ends = [None if e.switch in (s, t) else e for e in bb.ends]
            pieces[x] = (ends, ((x, True),), bb.closed)
        pieces["top"] = ([None, None], (e_fwd,), False)
        pieces["bottom"] = ([None, None], (e_fwd,), False)
        joins = {}
        for a, c in ((p, ("top", 0)), (("top", 1), r), (q, ("bottom", 0)), (("bottom", 1), u)):
            joins[a] = c
            joins[c] = a
        branches, mpaths, side_map = _merge_chains(pieces, joins)
        switches = tuple(x for x in track.switches if x not in (s, t))
        skeleton = TrainTrack(track.genus, switches, branches)
        # the regions holding the two cusps become one
        cusp_s = _arriving_side(q)
        cusp_t = _arriving_side(r)
        fine = _carry_regions(
            track,
            skeleton,
            side_map,
            extra_unions=[(cusp_s, cusp_t)],
            euler_delta=[(cusp_s, -1)],
        )
        return CarryingData(track, fine, mpaths)

    d0, d1 = (branch, 0), (branch, 1)
    if direction == "right":
        # diagonal from the upper-left strand down to the lower-right one
        new = {(s, "large"): p, (s, "small_left"): r, (s, "small_right"): d0,
               (t, "large"): u, (t, "small_left"): q, (t, "small_right"): d1}
        moved = [(r, True), (q, False)]
    else:
        # diagonal from the lower-left strand up to the upper-right one
        new = {(s, "large"): q, (s, "small_left"): d0, (s, "small_right"): u,
               (t, "large"): r, (t, "small_left"): d1, (t, "small_right"): p}
        moved = [(u, True), (p, False)]
    skeleton = _rewire(track, new, track.switches)
    # applied one at a time, so a branch moved at both ends picks up both detours
    for ref, at_start in moved:
        paths[ref[0]] = through(ref, at_start)
    paths[branch] = (e_fwd,)
    keep = [x for x in track.branch_ids if x != branch]
    fine = _carry_regions(track, skeleton, _identity_sides(track, skeleton, keep))
    return CarryingData(track, fine, paths)


def _arriving_side(ref: EndRef) -> tuple[int, str]:
    """Boundary step that arrives at the switch end ``ref``."""
    bid, k = ref
    return (bid, "L" if k == 1 else "R")


def split(track: TrainTrack, branch: int, direction: str) -> TrainTrack:
    return split_with_carrying(track, branch, direction).fine


def split_direction(track: TrainTrack, branch: int, weights: Sequence) -> str:
    """Split direction that keeps carrying ``weights`` (``central`` on a tie)."""
    b = track.branch(branch)
    s, t = b.ends[0].switch, b.ends[1].switch
    idx = track.index
    upper_left = weights[idx[track.occupant(s, "small_right")]]
    upper_right = weights[idx[track.occupant(t, "small_left")]]
    if upper_left > upper_right:
        return "right"
    if upper_left < upper_right:
        return "left"
    return "central"


# ---------------------------------------------------------------------------
# move sequences


def apply_move(track: TrainTrack, move) -> CarryingData:
    """Apply one move given as a dict (``{"shift": s}`` or ``{"split": b, "dir": d}``)
    or a tuple (``("shift", s)`` / ``("split", b, d)``)."""
    if isinstance(move, dict):
        if "shift" in move:
            return shift_with_carrying(track, int(move["shift"]))
        if "split" in move:
            return split_with_carrying(track, int(move["split"]), str(move.get("dir", "left")))
        raise ValueError(f"unknown move {move!r}")
    kind, *args = move
    if kind == "shift":
        return shift_with_carrying(track, *args)
    if kind == "split":
        return split_with_carrying(track, *args)
    raise ValueError(f"unknown move {move!r}")


def carrying_from_moves(track: TrainTrack, moves: Iterable) -> CarryingData:
    """Composite carrying from ``track`` to the result of the move sequence."""
    cd = identity_carrying(track)
    for mv in moves:
        cd = compose(cd, apply_move(cd.fine, mv))
    return cd


def generic_weights(track: TrainTrack, rng) -> tuple[Fraction, ...]:
    """A positive combination of the extreme rays with random rational coefficients."""
    from .exact import extreme_rays

    rays = extreme_rays(switch_matrix(track))
    if not rays:
        raise InvalidResult("track carries no weight system")
    out = [Fraction(0)] * track.num_branches
    for r in rays:
        c = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3))
        out = [a + c * x for a, x in zip(out, r)]
    return tuple(out)


def random_carried_moves(track: TrainTrack, rng, length: int, weights: Sequence | None = None):
    """Random shifts and splits that keep carrying a positive weight system.

    Each split goes in the direction dictated by the current weights; a tie
    (which would force a central split) is skipped.  Yields
    ``(move, carrying, weights)`` after every move, with weights on the new track.
    """
    current = track
    w = tuple(weights) if weights is not None else generic_weights(track, rng)
    done = 0
    attempts = 0
    while done < length:
        attempts += 1
        if attempts > 50 * length + 100:
            raise InvalidResult("no admissible move found")
        options = [("shift", s) for s in shiftable_switches(current)]
        options += [("split", b) for b in large_branches(current)]
        if not options:
            raise InvalidResult("track admits no shift or split")
        kind, x = rng.choice(options)
        if kind == "shift":
            move = ("shift", x)
        else:
            d = split_direction(current, x, w)
            if d == "central":
                continue
            move = ("split", x, d)
        cd = apply_move(current, move)
        lifted = lift_weights(cd, w)
        if lifted is None or any(t <= 0 for t in lifted):
            raise InvalidResult(f"move {move} does not carry the current weights")
        current, w = cd.fine, lifted
        done += 1
        yield move, cd, w
