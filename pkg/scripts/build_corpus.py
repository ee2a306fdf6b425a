"""Regenerate the shipped corpus under src/traintrack_faces/corpus/.

Every track is built from an explicit slot assignment or a seeded search, so
rerunning this script reproduces the files byte for byte.  Ranks are checked
against sympy before anything is written.

    python3 scripts/build_corpus.py
"""

from __future__ import annotations

import json
import random
import sys
from itertools import product
from pathlib import Path

import sympy

from traintrack_faces.corpus import compute_expected
from traintrack_faces.faces import LaminationPresentation, face_poset, presentation_from_json
from traintrack_faces.measures import (
    is_birecurrent,
    is_recurrent,
    switch_matrix,
    weight_space_dim,
)
from traintrack_faces.moves import large_branches, shiftable_switches, split, split_direction, subtrack
from traintrack_faces.track import (
    SLOTS,
    Branch,
    End,
    Region,
    TrainTrack,
    build_track,
    components,
    dumps_track,
    trace_regions,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "traintrack_faces" / "corpus"


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def closed_curves(genus: int, n: int, regions: list[tuple[list[int], int]]) -> TrainTrack:
    """``n`` closed branches; ``regions`` lists (circuit indices, euler).

    Closed branch ``b`` has circuit ``2(b-1)`` on its left and ``2(b-1)+1`` on its right.
    """
    branches = tuple(Branch(b, True, ()) for b in range(1, n + 1))
    regs = tuple(
        Region(tuple(sorted(c)), 0, chi, _kind(chi, len(c), True)) for c, chi in regions
    )
    return build_track(TrainTrack(genus, (), branches, regs))


def _kind(chi: int, ncirc: int, smooth: bool) -> str:
    if chi == 1 and ncirc == 1:
        return "polygon"
    if chi == 0 and ncirc == 2 and smooth:
        return "annulus"
    return "other"


def from_slots(genus: int, switches, ends: dict[int, tuple], regions=None) -> TrainTrack:
    """Track from ``{branch: ((switch, slot), (switch, slot))}``.

    Without ``regions`` all traced circuits form a single region whose Euler
    characteristic is forced by the Euler sum.
    """
    branches = tuple(Branch(b, False, tuple(End(*x) for x in e)) for b, e in sorted(ends.items()))
    bare = TrainTrack(genus, tuple(switches), branches)
    trace = trace_regions(bare)
    if regions is None:
        # Euler sum: chi - cusps / 2 summed over regions equals 2 - 2g
        chi = (2 * (2 - 2 * genus) + len(switches)) // 2
        circuits = tuple(range(len(trace.circuits)))
        regions = [Region(circuits, len(switches), chi, _kind(chi, len(circuits), False))]
    return build_track(TrainTrack(genus, tuple(switches), branches, tuple(regions)))


def polygon_regions(bare: TrainTrack) -> TrainTrack:
    trace = trace_regions(bare)
    regs = tuple(Region((i,), c, 1, "polygon") for i, c in enumerate(trace.cusps_per_circuit))
    return build_track(TrainTrack(bare.genus, bare.switches, bare.branches, regs))


def sympy_rank(track: TrainTrack) -> int:
    m = switch_matrix(track)
    if m.rows == 0:
        return 0
    return sympy.Matrix([[int(x) for x in row] for row in m.entries]).rank()


# ---------------------------------------------------------------------------
# maximal tracks


def all_ones_balanced(track: TrainTrack) -> bool:
    trace = trace_regions(track)
    for i in range(len(trace.circuits)):
        lens = [len(s) for s in trace.sides(i)]
        if any(2 * x > sum(lens) for x in lens):
            return False
    return True


def search_maximal_g2(seed: int) -> TrainTrack:
    """Random slot matchings on 12 switches until one bounds four trigons and is maximal."""
    rng = random.Random(seed)
    nsw = 12
    while True:
        slots = [(s, side) for s in range(1, nsw + 1) for side in SLOTS]
        rng.shuffle(slots)
        branches = tuple(
            Branch(i // 2 + 1, False, (End(*slots[i]), End(*slots[i + 1]))) for i in range(0, 3 * nsw, 2)
        )
        bare = TrainTrack(2, tuple(range(1, nsw + 1)), branches)
        if any(b.ends[0].switch == b.ends[1].switch for b in branches):
            continue
        trace = trace_regions(bare)
        if len(trace.circuits) != 4 or any(c != 3 for c in trace.cusps_per_circuit):
            continue
        if len(components(bare)) != 1:
            continue
        track = polygon_regions(bare)
        if sympy_rank(track) != 12 or not all_ones_balanced(track):
            continue
        if not is_birecurrent(track) or not large_branches(track) or not shiftable_switches(track):
            continue
        return track


def double_cover(track: TrainTrack) -> TrainTrack:
    """Connected double cover in which every polygon lifts to two polygons.

    A Z/2 label on each branch defines the cover; it must be even around every
    boundary circuit (so regions lift) and not a coboundary (so the cover is
    connected).  Labels are tried in increasing binary order until the lifted
    switch matrix has full rank.
    """
    ids = track.branch_ids
    n, v = len(ids), track.num_switches
    trace = trace_regions(track)
    circuit_masks = []
    for c in trace.circuits:
        m = 0
        for b, _ in c:
            m ^= 1 << track.index[b]
        circuit_masks.append(m)
    sw_index = {s: i for i, s in enumerate(track.switches)}
    coboundaries = set()
    for smask in range(1 << v):
        m = 0
        for b in track.branches:
            a, c = (smask >> sw_index[e.switch] & 1 for e in b.ends)
            if a != c:
                m |= 1 << track.index[b.id]
        coboundaries.add(m)
    for label in range(1, 1 << n):
        if any(bin(label & cm).count("1") % 2 for cm in circuit_masks):
            continue
        if label in coboundaries:
            continue
        branches = []
        for b in track.branches:
            flip = label >> track.index[b.id] & 1
            for sheet in (0, 1):
                e0, e1 = b.ends
                branches.append(
                    Branch(
                        b.id + n * sheet,
                        False,
                        (End(e0.switch + v * sheet, e0.side), End(e1.switch + v * (sheet ^ flip), e1.side)),
                    )
                )
        switches = tuple(s + v * sheet for sheet in (0, 1) for s in track.switches)
        bare = TrainTrack(track.genus * 2 - 1, tuple(sorted(switches)), tuple(sorted(branches, key=lambda b: b.id)))
        lifted = polygon_regions(bare)
        if sympy_rank(lifted) == 2 * v and is_birecurrent(lifted):
            return lifted
    raise RuntimeError("no suitable double cover")


# ---------------------------------------------------------------------------
# small examples


def mixed_g2() -> tuple[TrainTrack, dict]:
    """A closed curve made of branches c1, c2 with a leaf ``a`` spiralling onto it at both ends."""
    c1, c2, a = 1, 2, 3
    for sl1, sl2 in product(("small_left", "small_right"), repeat=2):
        other1 = "small_right" if sl1 == "small_left" else "small_left"
        other2 = "small_right" if sl2 == "small_left" else "small_left"
        ends = {
            c1: ((1, sl1), (2, sl2)),
            c2: ((1, "large"), (2, "large")),
            a: ((1, other1), (2, other2)),
        }
        try:
            track = from_slots(2, (1, 2), ends)
        except ValueError:
            continue
        if len(trace_regions(track).circuits) == 1 and is_birecurrent(track):
            comps = {"components": [{"branches": [c1, c2], "kind": "minimal"}, {"branches": [a], "kind": "isolated"}]}
            return track, comps
    raise RuntimeError("no mixed configuration found")


def t4() -> TrainTrack:
    a, b, c = 1, 2, 3
    ends = {
        a: ((1, "small_left"), (2, "large")),
        b: ((1, "small_right"), (2, "small_left")),
        c: ((2, "small_right"), (1, "large")),
    }
    return from_slots(2, (1, 2), ends)


def pants_g3() -> TrainTrack:
    # pants are the vertices of K4, curves its edges; left sides in the lower-numbered pant
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    pants: dict[int, list[int]] = {i: [] for i in range(4)}
    for k, (i, j) in enumerate(edges):
        pants[i].append(2 * k)
        pants[j].append(2 * k + 1)
    return closed_curves(3, 6, [(pants[i], -1) for i in range(4)])


# ---------------------------------------------------------------------------


PROVENANCE = {
    "V": "switch count of the file",
    "E": "branch count of the file",
    "dim_M": "kernel dimension on the maximal support; rank cross-checked with sympy",
    "dim_Mstar": "branches minus rank of the move matrix; rank cross-checked with sympy",
    "recurrent": "phase-one simplex with a strictly positive witness or a Farkas certificate",
    "transversely_recurrent": "phase-one simplex on the region inequalities",
    "C": "dim_Mstar of the bi-recurrent adapted track",
    "face_dim": "6g - 6 - C",
}


def main() -> int:
    OUT.mkdir(parents=True, exist_ok=True)
    tracks: dict[str, TrainTrack] = {}
    pres: dict[str, dict] = {}
    tags: dict[str, list[str]] = {}
    fixtures: dict[str, dict] = {}

    tracks["circle-g2"] = closed_curves(2, 1, [([0, 1], -2)])
    tracks["sep-g2"] = closed_curves(2, 1, [([0], -1), ([1], -1)])
    tracks["twocurve-g2"] = closed_curves(2, 2, [([0, 1, 2, 3], -2)])
    tracks["pants-g2"] = closed_curves(2, 3, [([0, 2, 4], -1), ([1, 3, 5], -1)])
    tracks["circle-g3"] = closed_curves(3, 1, [([0, 1], -4)])
    tracks["sep-g3"] = closed_curves(3, 1, [([0], -1), ([1], -3)])
    tracks["pants-g3"] = pants_g3()
    for name in ("circle-g2", "sep-g2", "twocurve-g2", "pants-g2", "circle-g3", "sep-g3", "pants-g3"):
        tags[name] = ["multicurve"]

    mixed, mixed_components = mixed_g2()
    tracks["mixed-g2"] = mixed
    pres["mixed-g2"] = mixed_components
    tags["mixed-g2"] = ["mixed"]

    tracks["T4"] = t4()
    tags["T4"] = ["non-recurrent"]

    maxg2 = search_maximal_g2(seed=1)
    tracks["max-g2"] = maxg2
    tags["max-g2"] = ["maximal"]
    poset = face_poset(maxg2)
    circuit = next(n.branches for n in poset.nodes if n.closed_curve)
    shift_switch = shiftable_switches(maxg2)[0]
    split_branch = large_branches(maxg2)[0]
    noncurve = next(
        n.branches
        for n in poset.nodes
        if n.C == 3 and n.birecurrent and subtrack(maxg2, n.branches).num_switches > 0
    )
    fixtures["max-g2"] = {
        "closed_circuit": list(circuit),
        "shift_switch": shift_switch,
        "split_branch": split_branch,
        "noncurve_subtrack": list(noncurve),
    }

    tracks["max-g3"] = double_cover(maxg2)
    tags["max-g3"] = ["maximal"]

    tracks["max-g2-split"] = split(maxg2, split_branch, "left")
    tags["max-g2-split"] = ["derived"]
    tracks["max-g2-sub"] = subtrack(maxg2, noncurve)
    tags["max-g2-sub"] = ["derived"]

    entries = []
    for name in sorted(tracks):
        track = tracks[name]
        tfile = f"{name}.json"
        (OUT / tfile).write_text(dumps_track(track))
        pfile = None
        p = None
        if name in pres:
            pfile = f"{name}.pres.json"
            pdata = dict(pres[name], track=tfile)
            (OUT / pfile).write_text(dumps(pdata))
            p = presentation_from_json(pdata, base=OUT)
        expected = compute_expected(track, p)
        r = sympy_rank(track)
        if track.num_branches - r != expected["dim_Mstar"]:
            raise AssertionError(f"{name}: rank oracle disagrees")
        if expected["recurrent"] and expected["dim_M"] != track.num_branches - r:
            raise AssertionError(f"{name}: weight dimension disagrees with the rank oracle")
        entry = {
            "name": name,
            "track": tfile,
            "expected": expected,
            "provenance": PROVENANCE,
            "tags": tags.get(name, []),
        }
        if pfile:
            entry["presentation"] = pfile
        if name in fixtures:
            entry["fixtures"] = fixtures[name]
        entries.append(entry)
        print(name, expected, file=sys.stderr)
    (OUT / "manifest.json").write_text(dumps({"entries": entries}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
