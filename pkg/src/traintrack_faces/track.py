"""Combinatorial trivalent train tracks on closed oriented surfaces.

A switch has three slots: ``large`` on one side, ``small_left`` and
``small_right`` on the other.  Facing from the large side towards the small
side, ``small_left`` is on the left; this is the only ribbon data stored, and
it determines the boundary of a regular neighbourhood of the track.

Each branch is oriented from ``ends[0]`` to ``ends[1]``; its two sides are
``"L"`` and ``"R"`` relative to that orientation.  Closed branches have no
ends.  Complementary regions are declared (Euler characteristic, kind and the
traced boundary circuits they consist of) and validated against the trace.
"""

from __future__ import annotations

import hashlib
import json
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import DanglingSlot, NonTrivalent, RegionMismatch

SLOTS = ("large", "small_left", "small_right")
SMALL = ("small_left", "small_right")
REGION_KINDS = ("polygon", "annulus", "other")

# walking a boundary circuit with the region on the left, arriving at a switch
# through one slot leaves through the next one; the small_left -> small_right
# turn goes around the cusp
_TURN = {"large": "small_left", "small_left": "small_right", "small_right": "large"}

Step = tuple[int, str]


@dataclass(frozen=True)
class Surface:
    genus: int

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError(f"genus must be at least 2, got {self.genus}")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus

    @property
    def teich_dim(self) -> int:
        return 6 * self.genus - 6


@dataclass(frozen=True, order=True)
class End:
    switch: int
    side: str

    def __post_init__(self):
        if self.side not in SLOTS:
            raise DanglingSlot(f"unknown slot {self.side!r}")


@dataclass(frozen=True)
class Branch:
    id: int
    closed: bool = False
    ends: tuple[End, ...] = ()

    def __post_init__(self):
        if self.closed and self.ends:
            raise DanglingSlot(f"closed branch {self.id} has endpoints")
        if not self.closed and len(self.ends) != 2:
            raise DanglingSlot(f"branch {self.id} has {len(self.ends)} endpoints, expected 2")


@dataclass(frozen=True)
class Region:
    circuits: tuple[int, ...]
    cusps: int
    euler: int
    kind: str = "other"

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")


@dataclass(frozen=True)
class RegionTrace:
    """Boundary circuits of a ribbon neighbourhood of a track.

    ``cusp_after[c][i]`` is True when circuit ``c`` turns around a cusp right
    after its ``i``-th step.
    """

    circuits: tuple[tuple[Step, ...], ...]
    cusp_after: tuple[tuple[bool, ...], ...]

    @property
    def cusps_per_circuit(self) -> tuple[int, ...]:
        return tuple(sum(c) for c in self.cusp_after)

    def circuit_of(self) -> dict[Step, int]:
        return {step: i for i, c in enumerate(self.circuits) for step in c}

    def sides(self, index: int) -> list[list[int]]:
        """Split a circuit into maximal smooth arcs between consecutive cusps.

        A circuit without cusps is a single side.  Each side is the list of
        branch ids met along it, repeated branches included.
        """
        steps = self.circuits[index]
        marks = self.cusp_after[index]
        cut = [i for i, m in enumerate(marks) if m]
        if not cut:
            return [[b for b, _ in steps]]
        n = len(steps)
        out = []
        for a, b in zip(cut, cut[1:] + [cut[0] + n]):
            out.append([steps[(k) % n][0] for k in range(a + 1, b + 1)])
        return out


@dataclass(frozen=True)
class TrainTrack:
    genus: int
    switches: tuple[int, ...]
    branches: tuple[Branch, ...]
    regions: tuple[Region, ...] = ()

    @property
    def surface(self) -> Surface:
        return Surface(self.genus)

    @cached_property
    def branch_ids(self) -> tuple[int, ...]:
        return tuple(b.id for b in self.branches)

    @cached_property
    def index(self) -> dict[int, int]:
        """Column index of each branch id in every matrix and vector."""
        return {bid: i for i, bid in enumerate(self.branch_ids)}

    @cached_property
    def _by_id(self) -> dict[int, Branch]:
        return {b.id: b for b in self.branches}

    def branch(self, bid: int) -> Branch:
        return self._by_id[bid]

    @property
    def num_switches(self) -> int:
        return len(self.switches)

    @property
    def num_branches(self) -> int:
        return len(self.branches)

    @cached_property
    def slot_table(self) -> dict[tuple[int, str], tuple[int, int]]:
        """Map ``(switch, slot)`` to ``(branch id, end index)``; assumes valid slots."""
        table = {}
        for b in self.branches:
            for k, e in enumerate(b.ends):
                table[(e.switch, e.side)] = (b.id, k)
        return table

    def occupant(self, switch: int, side: str) -> int:
        return self.slot_table[(switch, side)][0]

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(dumps_track(self).encode()).hexdigest()[:16]

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "switches": [{"id": s} for s in self.switches],
            "branches": [
                {
                    "id": b.id,
                    "closed": b.closed,
                    "ends": [{"switch": e.switch, "side": e.side} for e in b.ends],
                }
                for b in self.branches
            ],
            "regions": [
                {"circuits": list(r.circuits), "cusps": r.cusps, "euler": r.euler, "kind": r.kind}
                for r in self.regions
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrainTrack":
        """Parse without validating slots or regions (see :func:`build_track`)."""
        genus = _int(data["genus"], "genus")
        switches = tuple(sorted(_int(s["id"], "switch id") for s in data["switches"]))
        if len(set(switches)) != len(switches):
            raise ValueError("duplicate switch ids")
        branches = []
        for b in data["branches"]:
            ends = tuple(End(_int(e["switch"], "switch"), str(e["side"])) for e in b.get("ends", []))
            branches.append(Branch(_int(b["id"], "branch id"), bool(b.get("closed", False)), ends))
        branches.sort(key=lambda b: b.id)
        if len({b.id for b in branches}) != len(branches):
            raise ValueError("duplicate branch ids")
        regions = tuple(
            Region(
                tuple(_int(c, "circuit index") for c in r["circuits"]),
                _int(r["cusps"], "cusps"),
                _int(r["euler"], "euler"),
                str(r.get("kind", "other")),
            )
            for r in data.get("regions", [])
        )
        return cls(genus, switches, tuple(branches), regions)


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValueError(f"{what} must be an integer, got {x!r}")
    return x


def dumps_track(track: TrainTrack) -> str:
    return json.dumps(track.to_dict(), indent=2, sort_keys=True) + "\n"


def loads_track(text: str, check: bool = True) -> TrainTrack:
    data = json.loads(text)
    return build_track(data) if check else TrainTrack.from_dict(data)


# ---------------------------------------------------------------------------
# slot validation and tracing


def check_slots(track: TrainTrack) -> None:
    """Raise unless every slot of every switch holds exactly one branch end."""
    known = set(track.switches)
    seen: dict[int, list[str]] = defaultdict(list)
    for b in track.branches:
        for e in b.ends:
            if e.switch not in known:
                raise DanglingSlot(f"branch {b.id} ends at unknown switch {e.switch}")
            seen[e.switch].append(e.side)
    for s in track.switches:
        sides = seen.get(s, [])
        if len(sides) > 3:
            raise NonTrivalent(f"switch {s} has {len(sides)} incident half-branches")
        for slot in SLOTS:
            n = sides.count(slot)
            if n != 1:
                state = "unfilled" if n == 0 else "filled more than once"
                raise DanglingSlot(f"slot {slot} of switch {s} is {state}")


def _next_step(track: TrainTrack, step: Step) -> tuple[Step, bool]:
    bid, side = step
    b = track.branch(bid)
    if b.closed:
        return step, False
    end = b.ends[1] if side == "L" else b.ends[0]
    out = _TURN[end.side]
    nb, k = track.slot_table[(end.switch, out)]
    return (nb, "L" if k == 0 else "R"), end.side == "small_left"


def trace_regions(track: TrainTrack) -> RegionTrace:
    """Trace the boundary circuits of a ribbon neighbourhood of ``track``.

    Each circuit is rotated to start at its smallest ``(branch id, side)``
    step and circuits are listed in order of those starting steps, so equal
    tracks always produce identical traces.
    """
    check_slots(track)
    visited: set[Step] = set()
    circuits, marks = [], []
    for bid in track.branch_ids:
        for side in ("L", "R"):
            start = (bid, side)
            if start in visited:
                continue
            steps, cusp = [], []
            step = start
            while True:
                visited.add(step)
                steps.append(step)
                step, c = _next_step(track, step)
                cusp.append(c)
                if step == start:
                    break
            circuits.append(tuple(steps))
            marks.append(tuple(cusp))
    return RegionTrace(tuple(circuits), tuple(marks))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


_SLOT_CHECKS = ("slots", "trivalence")
_TRACE_CHECKS = (
    "circuit_cover",
    "region_cusps",
    "total_cusps",
    "euler_sum",
    "polygon_regions",
    "annulus_regions",
)


def validate(track: TrainTrack, strict: bool = False) -> ValidationReport:
    """Check every track invariant and report instead of raising.

    With ``strict`` the report also rejects smooth disks (polygons without
    cusps) and annuli bounded by two smooth circuits.
    """
    checks = [Check("genus", track.genus >= 2, f"genus {track.genus}")]
    try:
        check_slots(track)
    except NonTrivalent as exc:
        checks += [Check("slots", True), Check("trivalence", False, str(exc))]
    except DanglingSlot as exc:
        checks += [Check("slots", False, str(exc)), Check("trivalence", True)]
    else:
        checks += [Check(n, True) for n in _SLOT_CHECKS]
    if not all(c.passed for c in checks[1:]):
        checks += [Check(n, False, "skipped: slot structure invalid") for n in _TRACE_CHECKS]
        return ValidationReport(tuple(checks))

    trace = trace_regions(track)
    traced = trace.cusps_per_circuit
    ncirc = len(trace.circuits)

    owners: dict[int, int] = defaultdict(int)
    bad_index = []
    for r in track.regions:
        for c in r.circuits:
            if 0 <= c < ncirc:
                owners[c] += 1
            else:
                bad_index.append(c)
    problems = []
    if bad_index:
        problems.append(f"unknown circuit indices {sorted(bad_index)}")
    missing = [c for c in range(ncirc) if owners[c] == 0]
    shared = [c for c in range(ncirc) if owners[c] > 1]
    if missing:
        problems.append(f"circuits {missing} belong to no region")
    if shared:
        problems.append(f"circuits {shared} belong to several regions")
    checks.append(Check("circuit_cover", not problems, "; ".join(problems) or f"{ncirc} circuits"))

    mism = []
    for i, r in enumerate(track.regions):
        got = sum(traced[c] for c in r.circuits if 0 <= c < ncirc)
        if got != r.cusps:
            mism.append(f"region {i} declares {r.cusps} cusps, trace gives {got}")
    checks.append(Check("region_cusps", not mism, "; ".join(mism)))

    total = sum(r.cusps for r in track.regions)
    checks.append(
        Check("total_cusps", total == track.num_switches, f"{total} cusps for {track.num_switches} switches")
    )

    doubled = sum(2 * r.euler - r.cusps for r in track.regions)
    target = 2 * (2 - 2 * track.genus)
    checks.append(
        Check(
            "euler_sum",
            doubled == target,
            f"sum of (euler - cusps/2) is {doubled}/2, surface needs {2 - 2 * track.genus}",
        )
    )

    bad_poly = [
        i for i, r in enumerate(track.regions) if r.kind == "polygon" and (r.euler != 1 or len(r.circuits) != 1)
    ]
    checks.append(Check("polygon_regions", not bad_poly, f"bad polygon regions {bad_poly}" if bad_poly else ""))

    bad_ann = []
    for i, r in enumerate(track.regions):
        if r.kind != "annulus":
            continue
        smooth = [c for c in r.circuits if 0 <= c < ncirc and traced[c] == 0]
        if r.euler != 0 or len(r.circuits) != 2 or not smooth:
            bad_ann.append(i)
    checks.append(Check("annulus_regions", not bad_ann, f"bad annulus regions {bad_ann}" if bad_ann else ""))

    if strict:
        degenerate = []
        for i, r in enumerate(track.regions):
            if r.euler == 1 and r.cusps == 0:
                degenerate.append(f"region {i} is a smooth disk")
            if r.euler == 0 and len(r.circuits) == 2 and r.cusps == 0:
                degenerate.append(f"region {i} is a smooth annulus")
        checks.append(Check("nondegenerate_regions", not degenerate, "; ".join(degenerate)))
    return ValidationReport(tuple(checks))


def build_track(source: dict | TrainTrack, strict: bool = False) -> TrainTrack:
    """Parse and fully validate a track, raising on the first kind of failure."""
    track = source if isinstance(source, TrainTrack) else TrainTrack.from_dict(source)
    Surface(track.genus)
    check_slots(track)
    report = validate(track, strict=strict)
    if not report.ok:
        raise RegionMismatch("; ".join(f"{c.name}: {c.detail}" for c in report.failures()))
    return track


# ---------------------------------------------------------------------------
# small structural helpers used by the other modules


def switch_slots(track: TrainTrack, switch: int) -> dict[str, int]:
    return {slot: track.occupant(switch, slot) for slot in SLOTS}


def components(track: TrainTrack, subset: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components (as sorted branch id lists) of a set of branches."""
    ids = sorted(track.branch_ids if subset is None else subset)
    parent = {b: b for b in ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    at_switch: dict[int, list[int]] = defaultdict(list)
    for bid in ids:
        for e in track.branch(bid).ends:
            at_switch[e.switch].append(bid)
    for bs in at_switch.values():
        for b in bs[1:]:
            parent[find(b)] = find(bs[0])
    groups: dict[int, list[int]] = defaultdict(list)
    for b in ids:
        groups[find(b)].append(b)
    return sorted(groups.values())
