"""Face dimensions, exposedness and the sub-track face poset.

A lamination is handed to this module as a :class:`LaminationPresentation`:
a track adapted to it plus a partition of the branches into minimal and
isolated components.  Nothing here decides chain-recurrence of an abstract
lamination; bi-recurrence of the track is the checkable necessary condition.

Values that are only bounds carry the flag ``upper_bound``: outside the
multicurve case the carried cone of a track can be larger than the cone of
measures on the lamination it presents.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DeadEnd, InvalidComponents, InvalidResult, NotBirecurrent, NotMaximal
from .exact import RationalMatrix, extreme_rays, rank
from .measures import (
    complexity,
    is_birecurrent,
    is_recurrent,
    is_transversely_recurrent,
    switch_matrix,
    tangential_class_dim,
    weight_space_dim,
)
from .moves import subtrack
from .track import TrainTrack, build_track, components

EXACT = "exact"
UPPER = "upper_bound"


@dataclass(frozen=True)
class Component:
    branches: tuple[int, ...]
    kind: str = "minimal"

    def __post_init__(self):
        if self.kind not in ("minimal", "isolated"):
            raise InvalidComponents(f"unknown component kind {self.kind!r}")
        object.__setattr__(self, "branches", tuple(sorted(self.branches)))


@dataclass(frozen=True)
class LaminationPresentation:
    track: TrainTrack
    components: tuple[Component, ...]

    def __post_init__(self):
        _check_components(self.track, self.components)

    @classmethod
    def from_track(cls, track: TrainTrack) -> "LaminationPresentation":
        """One minimal component per connected piece of the track."""
        return cls(track, tuple(Component(tuple(c)) for c in components(track)))

    @property
    def genus(self) -> int:
        return self.track.genus

    @property
    def is_multicurve(self) -> bool:
        return all(
            len(c.branches) == 1 and self.track.branch(c.branches[0]).closed
            for c in self.components
        )

    @property
    def minimal_branches(self) -> tuple[int, ...]:
        return tuple(sorted(b for c in self.components if c.kind == "minimal" for b in c.branches))

    def to_json(self, track_ref=None) -> dict:
        return {
            "track": track_ref if track_ref is not None else self.track.to_dict(),
            "components": [{"branches": list(c.branches), "kind": c.kind} for c in self.components],
        }


def _check_components(track: TrainTrack, comps: Sequence[Component]) -> None:
    seen: list[int] = [b for c in comps for b in c.branches]
    if sorted(seen) != sorted(track.branch_ids):
        raise InvalidComponents("components must partition the branch set")
    minimal = set()
    for c in comps:
        if c.kind == "minimal":
            try:
                subtrack(track, c.branches)
            except DeadEnd as exc:
                raise InvalidComponents(f"component {list(c.branches)} is not a sub-track: {exc}") from None
            if len(components(track, c.branches)) != 1:
                raise InvalidComponents(f"component {list(c.branches)} is not connected")
            minimal.update(c.branches)
    if not minimal:
        raise InvalidComponents("a presentation needs at least one minimal component")
    for c in comps:
        if c.kind != "isolated":
            continue
        if len(c.branches) != 1:
            raise InvalidComponents("an isolated component is a single branch")
        b = track.branch(c.branches[0])
        if b.closed:
            raise InvalidComponents("a closed branch cannot be an isolated leaf")
        for e in b.ends:
            others = [
                track.occupant(e.switch, slot)
                for slot in ("large", "small_left", "small_right")
                if track.occupant(e.switch, slot) != b.id
            ]
            if not any(o in minimal for o in others):
                raise InvalidComponents(f"isolated branch {b.id} has an end away from every minimal component")


def load_presentation(path: str | Path, strict: bool = False) -> LaminationPresentation:
    """Read a presentation file, or a bare track file (one minimal component per piece).

    The ``track`` field is either an inline track or a path relative to the
    presentation file.
    """
    path = Path(path)
    data = json.loads(path.read_text())
    return presentation_from_json(data, base=path.parent, strict=strict)


def presentation_from_json(data: dict, base: Path | None = None, strict: bool = False) -> LaminationPresentation:
    if "components" not in data:
        return LaminationPresentation.from_track(build_track(data, strict=strict))
    ref = data["track"]
    if isinstance(ref, str):
        track_data = json.loads(((base or Path(".")) / ref).read_text())
    else:
        track_data = ref
    track = build_track(track_data, strict=strict)
    comps = tuple(Component(tuple(int(b) for b in c["branches"]), c.get("kind", "minimal")) for c in data["components"])
    return LaminationPresentation(track, comps)


# ---------------------------------------------------------------------------
# dimension formulas


def _birecurrent(pres: LaminationPresentation) -> None:
    complexity(pres)  # raises NotBirecurrent


def face_dimension(pres: LaminationPresentation) -> int:
    return 6 * pres.genus - 6 - complexity(pres)


def cotangent_codim(pres: LaminationPresentation) -> int:
    """Computed from the weight cone, then cross-checked against :func:`face_dimension`."""
    _birecurrent(pres)
    value = 6 * pres.genus - 6 - weight_space_dim(pres.track)
    other = face_dimension(pres)
    if value != other:
        raise InvalidResult(f"codimension {value} disagrees with face dimension {other}")
    return value


def cotangent_face_dim(pres: LaminationPresentation) -> tuple[int, str]:
    _birecurrent(pres)
    if pres.is_multicurve:
        return len(pres.components) - 1, EXACT
    return weight_space_dim(pres.track) - 1, UPPER


def tangent_codim(pres: LaminationPresentation) -> tuple[int, str]:
    """Projective dimension of the measures on the union of the minimal components."""
    _birecurrent(pres)
    sub = subtrack(pres.track, pres.minimal_branches)
    if sub.num_switches == 0:
        return sub.num_branches - 1, EXACT
    return weight_space_dim(sub) - 1, UPPER


def check_multicurve_sum(pres: LaminationPresentation) -> bool:
    """True for multicurves, where the sum identity is asserted; False otherwise."""
    dim, flag = cotangent_face_dim(pres)
    codim = cotangent_codim(pres)
    target = 6 * pres.genus - 7
    if pres.is_multicurve:
        if dim + codim != target:
            raise InvalidResult(f"multicurve sum {dim} + {codim} != {target}")
        return True
    if flag == EXACT and not dim + codim < target:
        raise InvalidResult(f"non-multicurve sum {dim} + {codim} is not below {target}")
    return False


@dataclass(frozen=True)
class FaceReport:
    genus: int
    C: int
    face_dim: int
    cotangent_codim: int
    cotangent_face_dim: tuple[int, str]
    tangent_codim: tuple[int, str]
    is_multicurve: bool
    sum_check: int

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "C": self.C,
            "face_dim": self.face_dim,
            "cotangent_codim": self.cotangent_codim,
            "cotangent_face_dim": {"value": self.cotangent_face_dim[0], "flag": self.cotangent_face_dim[1]},
            "tangent_codim": {"value": self.tangent_codim[0], "flag": self.tangent_codim[1]},
            "is_multicurve": self.is_multicurve,
            "sum_check": self.sum_check,
        }


def face_report(pres: LaminationPresentation) -> FaceReport:
    c = complexity(pres)
    codim = cotangent_codim(pres)
    cfd = cotangent_face_dim(pres)
    if pres.is_multicurve:
        check_multicurve_sum(pres)
    return FaceReport(
        genus=pres.genus,
        C=c,
        face_dim=face_dimension(pres),
        cotangent_codim=codim,
        cotangent_face_dim=cfd,
        tangent_codim=tangent_codim(pres),
        is_multicurve=pres.is_multicurve,
        sum_check=cfd[0] + codim,
    )


# ---------------------------------------------------------------------------
# exposedness


@dataclass(frozen=True)
class ProperSection:
    """Linear equations on weights cutting the measure cone of the support to a proper subcone."""

    rows: RationalMatrix


@dataclass(frozen=True)
class CotangentFaceDescriptor:
    support: LaminationPresentation
    subcone: object = "full"
    interior: LaminationPresentation | None = None

    def __post_init__(self):
        if isinstance(self.subcone, str):
            if self.subcone != "full":
                raise ValueError("subcone is 'full' or a ProperSection")
            return
        if not isinstance(self.subcone, ProperSection):
            raise ValueError("subcone is 'full' or a ProperSection")
        sec = self.subcone.rows
        if sec.cols != self.support.track.num_branches:
            raise ValueError("section width does not match the support track")
        # proper: the section must cut the span of the weight cone
        smat = switch_matrix(self.support.track)
        if rank(smat.vstack(sec)) == rank(smat):
            raise ValueError("section does not cut the measure cone")


def is_exposed(desc: CotangentFaceDescriptor) -> bool:
    return isinstance(desc.subcone, str) and desc.subcone == "full"


def face_codim(desc: CotangentFaceDescriptor) -> int:
    """Codimension ``6g - 6 - C(nu)`` where nu presents the face's interior."""
    nu = desc.interior if desc.interior is not None else desc.support
    return 6 * nu.genus - 6 - complexity(nu)


# ---------------------------------------------------------------------------
# face poset


@dataclass(frozen=True)
class PosetNode:
    id: int
    branches: tuple[int, ...]
    C: int
    face_dim: int
    recurrent: bool
    birecurrent: bool
    closed_curve: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "branches": list(self.branches),
            "C": self.C,
            "face_dim": self.face_dim,
            "recurrent": self.recurrent,
            "birecurrent": self.birecurrent,
            "closed_curve": self.closed_curve,
        }


@dataclass(frozen=True)
class Poset:
    genus: int
    nodes: tuple[PosetNode, ...]
    edges: tuple[tuple[int, int], ...]  # (child, parent)
    notes: tuple[str, ...] = field(default=())

    @property
    def counts_by_dim(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for n in self.nodes:
            out[n.face_dim] = out.get(n.face_dim, 0) + 1
        return dict(sorted(out.items()))

    def top(self) -> PosetNode:
        return max(self.nodes, key=lambda n: len(n.branches))

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "nodes": [n.to_json() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "counts_by_dim": {str(k): v for k, v in self.counts_by_dim.items()},
            "notes": list(self.notes),
        }


POSET_NOTE = (
    "nodes are recurrent sub-tracks (presentations); bi-recurrence is reported per node, "
    "chain-recurrence of the presented lamination is not certified"
)


def recurrent_supports(track: TrainTrack, max_nodes: int | None = None) -> list[frozenset[int]]:
    """Every branch set carrying a strictly positive weight system of a sub-track.

    These are the supports of the faces of the weight cone: unions of the
    supports of its extreme rays.
    """
    ids = track.branch_ids
    rays = extreme_rays(switch_matrix(track))
    ray_supports = sorted({frozenset(ids[i] for i, x in enumerate(r) if x) for r in rays}, key=_order)
    found = set(ray_supports)
    frontier = list(ray_supports)
    while frontier:
        nxt = []
        for f in frontier:
            for r in ray_supports:
                if r <= f:
                    continue
                u = f | r
                if u not in found:
                    found.add(u)
                    nxt.append(u)
                    if max_nodes is not None and len(found) > max_nodes:
                        raise BudgetExceeded(f"more than {max_nodes} sub-tracks")
        frontier = nxt
    return sorted(found, key=_order)


def _order(s: frozenset[int]):
    return (len(s), sorted(s))


def _node_data(args) -> tuple[int, bool, bool]:
    track, branches = args
    sub = subtrack(track, branches)
    return (
        tangential_class_dim(sub),
        bool(is_transversely_recurrent(sub).feasible and is_recurrent(sub).feasible),
        sub.num_switches == 0 and sub.num_branches == 1,
    )


def _covers(supports: list[frozenset[int]], rays: list[frozenset[int]]) -> list[tuple[int, int]]:
    index = {s: i for i, s in enumerate(supports)}
    edges = []
    for i, f in enumerate(supports):
        ups = {f | r for r in rays if not r <= f}
        ups = {u for u in ups if u in index}
        minimal = [u for u in ups if not any(v < u for v in ups)]
        edges.extend((i, index[u]) for u in minimal)
    return sorted(edges)


def face_poset(
    track: TrainTrack,
    max_branches: int | None = None,
    jobs: int = 1,
    max_nodes: int | None = 200_000,
) -> Poset:
    """Inclusion poset of recurrent sub-tracks of a maximal bi-recurrent track.

    Node ids follow the canonical order (size, then sorted branch ids), so the
    output does not depend on ``jobs``.
    """
    g = track.genus
    if not is_birecurrent(track):
        raise NotMaximal("track is not bi-recurrent")
    if weight_space_dim(track) != 6 * g - 6:
        raise NotMaximal(f"weight space has dimension {weight_space_dim(track)}, not {6 * g - 6}")
    supports = recurrent_supports(track, max_nodes)
    if max_branches is not None:
        supports = [s for s in supports if len(s) <= max_branches]
    ids = track.branch_ids
    rays = [
        s for s in {frozenset(ids[i] for i, x in enumerate(r) if x) for r in extreme_rays(switch_matrix(track))}
    ]
    work = [(track, tuple(sorted(s))) for s in supports]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            data = list(pool.map(_node_data, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        data = [_node_data(w) for w in work]
    nodes = tuple(
        PosetNode(i, tuple(sorted(s)), c, 6 * g - 6 - c, True, bi, cc)
        for i, (s, (c, bi, cc)) in enumerate(zip(supports, data))
    )
    edges = tuple(_covers(supports, rays))
    return Poset(g, nodes, edges, (POSET_NOTE,))


def subset_poset_bruteforce(track: TrainTrack) -> list[frozenset[int]]:
    """Recurrent sub-tracks by trying every branch subset (small tracks only)."""
    ids = track.branch_ids
    out = []
    for mask in range(1, 1 << len(ids)):
        subset = [ids[i] for i in range(len(ids)) if mask >> i & 1]
        try:
            sub = subtrack(track, subset)
        except DeadEnd:
            continue
        if is_recurrent(sub).feasible:
            out.append(frozenset(subset))
    return sorted(out, key=_order)


def closed_curve_nodes(poset: Poset) -> list[PosetNode]:
    return [n for n in poset.nodes if n.closed_curve]


def check_monotone(poset: Poset) -> bool:
    by_id = {n.id: n for n in poset.nodes}
    return all(by_id[c].C <= by_id[p].C for c, p in poset.edges)


def iter_presentations(track: TrainTrack, subsets: Iterable[Iterable[int]]):
    for s in subsets:
        yield LaminationPresentation.from_track(subtrack(track, s))
