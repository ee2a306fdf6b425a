"""Weight systems, tangential measures and the complexity of a track.

Weight systems satisfy the switch conditions and form the cone M(track).
Tangential measures satisfy the complementary-region inequalities; modulo
elementary moves they form M*(track), whose dimension is the complexity.

The generator of the move space at a switch is ``+1`` on each small-slot
branch and ``-1`` on the large-slot branch (``2 e_b - e_b'`` when one branch
fills both small slots).  It is the direction of the move
``(v1, v2, v3) -> (v1 + c, v2 + c, v3 - c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import InvalidResult, NotBirecurrent, RangeViolation, TrackMismatch
from .exact import (
    FeasibilityResult,
    RationalMatrix,
    as_fraction,
    cone_span_dim,
    feasible,
    format_rational,
    in_row_span,
    rank,
)
from .track import SLOTS, TrainTrack, trace_regions


def _values(track: TrainTrack, values) -> tuple[Fraction, ...]:
    if isinstance(values, Mapping):
        keys = {int(k) for k in values}
        if keys != set(track.branch_ids):
            raise TrackMismatch(f"values given for branches {sorted(keys)}, track has {list(track.branch_ids)}")
        lookup = {int(k): v for k, v in values.items()}
        return tuple(as_fraction(lookup[b]) for b in track.branch_ids)
    vals = tuple(as_fraction(v) for v in values)
    if len(vals) != track.num_branches:
        raise TrackMismatch(f"{len(vals)} values for a track with {track.num_branches} branches")
    return vals


class _BranchVector:
    track: TrainTrack
    values: tuple[Fraction, ...]

    def __getitem__(self, bid: int) -> Fraction:
        return self.values[self.track.index[bid]]

    def to_json(self) -> dict[str, str]:
        return {str(b): format_rational(v) for b, v in zip(self.track.branch_ids, self.values)}

    @classmethod
    def from_json(cls, track: TrainTrack, data: Mapping[str, str]):
        return cls(track, data)


@dataclass(frozen=True, init=False)
class WeightSystem(_BranchVector):
    """Non-negative rational weights satisfying every switch condition."""

    track: TrainTrack
    values: tuple[Fraction, ...]

    def __init__(self, track: TrainTrack, values, check: bool = True):
        object.__setattr__(self, "track", track)
        object.__setattr__(self, "values", _values(track, values))
        if check:
            if any(v < 0 for v in self.values):
                raise InvalidResult("weight systems are non-negative")
            if any(x != 0 for x in switch_matrix(track).apply(self.values)):
                raise InvalidResult("switch conditions violated")


@dataclass(frozen=True, init=False)
class TangentialMeasure(_BranchVector):
    """Non-negative rational values satisfying the region inequalities."""

    track: TrainTrack
    values: tuple[Fraction, ...]

    def __init__(self, track: TrainTrack, values, check: bool = True):
        object.__setattr__(self, "track", track)
        object.__setattr__(self, "values", _values(track, values))
        if check:
            if any(v < 0 for v in self.values):
                raise InvalidResult("tangential measures are non-negative")
            if any(x < 0 for x in tangential_constraints(track).apply(self.values)):
                raise InvalidResult("complementary-region inequality violated")


@dataclass(frozen=True)
class MoveSpace:
    track: TrainTrack
    generators: tuple[tuple[Fraction, ...], ...]


def _same_track(a: TrainTrack, b: TrainTrack) -> None:
    if a is not b and a.fingerprint != b.fingerprint:
        raise TrackMismatch("measures live on different tracks")


# ---------------------------------------------------------------------------
# matrices


@lru_cache(maxsize=4096)
def switch_matrix(track: TrainTrack) -> RationalMatrix:
    """One row per switch: +1 on small slots, -1 on the large slot, summed on coincidence."""
    rows = []
    for s in track.switches:
        row = [0] * track.num_branches
        for slot in SLOTS:
            j = track.index[track.occupant(s, slot)]
            row[j] += -1 if slot == "large" else 1
        rows.append(row)
    return RationalMatrix.from_rows(rows, track.num_branches)


def move_matrix(track: TrainTrack) -> RationalMatrix:
    """Generators of the elementary-move directions, one row per switch."""
    return switch_matrix(track)


def move_space(track: TrainTrack) -> MoveSpace:
    return MoveSpace(track, move_matrix(track).entries)


@lru_cache(maxsize=4096)
def tangential_constraints(track: TrainTrack) -> RationalMatrix:
    """Inequality rows ``row . w >= 0`` from the declared complementary regions.

    A polygon with k cusps has k sides (smooth boundary arcs between cusps);
    each side is bounded by the sum of the others.  In an annulus with a
    smooth boundary circuit, that circuit is bounded by the other one.
    Regions of kind ``other`` impose nothing.
    """
    trace = trace_regions(track)
    n = track.num_branches
    rows = []

    def tally(branches):
        v = [0] * n
        for b in branches:
            v[track.index[b]] += 1
        return v

    for region in track.regions:
        if region.kind == "polygon":
            sides = [tally(s) for s in trace.sides(region.circuits[0])]
            total = [sum(col) for col in zip(*sides)]
            for s in sides:
                rows.append([t - 2 * x for t, x in zip(total, s)])
        elif region.kind == "annulus":
            c1, c2 = region.circuits
            t1 = tally(b for b, _ in trace.circuits[c1])
            t2 = tally(b for b, _ in trace.circuits[c2])
            cusps = trace.cusps_per_circuit
            if cusps[c1] == 0:
                rows.append([b - a for a, b in zip(t1, t2)])
            if cusps[c2] == 0:
                rows.append([a - b for a, b in zip(t1, t2)])
    return RationalMatrix.from_rows(rows, n)


# ---------------------------------------------------------------------------
# dimensions and recurrence


@lru_cache(maxsize=4096)
def weight_space_dim(track: TrainTrack) -> int:
    return cone_span_dim(switch_matrix(track))


@lru_cache(maxsize=4096)
def is_recurrent(track: TrainTrack) -> FeasibilityResult:
    return feasible(switch_matrix(track), None, [1] * track.num_branches)


@lru_cache(maxsize=4096)
def is_transversely_recurrent(track: TrainTrack) -> FeasibilityResult:
    return feasible(None, tangential_constraints(track), [1] * track.num_branches)


def is_birecurrent(track: TrainTrack) -> bool:
    return is_recurrent(track).feasible and is_transversely_recurrent(track).feasible


def tangential_class_dim(track: TrainTrack, flagged: bool = False):
    """``#branches - rank(move matrix)``.

    With ``flagged`` returns ``(dim, "exact" | "formal")``; the value is only
    the topological dimension of M*(track) when the track is bi-recurrent.
    """
    d = track.num_branches - rank(move_matrix(track))
    if flagged:
        return d, ("exact" if is_birecurrent(track) else "formal")
    return d


def complexity(pres) -> int:
    """Dimension of M*(track) for a track adapted to the lamination.

    Accepts a presentation (anything with a ``track`` attribute) or a bare
    track.  Adaptedness is the caller's claim; bi-recurrence, which it
    implies, is checked.
    """
    track = getattr(pres, "track", pres)
    if not is_recurrent(track).feasible:
        raise NotBirecurrent("track is not recurrent, so it is not adapted to a chain-recurrent lamination")
    if not is_transversely_recurrent(track).feasible:
        raise NotBirecurrent("track is not transversely recurrent")
    return tangential_class_dim(track)


# ---------------------------------------------------------------------------
# moves, classes and the pairing


def elementary_move(w: TangentialMeasure, switch: int, c) -> TangentialMeasure:
    """Move ``(v1, v2, v3) -> (v1 + c, v2 + c, v3 - c)`` at ``switch``.

    ``c > 0`` needs ``c < v3`` (the large-slot value); ``c < 0`` is the
    second kind with ``d = -c < min(v1, v2)``.  The result must again satisfy
    the region inequalities.
    """
    track = w.track
    c = as_fraction(c)
    if c == 0:
        return w
    large = track.occupant(switch, "large")
    smalls = [track.occupant(switch, s) for s in ("small_left", "small_right")]
    if c > 0 and not c < w[large]:
        raise RangeViolation(f"c = {c} must be less than the large-slot value {w[large]}")
    if c < 0 and not -c < min(w[b] for b in smalls):
        raise RangeViolation(f"d = {-c} must be less than the small-slot values {[w[b] for b in smalls]}")
    row = switch_matrix(track).row(track.switches.index(switch))
    new = tuple(v + c * k for v, k in zip(w.values, row))
    try:
        return TangentialMeasure(track, new)
    except InvalidResult as exc:
        raise InvalidResult(f"move at switch {switch} leaves the tangential cone: {exc}") from None


def same_class(w1: TangentialMeasure, w2: TangentialMeasure) -> bool:
    """True iff ``w1 - w2`` lies in the span of the move generators."""
    _same_track(w1.track, w2.track)
    diff = [a - b for a, b in zip(w1.values, w2.values)]
    return in_row_span(move_matrix(w1.track), diff)


def pairing(v: WeightSystem, w) -> Fraction:
    """Intersection pairing: sum over branches of ``v(b) * w(b)``."""
    _same_track(v.track, w.track)
    return sum((a * b for a, b in zip(v.values, w.values)), Fraction(0))


def pairing_values(v: Sequence, w: Sequence) -> Fraction:
    return sum((as_fraction(a) * as_fraction(b) for a, b in zip(v, w)), Fraction(0))
