"""Command-line front end.

Every command prints JSON on stdout and diagnostics on stderr.  Exit codes:
0 success, 1 unreadable or unparsable input, 2 invalid data, 3 a
precondition such as bi-recurrence fails, 4 an enumeration budget ran out.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from . import errors
from .exact import format_rational
from .faces import face_poset, face_report, presentation_from_json
from .measures import (
    TangentialMeasure,
    WeightSystem,
    is_recurrent,
    is_transversely_recurrent,
    pairing,
    switch_matrix,
    tangential_class_dim,
    tangential_constraints,
    weight_space_dim,
)
from .moves import (
    CarryingData,
    carrying_from_moves,
    check_carrying,
    push_tangential,
    push_weights,
    shift_with_carrying,
    split_with_carrying,
)
from .track import TrainTrack, build_track, dumps_track, validate

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_PRECONDITION, EXIT_BUDGET = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_IO, f"{path} is not valid JSON: {exc}") from None


def _parse_track(data, path: str) -> TrainTrack:
    try:
        return TrainTrack.from_dict(data)
    except errors.TrackError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CliError(EXIT_IO, f"{path} is not a track file: {exc!r}") from None


def _load_track(path: str, args) -> TrainTrack:
    track = build_track(_parse_track(_read_json(path), path), strict=args.strict_regions)
    if args.debug:
        _dump_matrices(track)
    return track


def _dump_matrices(track: TrainTrack) -> None:
    print(json.dumps({"switch_matrix": switch_matrix(track).to_json()}), file=sys.stderr)
    print(json.dumps({"tangential_constraints": tangential_constraints(track).to_json()}), file=sys.stderr)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _measure_values(data, track: TrainTrack, path: str) -> dict:
    """Values from a measure file: ``{"track": fingerprint, "values": {...}}`` or a bare mapping."""
    if isinstance(data, dict) and "values" in data:
        ref = data.get("track")
        if ref is not None and ref != track.fingerprint:
            raise errors.TrackMismatch(f"{path} is for track {ref}, not {track.fingerprint}")
        return data["values"]
    if isinstance(data, dict):
        return data
    raise CliError(EXIT_IO, f"{path} is not a measure file")


def measure_json(track: TrainTrack, measure) -> dict:
    return {"track": track.fingerprint, "values": measure.to_json()}


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    track = _parse_track(_read_json(args.path), args.path)
    report = validate(track, strict=args.strict_regions)
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_dims(args) -> int:
    track = _load_track(args.path, args)
    rec = is_recurrent(track)
    trec = is_transversely_recurrent(track)
    out = {
        "V": track.num_switches,
        "E": track.num_branches,
        "dim_M": weight_space_dim(track),
        "dim_Mstar": tangential_class_dim(track),
        "recurrent": rec.feasible,
        "transversely_recurrent": trec.feasible,
        "birecurrent": rec.feasible and trec.feasible,
    }
    if args.certificates:
        out["recurrence"] = rec.to_json()
        out["transverse_recurrence"] = trec.to_json()
    _emit(out)
    return EXIT_OK


def cmd_face(args) -> int:
    data = _read_json(args.path)
    pres = presentation_from_json(data, base=Path(args.path).parent, strict=args.strict_regions)
    if args.debug:
        _dump_matrices(pres.track)
    _emit(face_report(pres).to_json())
    return EXIT_OK


def cmd_poset(args) -> int:
    track = _load_track(args.path, args)
    poset = face_poset(track, max_branches=args.max_branches, jobs=args.jobs, max_nodes=args.max_nodes)
    _emit(poset.to_json())
    return EXIT_OK


def cmd_move(args) -> int:
    track = _load_track(args.path, args)
    if args.shift is not None:
        cd = shift_with_carrying(track, args.shift)
    else:
        cd = split_with_carrying(track, args.split, args.dir)
    if args.output:
        Path(args.output).write_text(dumps_track(cd.fine))
        carry_path = args.carrying or str(Path(args.output).with_suffix(".carry.json"))
        Path(carry_path).write_text(json.dumps(cd.to_json(), indent=2, sort_keys=True) + "\n")
        _emit({"track": args.output, "carrying": carry_path, "V": cd.fine.num_switches, "E": cd.fine.num_branches})
    else:
        if args.carrying:
            Path(args.carrying).write_text(json.dumps(cd.to_json(), indent=2, sort_keys=True) + "\n")
        sys.stdout.write(dumps_track(cd.fine))
    return EXIT_OK


def cmd_pair(args) -> int:
    track = _load_track(args.path, args)
    v = WeightSystem(track, _measure_values(_read_json(args.weights), track, args.weights))
    w = TangentialMeasure(track, _measure_values(_read_json(args.tangential), track, args.tangential))
    _emit(format_rational(pairing(v, w)))
    return EXIT_OK


def cmd_carry(args) -> int:
    if args.moves is not None:
        track = _load_track(args.path, args)
        moves = _read_json(args.moves)
        cd = carrying_from_moves(track, moves)
    else:
        cd = CarryingData.from_json(_read_json(args.path))
    problems = check_carrying(cd)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        Path(args.output).write_text(json.dumps(cd.to_json(), indent=2, sort_keys=True) + "\n")
    if args.tangential:
        w = TangentialMeasure(cd.coarse, _measure_values(_read_json(args.tangential), cd.coarse, args.tangential))
        _emit(measure_json(cd.fine, push_tangential(cd, w)))
    elif args.weights:
        v = WeightSystem(cd.fine, _measure_values(_read_json(args.weights), cd.fine, args.weights))
        _emit(measure_json(cd.coarse, push_weights(cd, v)))
    else:
        _emit(
            {
                "valid": True,
                "coarse": cd.coarse.fingerprint,
                "fine": cd.fine.fingerprint,
                "paths": {str(b): cd.path_ids(b) for b in cd.fine.branch_ids},
            }
        )
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="traintrack-faces", description=__doc__.splitlines()[0])
    parser.add_argument("--debug", action="store_true", help="dump constraint matrices and tracebacks to stderr")
    parser.add_argument("--strict-regions", action="store_true", help="reject smooth disks and smooth annuli")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a track file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dims", help="dimensions and recurrence of a track")
    p.add_argument("path")
    p.add_argument("--certificates", action="store_true", help="include witnesses and Farkas certificates")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("face", help="face report for a presentation (or bare track)")
    p.add_argument("path")
    p.set_defaults(func=cmd_face)

    p = sub.add_parser("poset", help="poset of recurrent sub-tracks of a maximal track")
    p.add_argument("path")
    p.add_argument("--max-branches", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-nodes", type=int, default=200_000)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("move", help="shift a switch or split a large branch")
    p.add_argument("path")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--shift", type=int, metavar="SWITCH")
    g.add_argument("--split", type=int, metavar="BRANCH")
    p.add_argument("--dir", choices=("left", "right", "central"), default="left")
    p.add_argument("-o", "--output", help="write the new track here (default: stdout)")
    p.add_argument("--carrying", help="write the carrying data here")
    p.set_defaults(func=cmd_move)

    p = sub.add_parser("pair", help="pair a weight system with a tangential measure")
    p.add_argument("path")
    p.add_argument("--weights", required=True)
    p.add_argument("--tangential", required=True)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("carry", help="check carrying data and push measures through it")
    p.add_argument("path", help="carrying file, or a track file together with --moves")
    p.add_argument("--moves", help="JSON list of moves applied to the track at PATH")
    p.add_argument("-o", "--output", help="write the carrying data here")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--tangential", help="tangential measure on the coarse track")
    g.add_argument("--weights", help="weight system on the fine track")
    p.set_defaults(func=cmd_carry)
    return parser


_EXIT_FOR = (
    (errors.BudgetExceeded, EXIT_BUDGET),
    (errors.NotBirecurrent, EXIT_PRECONDITION),
    (errors.NotMaximal, EXIT_PRECONDITION),
    (errors.TrackError, EXIT_INVALID),
    (OSError, EXIT_IO),
    (json.JSONDecodeError, EXIT_IO),
    (KeyError, EXIT_IO),
    (ValueError, EXIT_INVALID),
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:
        for cls, code in _EXIT_FOR:
            if isinstance(exc, cls):
                if args.debug:
                    traceback.print_exc()
                print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
