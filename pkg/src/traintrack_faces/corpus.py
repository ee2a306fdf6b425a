"""Shipped example tracks and their expected values.

Each manifest entry names a track file and, optionally, a presentation file
(a track plus component metadata).  ``expected`` holds the quantities the
library must reproduce exactly; ``provenance`` says where each one comes from.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import NotBirecurrent
from .faces import LaminationPresentation, face_dimension, load_presentation
from .measures import is_recurrent, is_transversely_recurrent, tangential_class_dim, weight_space_dim
from .track import TrainTrack, loads_track

EXPECTED_KEYS = ("V", "E", "dim_M", "dim_Mstar", "recurrent", "transversely_recurrent", "C", "face_dim")


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    track_file: str
    presentation_file: str | None
    expected: dict
    provenance: dict
    tags: tuple[str, ...]
    fixtures: dict

    @property
    def track_path(self) -> Path:
        return corpus_dir() / self.track_file

    @property
    def presentation_path(self) -> Path | None:
        return corpus_dir() / self.presentation_file if self.presentation_file else None

    def track(self) -> TrainTrack:
        return loads_track(self.track_path.read_text())

    def presentation(self) -> LaminationPresentation:
        if self.presentation_path is not None:
            return load_presentation(self.presentation_path)
        return LaminationPresentation.from_track(self.track())


def corpus_dir() -> Path:
    return Path(str(resources.files("traintrack_faces") / "corpus"))


def load_manifest() -> list[CorpusEntry]:
    data = json.loads((corpus_dir() / "manifest.json").read_text())
    return [
        CorpusEntry(
            name=e["name"],
            track_file=e["track"],
            presentation_file=e.get("presentation"),
            expected=e["expected"],
            provenance=e.get("provenance", {}),
            tags=tuple(e.get("tags", ())),
            fixtures=e.get("fixtures", {}),
        )
        for e in data["entries"]
    ]


def entry(name: str) -> CorpusEntry:
    for e in load_manifest():
        if e.name == name:
            return e
    raise KeyError(name)


def compute_expected(track: TrainTrack, pres: LaminationPresentation | None = None) -> dict:
    """The manifest quantities, recomputed from scratch."""
    rec = is_recurrent(track).feasible
    trec = is_transversely_recurrent(track).feasible
    out = {
        "V": track.num_switches,
        "E": track.num_branches,
        "dim_M": weight_space_dim(track),
        "dim_Mstar": tangential_class_dim(track),
        "recurrent": rec,
        "transversely_recurrent": trec,
        "C": None,
        "face_dim": None,
    }
    if rec and trec:
        try:
            p = pres or LaminationPresentation.from_track(track)
            out["C"] = out["dim_Mstar"]
            out["face_dim"] = face_dimension(p)
        except NotBirecurrent:
            pass
    return out
