"""Exact combinatorics of trivalent train tracks on closed surfaces."""

from .errors import *  # noqa: F401,F403
from .faces import (
    Component,
    CotangentFaceDescriptor,
    FaceReport,
    LaminationPresentation,
    ProperSection,
    check_multicurve_sum,
    cotangent_codim,
    cotangent_face_dim,
    face_codim,
    face_dimension,
    face_poset,
    face_report,
    is_exposed,
    load_presentation,
    tangent_codim,
)
from .measures import (
    TangentialMeasure,
    WeightSystem,
    complexity,
    elementary_move,
    is_birecurrent,
    is_recurrent,
    is_transversely_recurrent,
    move_matrix,
    pairing,
    same_class,
    switch_matrix,
    tangential_class_dim,
    tangential_constraints,
    weight_space_dim,
)
from .moves import (
    CarryingData,
    carrying_from_moves,
    compose,
    push_tangential,
    push_weights,
    shift,
    split,
    subtrack,
)
from .track import Surface, TrainTrack, build_track, dumps_track, loads_track, trace_regions, validate

__version__ = "0.1.0"
