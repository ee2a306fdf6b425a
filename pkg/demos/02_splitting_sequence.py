"""Follow a measured lamination through a random splitting sequence.

A generic weight system on max-g2 decides each split direction.  After every
move we lift the weights to the finer track and confirm the carried cone has
not lost dimension.
"""

import random

from traintrack_faces.corpus import entry
from traintrack_faces.measures import TangentialMeasure, pairing_values, weight_space_dim
from traintrack_faces.moves import (
    carrying_from_moves,
    check_carrying,
    generic_weights,
    push_tangential,
    push_weights_values,
    random_carried_moves,
)

rng = random.Random(7)
track = entry("max-g2").track()
v0 = generic_weights(track, rng)

moves = []
for move, cd, v in random_carried_moves(track, rng, 8, weights=v0):
    moves.append(move)
    print(f"{str(move):28s} dim M = {weight_space_dim(cd.fine)}  carrying ok: {not check_carrying(cd)}")

total = carrying_from_moves(track, moves)
longest = max(total.paths.items(), key=lambda kv: len(kv[1]))
print(f"\nlongest path: fine branch {longest[0]} runs over {total.path_ids(longest[0])}")

# Pushing weights back and measures forward are adjoint.
w = TangentialMeasure(track, [1] * track.num_branches)
w_fine = push_tangential(total, w)
lhs = pairing_values(push_weights_values(total, v), w.values)
rhs = pairing_values(v, w_fine.values)
print(f"pairing on the coarse track {lhs} equals pairing on the fine track {rhs}: {lhs == rhs}")
