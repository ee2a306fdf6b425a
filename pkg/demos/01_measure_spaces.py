"""Weight systems and tangential measures on the shipped genus-2 tracks.

Run with ``python3 demos/01_measure_spaces.py``.
"""

from traintrack_faces.corpus import entry
from traintrack_faces.exact import RationalMatrix, format_rational
from traintrack_faces.measures import (
    is_recurrent,
    is_transversely_recurrent,
    switch_matrix,
    tangential_class_dim,
    tangential_constraints,
    weight_space_dim,
)

maxg2 = entry("max-g2").track()
print(f"max-g2: {maxg2.num_switches} switches, {maxg2.num_branches} branches")
print(f"  switch conditions: {switch_matrix(maxg2).rows} rows")
print(f"  region inequalities: {tangential_constraints(maxg2).rows} rows (one per side of each trigon)")
print(f"  dim M = {weight_space_dim(maxg2)}, dim M* = {tangential_class_dim(maxg2)}")

# The simplex returns an explicit strictly positive weight system.
w = is_recurrent(maxg2).witness
print("  a positive weight system:", " ".join(format_rational(x) for x in w))
t = is_transversely_recurrent(maxg2).witness
print("  a positive tangential measure:", " ".join(format_rational(x) for x in t))

# T4 fails recurrence: two switches force the middle branch to carry nothing.
t4 = entry("T4").track()
res = is_recurrent(t4)
print(f"\nT4 recurrent? {res.feasible}")
cert = res.certificate
print("  Farkas multipliers:", [format_rational(x) for x in cert.eq_multipliers])
no_rows = RationalMatrix.zeros(0, t4.num_branches)
print("  combined row:", [format_rational(x) for x in cert.combined_row(switch_matrix(t4), no_rows)])
print("  certificate checks out:", res.verify(switch_matrix(t4), None, [1, 1, 1]))
