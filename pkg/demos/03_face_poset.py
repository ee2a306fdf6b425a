"""The face poset of a maximal genus-2 track.

Recurrent sub-tracks are ordered by inclusion; each carries the complexity C
and the face dimension 6g - 6 - C.  The whole track sits at an extreme point
and the closed curves sit on facets.
"""

from traintrack_faces.corpus import entry
from traintrack_faces.faces import check_monotone, closed_curve_nodes, face_poset

poset = face_poset(entry("max-g2").track(), jobs=2)
print(f"{len(poset.nodes)} recurrent sub-tracks, {len(poset.edges)} cover relations")
for dim, count in poset.counts_by_dim.items():
    print(f"  face dimension {dim}: {count}")
top = poset.top()
print(f"top node {top.id}: {len(top.branches)} branches, face dimension {top.face_dim}")
curves = closed_curve_nodes(poset)
print(f"{len(curves)} embedded closed curves, face dimensions {sorted({n.face_dim for n in curves})}")
print("C never drops along an inclusion:", check_monotone(poset))
