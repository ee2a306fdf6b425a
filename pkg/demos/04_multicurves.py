"""Face reports for multicurves and for a curve with a spiralling leaf.

For weighted multicurves the projective measure space and the face
codimension add up to 6g - 7.  The mixed example adds an isolated leaf to a
curve.  Its printed dimension is only the upper bound coming from the track;
the leaf carries no transverse measure, so the true value is 0 and the true
sum is 4, one below the target.
"""

from traintrack_faces.corpus import entry
from traintrack_faces.faces import face_report

for name in ("circle-g2", "sep-g2", "twocurve-g2", "pants-g2", "circle-g3", "pants-g3", "mixed-g2", "max-g2"):
    r = face_report(entry(name).presentation())
    dim, flag = r.cotangent_face_dim
    print(
        f"{name:12s} g={r.genus} C={r.C:2d} face_dim={r.face_dim:2d} "
        f"codim={r.cotangent_codim:2d} dimPM={dim:2d} ({flag}) sum={r.sum_check:2d} "
        f"target={6 * r.genus - 7}"
    )
