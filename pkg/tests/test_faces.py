import pytest

from traintrack_faces.errors import BudgetExceeded, InvalidComponents, NotBirecurrent, NotMaximal
from traintrack_faces.exact import RationalMatrix
from traintrack_faces.faces import (
    Component,
    CotangentFaceDescriptor,
    LaminationPresentation,
    ProperSection,
    check_monotone,
    check_multicurve_sum,
    closed_curve_nodes,
    cotangent_codim,
    cotangent_face_dim,
    face_codim,
    face_dimension,
    face_poset,
    face_report,
    is_exposed,
    recurrent_supports,
    subset_poset_bruteforce,
    tangent_codim,
)
from traintrack_faces.measures import is_recurrent, switch_matrix, weight_space_dim
from traintrack_faces.moves import subtrack
from traintrack_faces.track import SLOTS


@pytest.fixture(scope="module")
def pres(manifest):
    return {name: e.presentation() for name, e in manifest.items() if e.expected["C"] is not None}


def test_face_dimension_examples(pres):
    assert face_dimension(pres["circle-g2"]) == 5
    assert face_dimension(pres["max-g2"]) == 0
    assert face_dimension(pres["pants-g2"]) == 3


def test_cotangent_codim_examples(pres):
    assert cotangent_codim(pres["circle-g2"]) == 5
    assert cotangent_codim(pres["pants-g2"]) == 3
    assert cotangent_codim(pres["circle-g3"]) == 11


def test_formulas_agree_everywhere(pres):
    for p in pres.values():
        assert face_dimension(p) == cotangent_codim(p)
        assert 0 <= face_dimension(p) <= 6 * p.genus - 7


def test_cotangent_face_dim_examples(pres):
    assert cotangent_face_dim(pres["pants-g2"]) == (2, "exact")
    assert cotangent_face_dim(pres["circle-g2"]) == (0, "exact")
    assert cotangent_face_dim(pres["max-g2"]) == (5, "upper_bound")


def test_multicurve_sum(pres):
    assert check_multicurve_sum(pres["pants-g2"]) is True
    assert check_multicurve_sum(pres["circle-g2"]) is True
    assert check_multicurve_sum(pres["max-g2"]) is False
    assert check_multicurve_sum(pres["mixed-g2"]) is False


def test_tangent_codim_examples(pres):
    assert tangent_codim(pres["pants-g2"]) == (2, "exact")
    assert tangent_codim(pres["circle-g2"]) == (0, "exact")
    sub = pres["max-g2-sub"]
    assert sub.track.num_switches > 0
    assert tangent_codim(sub) == (weight_space_dim(sub.track) - 1, "upper_bound")
    # the isolated leaf does not count: minimal part is a single curve
    assert tangent_codim(pres["mixed-g2"]) == (0, "exact")


def test_exposedness_is_structural(pres):
    p = pres["pants-g2"]
    assert is_exposed(CotangentFaceDescriptor(p, "full"))
    section = ProperSection(RationalMatrix.from_rows([[1, -1, 0]]))
    assert not is_exposed(CotangentFaceDescriptor(p, section))
    assert is_exposed(CotangentFaceDescriptor(pres["circle-g2"]))


def test_section_must_be_proper(pres):
    p = pres["pants-g2"]
    with pytest.raises(ValueError):
        CotangentFaceDescriptor(p, ProperSection(RationalMatrix.from_rows([[0, 0, 0]])))
    with pytest.raises(ValueError):
        CotangentFaceDescriptor(p, "partial")


def test_face_codim_uses_interior(pres):
    desc = CotangentFaceDescriptor(pres["pants-g2"], ProperSection(RationalMatrix.from_rows([[1, 0, 0]])), pres["twocurve-g2"])
    assert face_codim(desc) == 6 * 2 - 6 - 2
    assert face_codim(CotangentFaceDescriptor(pres["pants-g2"])) == 3


def test_report(pres):
    r = face_report(pres["pants-g2"]).to_json()
    assert (r["C"], r["face_dim"], r["sum_check"]) == (3, 3, 5)
    assert r["is_multicurve"] is True
    for name in ("circle-g2", "sep-g2", "twocurve-g2", "pants-g2", "circle-g3", "sep-g3", "pants-g3"):
        rep = face_report(pres[name])
        k = pres[name].track.num_branches
        assert rep.C == k
        assert rep.sum_check == 6 * rep.genus - 7
        assert rep.cotangent_face_dim == (k - 1, "exact")


def test_non_birecurrent_rejected(tracks):
    with pytest.raises(NotBirecurrent):
        face_report(LaminationPresentation.from_track(tracks["T4"]))


def test_components_must_partition(tracks):
    t = tracks["pants-g2"]
    with pytest.raises(InvalidComponents):
        LaminationPresentation(t, (Component((1, 2)),))
    with pytest.raises(InvalidComponents):
        LaminationPresentation(t, (Component((1, 2, 3)),))  # not connected
    with pytest.raises(InvalidComponents):
        LaminationPresentation(t, (Component((1,), "isolated"), Component((2,)), Component((3,))))
    with pytest.raises(InvalidComponents):
        Component((1,), "wild")


def test_isolated_leaf_must_touch_minimal_part(tracks):
    t = tracks["mixed-g2"]
    LaminationPresentation(t, (Component((1, 2)), Component((3,), "isolated")))
    # branch 1 alone has no large half-branch at its switches
    with pytest.raises(InvalidComponents):
        LaminationPresentation(t, (Component((1,)), Component((2,)), Component((3,), "isolated")))
    with pytest.raises(InvalidComponents):
        LaminationPresentation(t, (Component((1, 2, 3), "isolated"),))


def test_multicurve_flag(pres):
    assert pres["pants-g3"].is_multicurve
    assert not pres["mixed-g2"].is_multicurve
    assert not pres["max-g2"].is_multicurve


# poset


@pytest.fixture(scope="module")
def poset(maxg2):
    return face_poset(maxg2)


def test_poset_top_and_facets(poset, maxg2):
    top = poset.top()
    assert top.branches == maxg2.branch_ids
    assert top.face_dim == 0
    curves = closed_curve_nodes(poset)
    assert curves
    assert {n.face_dim for n in curves} == {5}
    assert check_monotone(poset)


def test_poset_counts_and_json(poset):
    data = poset.to_json()
    assert sum(data["counts_by_dim"].values()) == len(data["nodes"])
    assert all(n["recurrent"] for n in data["nodes"])
    assert data["notes"]


def test_poset_edges_are_covers(poset):
    nodes = {n.id: set(n.branches) for n in poset.nodes}
    edge_set = set(poset.edges)
    for c, p in poset.edges:
        assert nodes[c] < nodes[p]
        assert not any(nodes[c] < nodes[m] < nodes[p] for m in nodes)
    # every strict inclusion is a chain of edges: check one level up exists
    for i, s in nodes.items():
        above = [j for j, t in nodes.items() if s < t]
        if above:
            assert any((i, j) in edge_set for j in above)


def test_poset_is_deterministic_across_workers(maxg2, poset):
    assert face_poset(maxg2, jobs=3).to_json() == poset.to_json()


def _no_dead_end_masks(track):
    ids = track.branch_ids
    bit = {b: 1 << i for i, b in enumerate(ids)}
    sw = [(bit[track.occupant(s, "large")], [bit[track.occupant(s, x)] for x in SLOTS[1:]]) for s in track.switches]
    for mask in range(1, 1 << len(ids)):
        ok = True
        for large, smalls in sw:
            has_large = bool(mask & large)
            has_small = any(mask & x for x in smalls)
            if has_large != has_small:
                ok = False
                break
        if ok:
            yield frozenset(b for b in ids if mask & bit[b])


def test_poset_nodes_match_subset_enumeration(maxg2, poset):
    """Every no-dead-end branch subset whose smoothing is recurrent, and nothing else."""
    found = set()
    for subset in _no_dead_end_masks(maxg2):
        if is_recurrent(subtrack(maxg2, subset)).feasible:
            found.add(subset)
    assert found == {frozenset(n.branches) for n in poset.nodes}


def test_supports_match_bruteforce_on_small_tracks(tracks):
    for name in ("mixed-g2", "max-g2-sub", "T4", "pants-g2"):
        assert recurrent_supports(tracks[name]) == subset_poset_bruteforce(tracks[name]), name


def test_poset_preconditions(tracks, maxg2):
    with pytest.raises(NotMaximal):
        face_poset(tracks["circle-g2"])
    with pytest.raises(NotMaximal):
        face_poset(tracks["T4"])
    with pytest.raises(BudgetExceeded):
        face_poset(maxg2, max_nodes=5)
    small = face_poset(maxg2, max_branches=6)
    assert all(len(n.branches) <= 6 for n in small.nodes)
