"""The ten acceptance criteria, each reporting one PASS/FAIL line.

All comparisons are exact (integers and Fractions); timing bounds are
wall-clock and generous for a laptop.
"""

import io
import json
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

import sympy

from conftest import ACCEPTANCE_LINES
from traintrack_faces import measures
from traintrack_faces.cli import main as cli_main
from traintrack_faces.corpus import compute_expected, corpus_dir, load_manifest
from traintrack_faces.exact import kernel_basis
from traintrack_faces.faces import (
    check_multicurve_sum,
    cotangent_codim,
    cotangent_face_dim,
    face_dimension,
)
from traintrack_faces.measures import (
    TangentialMeasure,
    is_birecurrent,
    is_recurrent,
    is_transversely_recurrent,
    move_matrix,
    pairing_values,
    same_class,
    switch_matrix,
    tangential_class_dim,
    weight_space_dim,
)
from traintrack_faces.moves import (
    compose,
    identity_carrying,
    push_tangential,
    push_tangential_values,
    push_weights_values,
    random_carried_moves,
)
from traintrack_faces.track import dumps_track, loads_track


def record(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def clear_caches() -> None:
    for fn in (
        measures.switch_matrix,
        measures.tangential_constraints,
        measures.weight_space_dim,
        measures.is_recurrent,
        measures.is_transversely_recurrent,
    ):
        fn.cache_clear()


def entries():
    return {e.name: e for e in load_manifest()}


def oracle_rank(track) -> int:
    m = switch_matrix(track)
    return sympy.Matrix([[int(x) for x in r] for r in m.entries]).rank() if m.rows else 0


def test_criterion_1_dimension_equality():
    checked, slowest, bad = 0, 0.0, []
    for e in entries().values():
        t = e.track()
        if not is_birecurrent(t):
            continue
        clear_caches()
        start = time.perf_counter()
        dm, dms = weight_space_dim(t), tangential_class_dim(t)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        checked += 1
        if dm != dms or elapsed >= 1.0:
            bad.append((e.name, dm, dms, elapsed))
    genera = {e.track().genus for e in entries().values() if e.expected["C"] is not None}
    record(
        1,
        checked >= 10 and not bad and genera == {2, 3},
        f"dim M* = dim M on {checked} bi-recurrent tracks, slowest {slowest:.3f}s, failures {bad}",
    )


def test_criterion_2_face_dimension_formula():
    want = {"circle-g2": 5, "sep-g2": 5, "pants-g2": 3, "max-g2": 0, "circle-g3": 11, "max-g3": 0}
    es = entries()
    got = {name: face_dimension(es[name].presentation()) for name in want}
    record(2, got == want, f"face dimensions {got}")


def test_criterion_3_maximal_dimensions():
    es = entries()
    got = {}
    for name in ("max-g2", "max-g3"):
        t = es[name].track()
        got[name] = (t.num_switches, t.num_branches, weight_space_dim(t), t.num_branches - oracle_rank(t))
    want = {"max-g2": (12, 18, 6, 6), "max-g3": (24, 36, 12, 12)}
    record(3, got == want, f"(V, E, dim M, E - oracle rank) = {got}")


def test_criterion_4_multicurve_sum():
    seen, bad = {}, []
    for e in entries().values():
        p = e.presentation() if e.expected["C"] is not None else None
        if p is None or not p.is_multicurve:
            continue
        g, k = p.genus, len(p.components)
        dim, flag = cotangent_face_dim(p)
        total = dim + cotangent_codim(p)
        ok = total == 6 * g - 7 and flag == "exact" and measures.complexity(p) == k and check_multicurve_sum(p)
        seen.setdefault(g, set()).add(k)
        if not ok:
            bad.append(e.name)
    covered = {1, 2, 3} <= seen.get(2, set()) and {1, 6} <= seen.get(3, set())
    record(4, covered and not bad, f"components covered {dict(sorted((g, sorted(k)) for g, k in seen.items()))}, failures {bad}")


def test_criterion_5_pairing_descent():
    count, bad = 0, 0
    for e in entries().values():
        t = e.track()
        gens = move_matrix(t).entries
        for v in kernel_basis(switch_matrix(t)):
            for k in gens:
                count += 1
                if sum(a * b for a, b in zip(v, k)) != 0:
                    bad += 1
    record(5, count >= 200 and bad == 0, f"{count} kernel/generator pairings, {bad} non-zero")


def test_criterion_6_carrying_coherence():
    t = entries()["max-g2"].track()
    rng = random.Random(20240606)
    instances, pairings, failures = 0, 0, []
    w0 = TangentialMeasure(t, [Fraction(4)] * t.num_branches)
    for seq in range(20):
        steps = list(random_carried_moves(t, rng, 4))
        total = identity_carrying(t)
        stepwise = w0.values
        for _, cd, _ in steps:
            total = compose(total, cd)
            stepwise = push_tangential_values(cd, stepwise)
        instances += 1
        # (c) functoriality
        if push_tangential_values(total, w0.values) != stepwise:
            failures.append((seq, "functoriality"))
        # (a) classes map to classes
        base = push_tangential(total, w0)
        for i, k in enumerate(move_matrix(t).entries):
            c = Fraction(rng.randint(1, 30), 10)
            moved = measures.elementary_move(w0, t.switches[i], c)
            if not same_class(base, push_tangential(total, moved)):
                failures.append((seq, "class", i))
        # (b) adjointness on random rational inputs
        basis = kernel_basis(switch_matrix(total.fine))
        for _ in range(100):
            coeffs = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in basis]
            v = [sum(c * b[j] for c, b in zip(coeffs, basis)) for j in range(total.fine.num_branches)]
            w = [Fraction(rng.randint(-50, 50), rng.randint(1, 20)) for _ in range(t.num_branches)]
            pairings += 1
            if pairing_values(push_weights_values(total, v), w) != pairing_values(v, push_tangential_values(total, w)):
                failures.append((seq, "adjoint"))
    record(6, instances >= 20 and not failures, f"{instances} sequences, {pairings} adjointness checks, failures {failures[:5]}")


def test_criterion_7_recurrence_decisions():
    es = entries()
    t4 = es["T4"].track()
    res = is_recurrent(t4)
    t4_ok = not res.feasible and res.certificate is not None and res.verify(switch_matrix(t4), None, [1] * 3)
    witnessed, bad = 0, []
    for e in es.values():
        if e.expected["C"] is None:
            continue
        t = e.track()
        r = is_recurrent(t)
        w = r.witness
        ok = r.feasible and all(x > 0 for x in w) and all(x == 0 for x in switch_matrix(t).apply(w))
        ok = ok and is_transversely_recurrent(t).feasible
        witnessed += ok
        if not ok:
            bad.append(e.name)
    record(7, t4_ok and not bad, f"T4 certificate verified: {t4_ok}; positive witnesses on {witnessed} adapted tracks")


def _poset(path, jobs):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli_main(["poset", "--jobs", str(jobs), str(path)])
    return code, buf.getvalue()


def test_criterion_8_poset_run():
    path = entries()["max-g2"].track_path
    clear_caches()
    start = time.perf_counter()
    code1, out1 = _poset(path, 1)
    elapsed = time.perf_counter() - start
    code4, out4 = _poset(path, 4)
    data = json.loads(out1)
    nodes = {n["id"]: n for n in data["nodes"]}
    top = max(data["nodes"], key=lambda n: len(n["branches"]))
    curves = [n for n in data["nodes"] if n["closed_curve"]]
    monotone = all(nodes[c]["C"] <= nodes[p]["C"] for c, p in data["edges"])
    ok = (
        code1 == code4 == 0
        and elapsed < 60
        and top["face_dim"] == 0
        and curves
        and all(n["face_dim"] == 5 for n in curves)
        and monotone
        and out1 == out4
    )
    record(
        8,
        ok,
        f"{len(data['nodes'])} nodes in {elapsed:.2f}s, top face_dim {top['face_dim']}, "
        f"{len(curves)} curve nodes, monotone {monotone}, jobs 1 == jobs 4: {out1 == out4}",
    )


def test_criterion_9_move_invariance():
    t = entries()["max-g2"].track()
    rng = random.Random(99)
    dims, moves = [], 0
    for _ in range(10):
        for _, cd, _ in random_carried_moves(t, rng, 10):
            dims.append(weight_space_dim(cd.fine))
            moves += 1
    record(9, set(dims) == {6} and moves == 100, f"{moves} non-collision moves in 10 sequences, dimensions seen {sorted(set(dims))}")


def test_criterion_10_round_trip():
    files, bad = 0, []
    for path in sorted(corpus_dir().glob("*.json")):
        text = path.read_text()
        data = json.loads(text)
        again = dumps_track(loads_track(text)) if "switches" in data else json.dumps(data, sort_keys=True, indent=2) + "\n"
        files += 1
        if again != text:
            bad.append(path.name)
    mismatched = []
    for e in load_manifest():
        clear_caches()
        pres = e.presentation() if e.expected["C"] is not None else None
        if compute_expected(e.track(), pres) != e.expected:
            mismatched.append(e.name)
    record(10, not bad and not mismatched, f"{files} files byte-identical, manifest mismatches {mismatched}, round-trip failures {bad}")
