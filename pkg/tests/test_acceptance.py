"""The twelve acceptance criteria, one test each.

Every test records one PASS/FAIL line (see criteria_log) before asserting,
so the summary is complete even when a criterion fails.  Run directly with
`python3 tests/test_acceptance.py` for the lines alone.
"""

import random
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from criteria_log import record  # noqa: E402
from oracles import brute_force_rigid, coset_reps_ok  # noqa: E402

from lattes_fsr import fsr, fundom, verify4  # noqa: E402
from lattes_fsr import hexplane as hp  # noqa: E402
from lattes_fsr.exact import gf2_rank  # noqa: E402
from lattes_fsr.fsr import CellComplex  # noqa: E402
from lattes_fsr.lattes import (MultiplierMatrix, beta_representatives, degree,  # noqa: E402
                               enumerate_rigid)

M = MultiplierMatrix


def exceptional(m) -> bool:
    # alpha = a + c*tau equals k + tau exactly when c = 1 and a = k
    return m.c == 1 and m.a in (0, 1, 2)


def finish(number, title, failures, detail=""):
    ok = not failures
    record(number, title, ok, detail if ok else "; ".join(failures[:5]))
    assert ok, failures


def test_criterion_01_enumeration():
    failures = []
    start = time.perf_counter()
    got = enumerate_rigid(10)
    elapsed = time.perf_counter() - start
    oracle = brute_force_rigid(10, 40)
    if {tuple(m) for m in got} != oracle:
        failures.append(f"set differs from brute force ({len(got)} vs {len(oracle)})")
    if len(got) != len(set(got)):
        failures.append("duplicates")
    stratum = {tuple(m) for m in got if degree(m) == 2}
    if stratum != {(0, -2, 1, 0), (0, -2, 1, 1), (1, -1, 1, 1)}:
        failures.append(f"degree-2 stratum {sorted(stratum)}")
    if elapsed >= 1:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(1, "enumeration matches brute force", failures,
           f"{len(got)} matrices, {elapsed * 1000:.1f} ms")


def test_criterion_02_degree_bound():
    mats = enumerate_rigid(50)
    bad = [m for m in mats if 4 * degree(m) < 3 * m.c * m.c]
    finish(2, "ad - bc >= 3c^2/4", [f"{tuple(m)}" for m in bad], f"{len(mats)} matrices, 0 violations")


def test_criterion_03_beta_cosets():
    mats = random.Random(3).sample(enumerate_rigid(40), 100)
    failures = []
    for m in mats:
        reps = beta_representatives(m).representatives
        rank = gf2_rank([[(m.a + 1) % 2, m.b % 2], [m.c % 2, (m.d + 1) % 2]]).rank
        if len(reps) != 4 // 2 ** rank or not coset_reps_ok(m, reps):
            failures.append(f"{tuple(m)} -> {reps}")
    finish(3, "beta coset counts", failures, "100 matrices, 0 mismatches")


def test_criterion_04_marked_midpoints():
    start = time.perf_counter()
    failures = []
    for p in range(-20, 21):
        for q in range(-20, 21):
            f = hp.psi_frame(p, q)
            if not (hp.is_midpoint(f) and hp.is_marked_midpoint(f)):
                failures.append(f"psi({p},{q}) not a marked midpoint")
    for u in range(10):
        for w in range(10):
            if len(hp.marked_midpoints(hp.TriVertex(u, w))) != 4:
                failures.append(f"hexagon ({u},{w})")
    # 0, psi(1/alpha), psi(tau/alpha), psi((1+tau)/alpha) in psi-coordinates
    corners = {hp.psi_frame(*pq) for pq in ((0, 0), (1, 0), (0, 1), (1, 1))}
    shared = [c for c in (hp.hex_center(u, w) for u in range(-2, 3) for w in range(-2, 3))
              if corners <= set(hp.hex_midpoints(c))]
    if len(shared) != 1:
        failures.append(f"{len(shared)} hexagons carry the four base points")
    elapsed = time.perf_counter() - start
    if elapsed >= 1:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(4, "lattice image lies on marked midpoints", failures, f"{elapsed * 1000:.1f} ms")


def test_criterion_05_degree_26_domain():
    start = time.perf_counter()
    failures = []
    d = fundom.build_hex_domain(M(5, -3, 2, 4), (0, 0))
    if len(d.subtiles) != 26:
        failures.append(f"{len(d.subtiles)} subtiles")
    report = fundom.verify_domain(d)
    eight = [f"c{i}" for i in range(1, 9)]
    if not all(report.checks[k] for k in eight):
        failures.append(f"failing {report.failing}")
    rule = fundom.extract_rule(d)
    problems = fsr.validate_rule(rule)
    if problems:
        failures.append(problems[0])
    c2 = fsr.condition2_acyclic(rule)
    if not c2.acyclic or len(c2.graph.vertices) != 70:
        failures.append(f"pair graph {len(c2.graph.vertices)} vertices, acyclic {c2.acyclic}")
    val = fsr.bounded_valence(rule)
    if tuple(val) != (True, 3):
        failures.append(f"valence {tuple(val)}")
    elapsed = time.perf_counter() - start
    if elapsed >= 10:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(5, "degree-26 hexagon domain", failures, f"{elapsed:.2f} s")


def test_criterion_06_mass_construction():
    start = time.perf_counter()
    failures = []
    built = 0
    low = Counter()
    for m in enumerate_rigid(40):
        if exceptional(m):
            continue
        for beta in beta_representatives(m).representatives:
            try:
                rule = fundom.extract_rule(fundom.build_hex_domain(m, beta))
            except fundom.ValidityCheckFailed as exc:
                if degree(m) >= 16:
                    failures.append(f"{tuple(m)} beta={beta}: {exc.report.failing}")
                else:
                    low["failed"] += 1
                continue
            if degree(m) < 16:
                low["built"] += 1
                continue
            if not fsr.mesh_approaches_zero(rule).ok:
                failures.append(f"{tuple(m)} beta={beta}: mesh")
            built += 1
    elapsed = time.perf_counter() - start
    if elapsed >= 300:
        failures.append(f"runtime {elapsed:.0f}s")
    print(f"below degree 16: {low['built']} built, {low['failed']} failed (logged only)")
    finish(6, "mass construction, degree 16..40", failures,
           f"{built} pairs, {elapsed:.1f} s; below 16: {low['failed']} logged failures")


def test_criterion_07_quadratic_impossibility():
    pinned = {(0, 0): ["c2", "c3", "c5", "c7", "c8", "area", "isotopy"], (1, 0): ["c2", "c3", "c5"]}
    failures = []
    for beta, want in pinned.items():
        try:
            fundom.build_hex_domain(M(0, -2, 1, 1), beta)
            failures.append(f"beta={beta} built")
        except fundom.ValidityCheckFailed as exc:
            if exc.report.failing != want:
                failures.append(f"beta={beta} failing {exc.report.failing}")
    finish(7, "degree-2 construction fails its checks", failures, "pinned failure sets match")


def test_criterion_08_gosper():
    start = time.perf_counter()
    failures = []
    d = fundom.build_from_template("gosper_2m312")
    rule = fundom.extract_rule(d)
    if len(rule.tile_types) != 1 or len(d.subtiles) != 7:
        failures.append(f"{len(rule.tile_types)} tile types, {len(d.subtiles)} subtiles")
    if tuple(d.matrix) != (2, -3, 1, 2) or degree(d.matrix) != 7:
        failures.append(f"matrix {tuple(d.matrix)}")
    c = fsr.subdivide(fsr.sphere_complex(rule), rule, 2)
    if c.F != 49:
        failures.append(f"level 2 has {c.F} faces")
    if not fsr.mesh_approaches_zero(rule).ok or not fsr.bounded_valence(rule).bounded:
        failures.append("mesh or valence")
    elapsed = time.perf_counter() - start
    if elapsed >= 1:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(8, "Gosper template", failures, f"{elapsed * 1000:.0f} ms")


def test_criterion_09_nonrigid():
    start = time.perf_counter()
    failures = []
    for n in range(2, 6):
        for beta in ((0, 0), (1, 0), (0, 1), (1, 1)):
            d = fundom.build_parallelogram_domain(n, beta=beta)
            rule = fundom.extract_rule(d)
            tag = f"n={n} beta={beta}"
            if len(d.subtiles) != n * n:
                failures.append(f"{tag}: {len(d.subtiles)} subtiles")
            c1 = fsr.condition1(rule)
            if c1.level != 1:
                failures.append(f"{tag}: condition 1 level {c1.level}")
            if not fsr.condition2_acyclic(rule).acyclic:
                failures.append(f"{tag}: cyclic")
            if tuple(fsr.bounded_valence(rule)) != (True, 4):
                failures.append(f"{tag}: valence {tuple(fsr.bounded_valence(rule))}")
    elapsed = time.perf_counter() - start
    if elapsed >= 5:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(9, "parallelogram family n = 2..5", failures, f"{elapsed * 1000:.0f} ms")


def test_criterion_10_two_tile_rule():
    start = time.perf_counter()
    failures = []
    rule = fundom.extract_rule(fundom.build_from_template("quadratic_sqrtm7"))
    problems = fsr.validate_rule(rule)
    if problems:
        failures.append(problems[0])
    base = fsr.sphere_complex(rule)
    if (base.V, base.E, base.F) != (4, 4, 2):
        failures.append(f"V,E,F = {base.V},{base.E},{base.F}")
    children = {t: sorted(s.tile for s in T.subtiles) for t, T in rule.tile_types.items()}
    if children.get("triangle") != ["triangle", "triangle"]:
        failures.append(f"triangle -> {children.get('triangle')}")
    if children.get("pentagon") != ["pentagon", "pentagon"]:
        failures.append(f"pentagon -> {children.get('pentagon')}")
    if not fsr.mesh_approaches_zero(rule).ok:
        failures.append("mesh")
    shape = fsr.skeleton_shape(base)
    if shape.is_tree or shape.is_circle or not shape.cycle or not shape.dangling:
        failures.append(f"skeleton {shape}")
    elapsed = time.perf_counter() - start
    if elapsed >= 1:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(10, "two-tile quadratic rule", failures)


def _random_tree(rng):
    n = rng.randint(2, 40)
    edges = [(rng.randrange(v), v, "e") for v in range(1, n)]
    marked = set(rng.sample(range(n), rng.randint(1, n)))
    labels = [f"m{v}" if v in marked else None for v in range(n)]
    return CellComplex(labels, edges, []), marked


def test_criterion_11_pruning():
    rng = random.Random(11)
    failures = []
    for i in range(200):
        c, marked = _random_tree(rng)
        once = fsr.prune(c, marked)
        if fsr.prune(once, once.marked()).to_json() != once.to_json():
            failures.append(f"tree {i} not idempotent")
        val = Counter()
        for t, h, _ in once.edges:
            val[t] += 1
            val[h] += 1
        if once.V > 1 and any(val[v] <= 2 and v not in once.marked() for v in range(once.V)):
            failures.append(f"tree {i} keeps an unmarked vertex of valence <= 2")
    for rule, want in ((fundom.extract_rule(fundom.build_hex_domain(M(5, -3, 2, 4), (0, 0))), 5),
                       (fundom.extract_rule(fundom.build_parallelogram_domain(2, beta=(0, 0))), 1)):
        q = fsr.quotient_skeleton(rule)
        got = fsr.classify_tree(fsr.prune(q, q.marked()))
        if got != want:
            failures.append(f"{rule.name}: type {got}, expected {want}")
    finish(11, "pruning and tree classification", failures, "200 random trees; hex 5, parallelogram 1")


def test_criterion_12_verify_quadratic():
    start = time.perf_counter()
    rows = verify4.verify_quadratic()
    elapsed = time.perf_counter() - start
    failures = [f"{r.name}: {r.residual:.2e}" for r in rows if not r.residual < 1e-9]
    if elapsed >= 1:
        failures.append(f"runtime {elapsed:.2f}s")
    finish(12, "numerical checks of the quadratic map", failures,
           f"{len(rows)} rows, max residual {max(r.residual for r in rows):.1e}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
