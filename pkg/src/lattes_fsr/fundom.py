"""Fundamental domains for the orbifold group and the rules they induce.

Three constructions live here:

* the decagon domain assembled from edge path approximations of three
  lines in the hexagon tiling (generic rigid maps),
* the parallelogram domain for maps z -> n z + beta,
* bundled templates (hexagon sets found offline for the multipliers the line
  construction excludes, and the hand-derived two-tile quadratic example).

Every domain is checked by exact combinatorics before a rule is extracted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from itertools import product

import numpy as np

from . import hexplane as hp
from .fsr import Subtile, SubdivisionRule, TileType
from .hexplane import Frame, FrameLine, FramePath
from .lattes import MultiplierMatrix, TauValue, degree, satisfies_mx, tau_from_matrix

DECAGON_CORNERS = ("P1", "beta", "Q1", "1+beta", "R1", "R2", "1+tau+beta", "Q2", "tau+beta", "P2")
DECAGON_WORD = [("A", 1), ("A", -1), ("B", 1), ("B", -1), ("C", 1),
                ("D", 1), ("D", -1), ("E", 1), ("E", -1), ("C", -1)]
DECAGON_PAIRING = [(1, 2, "rotation about beta"), (3, 4, "rotation about 1+beta"),
                   (5, 10, "translation by 2"), (6, 7, "rotation about 1+tau+beta"),
                   (8, 9, "rotation about tau+beta")]
HEX_CHECKS = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "area", "isotopy")

TEMPLATE_NAMES = ("gosper_2m312", "case_2m612", "case_1m312", "case_1m612",
                  "case_0m411", "case_0m710_b1", "quadratic_sqrtm7")


class ExceptionalAlpha(ValueError):
    """alpha is tau, 1+tau or 2+tau; use a bundled template instead."""


class WindowExhausted(RuntimeError):
    pass


class AnchoringError(ValueError):
    pass


class UnknownTemplate(KeyError):
    pass


@dataclass
class DomainReport:
    checks: dict
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failing(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]


class ValidityCheckFailed(Exception):
    def __init__(self, report: DomainReport, message: str = ""):
        self.report = report
        super().__init__(message or f"failing checks: {', '.join(report.failing)}")


@dataclass
class FundamentalDomain:
    kind: str
    matrix: MultiplierMatrix
    beta: tuple
    boundary: list
    corners: dict
    marks: dict
    pairing: list
    subtiles: list
    data: dict = field(default_factory=dict)


# ================================================================ hex domains

@dataclass(frozen=True)
class HexSetup:
    matrix: MultiplierMatrix
    beta: tuple
    one: Frame
    tau: Frame
    beta_f: Frame

    @classmethod
    def of(cls, M, beta) -> HexSetup:
        M = MultiplierMatrix(*M)
        a, b, c, d = M
        return cls(M, tuple(beta), hp.psi_frame(a, c), hp.psi_frame(b, d),
                   hp.psi_frame(*M.apply(beta)))

    def lattice_frame(self, lam) -> Frame:
        return hp.psi_frame(*self.matrix.apply(lam))

    def mark(self, name: str) -> Frame:
        shifts = {"beta": (0, 0), "1+beta": (1, 0), "tau+beta": (0, 1), "1+tau+beta": (1, 1)}
        x, y = shifts[name]
        return hp.add(self.beta_f, self.lattice_frame((x, y)))


@dataclass
class LineConstruction:
    """The three traced lines plus the chosen P1, P2 (frame points)."""
    setup: HexSetup
    sides: tuple
    l1: FramePath
    l2: FramePath
    l3: FramePath
    p1: Frame | None
    p2: Frame | None


def _trace_lines(setup: HexSetup, sides) -> tuple[FramePath, FramePath, FramePath]:
    s1, s2, s3 = sides
    one, tau, bf = setup.one, setup.tau, setup.beta_f
    line1 = FrameLine.through(bf, one, hp.alternating_side(s1))
    line2 = FrameLine.through(hp.add(bf, tau), one, hp.alternating_side(s2))
    line3 = FrameLine.through(hp.sub(hp.scale(bf, 2), one), tau, hp.global_side(s3), doubled=True)
    try:
        l1 = hp.trace_line(line1, Fraction(-2), Fraction(4))
        l2 = hp.trace_line(line2, Fraction(-2), Fraction(4))
        l3 = hp.trace_line(line3, Fraction(-1), Fraction(2))
    except hp.WindowTooSmall as exc:
        raise WindowExhausted(str(exc)) from exc
    return l1, l2, l3


def _choose_p1_p2(l1: FramePath, l2: FramePath, l3: FramePath):
    on1 = set(l1.corners)
    on2 = set(l2.corners)
    best = None
    last1 = None
    for j, g in enumerate(l3.corners):
        if g in on1 and g not in on2:
            last1 = j
        elif g in on2:
            if last1 is not None and g not in on1:
                gap = j - last1
                if best is None or gap < best[0]:
                    best = (gap, last1, j)
            last1 = None
    if best is None:
        return None, None
    return l3.corners[best[1]], l3.corners[best[2]]


def _nodes(path: FramePath) -> tuple[list[Frame], dict]:
    nodes = [path.corners[0]]
    for m, g in zip(path.mids, path.corners[1:]):
        if hp.is_marked_midpoint(m):
            nodes.append(m)
        nodes.append(g)
    return nodes, {p: i for i, p in enumerate(nodes)}


def _rotate(p: Frame, centre: Frame) -> Frame:
    return (2 * centre[0] - p[0], 2 * centre[1] - p[1])


def _hexes_touching(points) -> set:
    out = set()
    for p in points:
        if hp.is_corner(p):
            out.update(hp.corner_hexes(p))
    return out


def evaluate_lines(lc: LineConstruction):
    """Run every check on a line construction.  Returns (report, boundary,
    corners) where boundary is None if it could not be assembled."""
    s = lc.setup
    checks = {k: False for k in HEX_CHECKS}
    diag = {}
    l1, l2, l3 = lc.l1, lc.l2, lc.l3
    on1, on2 = set(l1.corners), set(l2.corners)
    common = on1 & on2
    checks["c1"] = not common
    if common:
        diag["c1"] = f"{len(common)} shared vertices"

    P1, P2 = lc.p1, lc.p2
    if P1 is None or P2 is None:
        diag["c2"] = "no consecutive meeting points of the third path with the first two"
        return DomainReport(checks, diag), None, None

    def between(path, mark_lo, mark_hi, corner, name):
        lo = path.mid_index.get(mark_lo)
        hi = path.mid_index.get(mark_hi)
        k = path.corner_index.get(corner)
        if lo is None or hi is None or k is None:
            diag[name] = "point not on the path"
            return False
        # corners lo+1 and hi touch the marked edges; stay strictly inside
        if not lo + 1 < k < hi:
            diag[name] = f"corner index {k} not inside ({lo + 1}, {hi})"
            return False
        return True

    bf, one, tau = s.beta_f, s.one, s.tau
    checks["c2"] = between(l1, hp.sub(bf, one), bf, P1, "c2")
    tb = hp.add(bf, tau)
    checks["c3"] = between(l2, hp.sub(tb, one), tb, P2, "c3")

    i1, i2 = l3.corner_index.get(P1), l3.corner_index.get(P2)
    if i1 is None or i2 is None or i1 >= i2:
        diag["c4"] = "P1/P2 not ordered on the third path"
        return DomainReport(checks, diag), None, None
    two_one = hp.scale(one, 2)
    seg3 = l3.corners[i1:i2 + 1]
    seg4 = [hp.add(g, two_one) for g in seg3]
    Q1, R1 = _rotate(P1, bf), hp.add(P1, two_one)
    Q2, R2 = _rotate(P2, tb), hp.add(P2, two_one)
    checks["c4"] = not (set(seg3) & set(seg4))

    def corner_run(path, a, b):
        ia, ib = path.corner_index.get(a), path.corner_index.get(b)
        if ia is None or ib is None:
            return None
        return path.corners[min(ia, ib):max(ia, ib) + 1]

    run_q1r1 = corner_run(l1, Q1, R1)
    run_p1q1 = corner_run(l1, P1, Q1)
    if run_q1r1 is None or run_p1q1 is None:
        diag["c5"] = "Q1 or R1 not on the first path"
    else:
        checks["c5"] = not (_hexes_touching(seg3) & _hexes_touching(run_q1r1))
        checks["c6"] = not (_hexes_touching(seg4) & _hexes_touching(run_p1q1))

    n1, x1 = _nodes(l1)
    n2, x2 = _nodes(l2)
    n3, x3 = _nodes(l3)
    need1 = [P1, bf, Q1, hp.add(bf, one), R1]
    need2 = [P2, tb, Q2, hp.add(tb, one), R2]
    if any(p not in x1 for p in need1) or any(p not in x2 for p in need2):
        diag["c7"] = "corner or mark missing from its path"
        return DomainReport(checks, diag), None, None
    idx1 = [x1[p] for p in need1]
    idx2 = [x2[p] for p in need2]
    if idx1 != sorted(idx1) or idx2 != sorted(idx2) or len(set(idx1)) < 5 or len(set(idx2)) < 5:
        diag["c7"] = "corners out of order along the paths"
        return DomainReport(checks, diag), None, None
    j1, j2 = x3[P1], x3[P2]
    edges = [n1[idx1[k]:idx1[k + 1] + 1] for k in range(4)]
    edges.append([hp.add(p, two_one) for p in n3[j1:j2 + 1]])
    back2 = [n2[idx2[k]:idx2[k + 1] + 1][::-1] for k in range(3, -1, -1)]
    edges.extend(back2)
    edges.append(n3[j1:j2 + 1][::-1])
    corners = dict(zip(DECAGON_CORNERS, [e[0] for e in edges]))
    report = check_hex_boundary(s, edges, None)
    for k in ("c7", "c8", "area", "isotopy"):
        checks[k] = report.checks[k]
        if k in report.diagnostics:
            diag[k] = report.diagnostics[k]
    if "hexes" in report.diagnostics:
        diag["hexes"] = report.diagnostics["hexes"]
    return DomainReport(checks, diag), edges, corners


def _pairing_images(setup: HexSetup, edges):
    bf = setup.beta_f
    tb = hp.add(bf, setup.tau)
    two_one = hp.scale(setup.one, 2)
    centres = {1: bf, 3: hp.add(bf, setup.one), 6: hp.add(tb, setup.one), 8: tb}
    out = []
    for i, j, tag in DECAGON_PAIRING:
        if tag.startswith("rotation"):
            c = centres[i]
            img = [_rotate(p, c) for p in edges[i - 1]]
        else:
            img = [hp.add(p, two_one) for p in edges[j - 1]]
            i, j = j, i
        out.append((i, j, img))
    return out


def boundary_tedges(edges) -> list[tuple[Frame, Frame]]:
    """Directed T edges (corner to corner) of a boundary given as S' nodes."""
    cyc = [p for e in edges for p in e[:-1]]
    corners = [p for p in cyc if hp.is_corner(p)]
    return list(zip(corners, corners[1:] + corners[:1]))


def flood_hexes(tedges, limit: int) -> list[Frame] | None:
    """Hexagons enclosed by a counterclockwise closed T-edge curve."""
    if not tedges:
        return None
    blocked = set()
    for a, b in tedges:
        blocked.add(((a[0] + b[0]) // 2, (a[1] + b[1]) // 2))
    a, b = tedges[0]
    m = ((a[0] + b[0]) // 2, (a[1] + b[1]) // 2)
    if not hp.is_midpoint(m):
        return None
    c0, c1 = hp.edge_centers(m)
    seed = c0 if hp.cross(hp.sub(b, a), hp.sub(c0, a)) > 0 else c1
    seen = {seed}
    stack = [seed]
    while stack:
        c = stack.pop()
        for k in range(6):
            mid = hp.hex_midpoint(c, k)
            if mid in blocked:
                continue
            nb = hp.add(c, hp.CENTER_STEPS[k])
            if nb not in seen:
                seen.add(nb)
                if len(seen) > limit:
                    return None
                stack.append(nb)
    return sorted(seen)


def _winding(poly: list[Frame], p: Frame) -> int | None:
    """Winding number of a closed polygon around p; None if p is on it."""
    w = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        o = hp.cross(hp.sub(b, a), hp.sub(p, a))
        if o == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            return None
        if a[1] <= p[1] < b[1] and o > 0:
            w += 1
        elif b[1] <= p[1] < a[1] and o < 0:
            w -= 1
    return w


def _lattice_points_in_box(setup: HexSetup, lo: Frame, hi: Frame) -> list[Frame]:
    a, b, c, d = setup.matrix
    # frame = P @ M @ lam with P = [[3, 3], [-3, 3]]
    T = np.array([[3, 3], [-3, 3]], dtype=float) @ np.array([[a, b], [c, d]], dtype=float)
    inv = np.linalg.inv(T)
    corners = [inv @ np.array([x, y], dtype=float) for x in (lo[0], hi[0]) for y in (lo[1], hi[1])]
    xs = [v[0] for v in corners]
    ys = [v[1] for v in corners]
    out = []
    for x in range(int(np.floor(min(xs))) - 1, int(np.ceil(max(xs))) + 2):
        for y in range(int(np.floor(min(ys))) - 1, int(np.ceil(max(ys))) + 2):
            p = setup.lattice_frame((x, y))
            if lo[0] <= p[0] <= hi[0] and lo[1] <= p[1] <= hi[1]:
                out.append(p)
    return out


def _isotopy_ok(setup: HexSetup, edges) -> tuple[bool, str]:
    """Each boundary arc between consecutive marks, closed up by the straight
    segment between the marks, winds zero times around every other lattice
    point."""
    arcs = [(1, 2), (3, 4, 5), (6, 7), (8, 9, 0)]
    for arc in arcs:
        pts = []
        for k in arc:
            pts.extend(edges[k][:-1])
        pts.append(edges[arc[-1]][-1])
        start, end = pts[0], pts[-1]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        for q in _lattice_points_in_box(setup, (min(xs), min(ys)), (max(xs), max(ys))):
            if q in (start, end):
                continue
            w = _winding(pts, q)
            if w != 0:
                return False, f"arc starting at {start} {'passes through' if w is None else 'winds around'} {q}"
    return True, ""


def check_hex_boundary(setup: HexSetup, edges, hexes) -> DomainReport:
    """Checks that only need the ten boundary edges: simplicity, pairing,
    area and isotopy.  `hexes` (optional) is compared with the flood fill."""
    checks = {"c7": False, "c8": False, "area": False, "isotopy": False}
    diag = {}
    cyc = [p for e in edges for p in e[:-1]]
    joined = all(edges[k][-1] == edges[(k + 1) % 10][0] for k in range(10))
    corner_cycle = [p for p in cyc if hp.is_corner(p)]
    simple = joined and len(set(cyc)) == len(cyc)
    tedges = boundary_tedges(edges) if simple else []
    if simple:
        mids = [((a[0] + b[0]) // 2, (a[1] + b[1]) // 2) for a, b in tedges]
        simple = all(hp.is_midpoint(m) for m in mids) and len(set(mids)) == len(mids)
        # a marked midpoint on the boundary must sit on its own T edge
        for p, q in zip(cyc, cyc[1:] + cyc[:1]):
            if hp.is_corner(p) and hp.is_corner(q):
                m = ((p[0] + q[0]) // 2, (p[1] + q[1]) // 2)
                if hp.is_marked_midpoint(m):
                    simple = False
    checks["c7"] = simple
    if not simple:
        diag["c7"] = "boundary is not a simple closed T-edge curve"
    del corner_cycle

    pairs_ok = True
    for i, j, img in _pairing_images(setup, edges):
        if img != edges[j - 1][::-1]:
            pairs_ok = False
            diag.setdefault("c8", f"edge {i} does not map onto edge {j}")
    checks["c8"] = pairs_ok

    if simple:
        # counterclockwise orientation: positive signed area
        area2 = sum(hp.cross(p, q) for p, q in zip(cyc, cyc[1:] + cyc[:1]))
        deg = degree(setup.matrix)
        found = flood_hexes(tedges, 4 * deg + 20) if area2 > 0 else None
        if found is None:
            diag["area"] = "boundary is clockwise or does not enclose a bounded region"
        else:
            checks["area"] = len(found) == deg
            if hexes is not None and sorted(hexes) != found:
                checks["area"] = False
                diag["area"] = "stored subtiles differ from the enclosed hexagons"
            elif len(found) != deg:
                diag["area"] = f"{len(found)} subtiles, degree {deg}"
            diag["hexes"] = found
        ok, why = _isotopy_ok(setup, edges)
        checks["isotopy"] = ok
        if why:
            diag["isotopy"] = why
    return DomainReport(checks, diag)


SIDE_CHOICES = [(1, 1, 1)] + [s for s in product((1, -1), repeat=3) if s != (1, 1, 1)]


def _is_exceptional(M: MultiplierMatrix) -> bool:
    return M.c == 1 and M.a in (0, 1, 2)


def build_hex_domain(M, beta, sides=None) -> FundamentalDomain:
    M = MultiplierMatrix(*M)
    if not satisfies_mx(M):
        raise ValueError(f"{tuple(M)} violates the normalization inequalities")
    # degree 2 sits below any construction threshold; running the checks
    # there documents which ones fail instead of refusing outright
    if _is_exceptional(M) and degree(M) > 2:
        raise ExceptionalAlpha(f"alpha = {M.a} + tau: use build_from_template")
    setup = HexSetup.of(M, beta)
    choices = [tuple(sides)] if sides is not None else SIDE_CHOICES
    first_report = None
    for choice in choices:
        l1, l2, l3 = _trace_lines(setup, choice)
        p1, p2 = _choose_p1_p2(l1, l2, l3)
        lc = LineConstruction(setup, choice, l1, l2, l3, p1, p2)
        report, edges, corners = evaluate_lines(lc)
        if first_report is None:
            first_report = report
        if report.ok:
            return _hex_domain(setup, edges, corners, report.diagnostics["hexes"],
                               {"construction": lc, "report": report})
    raise ValidityCheckFailed(first_report)


def _hex_domain(setup: HexSetup, edges, corners, hexes, data) -> FundamentalDomain:
    marks = {k: corners[k] for k in ("beta", "1+beta", "1+tau+beta", "tau+beta")}
    corner_pts = {k: corners[k] for k in ("P1", "Q1", "R1", "R2", "Q2", "P2")}
    data = dict(data)
    data["setup"] = setup
    return FundamentalDomain("hex", setup.matrix, setup.beta, edges, corner_pts, marks,
                             list(DECAGON_PAIRING), list(hexes), data)


def verify_domain(d: FundamentalDomain) -> DomainReport:
    if d.kind == "hex":
        lc = d.data.get("construction")
        if lc is not None:
            return evaluate_lines(lc)[0]
        report = check_hex_boundary(d.data["setup"], d.boundary, d.subtiles)
        report.checks["orbits"] = _one_per_orbit(d.data["setup"], d.subtiles)
        return report
    if d.kind == "parallelogram":
        return _verify_parallelogram(d)
    if d.kind == "two_tile":
        return _verify_two_tile(d)
    raise ValueError(f"unknown domain kind {d.kind!r}")


def with_p1(d: FundamentalDomain, p1: Frame) -> FundamentalDomain:
    """Copy of a line-built domain with P1 replaced (for failure experiments)."""
    lc = replace(d.data["construction"], p1=p1)
    data = dict(d.data)
    data["construction"] = lc
    return replace(d, data=data)


def gamma_orbit_key(setup: HexSetup, c: Frame) -> Frame:
    """Canonical representative of a hexagon centre under z -> +-z + 2 psi(lambda)."""
    a, b, cc, d = setup.matrix
    # sublattice 2 psi(Lambda) in frame coordinates: columns 2*P*M e_i
    v1 = hp.scale(hp.psi_frame(a, cc), 2)
    v2 = hp.scale(hp.psi_frame(b, d), 2)
    det = hp.cross(v1, v2)

    def reduce(p):
        # coordinates of p in (v1, v2), floored
        s = Fraction(hp.cross(p, v2), det)
        t = Fraction(hp.cross(v1, p), det)
        fs, ft = s.numerator // s.denominator, t.numerator // t.denominator
        return (p[0] - fs * v1[0] - ft * v2[0], p[1] - fs * v1[1] - ft * v2[1])
    return min(reduce(c), reduce(hp.neg(c)))


def _one_per_orbit(setup: HexSetup, hexes) -> bool:
    keys = [gamma_orbit_key(setup, c) for c in hexes]
    return len(set(keys)) == len(keys) == degree(setup.matrix)


# ================================================================ hex rules

def _subtile_start(c: Frame) -> int:
    """Hexagon corner that plays the role of P1: 2 when the hexagon is a
    translate of the base hexagon, 5 when it is a rotated copy."""
    u, w = hp.center_index(c)
    return 2 if (u + w) % 2 == 0 else 5


def subtile_word_points(c: Frame) -> list[Frame]:
    """The ten S' vertices of a hexagon in the order of the tile word."""
    k0 = _subtile_start(c)
    v = lambda k: hp.hex_corner(c, k0 + k)  # noqa: E731
    m = lambda k: hp.hex_midpoint(c, k0 + k)  # noqa: E731
    return [v(0), m(1), v(1), m(2), v(2), v(3), m(4), v(4), m(5), v(5)]


def _class_label(cls_) -> str:
    return hp.PostcriticalClass(*cls_).label


def _hex_rule(d: FundamentalDomain) -> SubdivisionRule:
    setup: HexSetup = d.data["setup"]
    bx, by = setup.beta
    edges = d.boundary
    local: dict[Frame, int] = {}
    for e in edges:
        local.setdefault(e[0], len(local))
    edge_vertices = []
    for i, e in enumerate(edges):
        for p in e[1:-1]:
            local[p] = len(local)
    for i, e in enumerate(edges):
        edge_vertices.append([local[p] for p in e])
    interior = set()
    for c in d.subtiles:
        interior.update(subtile_word_points(c))
    for p in sorted(interior - set(local)):
        local[p] = len(local)
    n = len(local)
    points = [None] * n
    for p, i in local.items():
        points[i] = p

    def f_class(p):
        if hp.is_marked_midpoint(p):
            q1, q2 = hp.frame_to_psi(p)
            return _class_label(((q1 + bx) % 2, (q2 + by) % 2))
        return None

    vertex_classes = [f_class(p) for p in points]
    corner_classes = [None] * 10
    for pos, name in ((1, "beta"), (3, "1+beta"), (6, "1+tau+beta"), (8, "tau+beta")):
        lam = {"beta": (0, 0), "1+beta": (1, 0), "tau+beta": (0, 1), "1+tau+beta": (1, 1)}[name]
        corner_classes[pos] = _class_label(((bx + lam[0]) % 2, (by + lam[1]) % 2))

    subtiles = []
    label_of = {}
    for c in d.subtiles:
        pts = subtile_word_points(c)
        ids = [local[p] for p in pts]
        for pos in (1, 3, 6, 8):
            if vertex_classes[ids[pos]] != corner_classes[pos]:
                raise AnchoringError(f"subtile at {c}: mark {pos} has class "
                                     f"{vertex_classes[ids[pos]]}, tile corner has {corner_classes[pos]}")
        subtiles.append(Subtile("T", ids))
        for pos in range(10):
            label_of[(ids[pos], ids[(pos + 1) % 10])] = DECAGON_WORD[pos]
    seqs = {}
    for pos, (e, o) in enumerate(DECAGON_WORD):
        if o != 1:
            continue
        ev = edge_vertices[pos]
        seq = []
        for x, y in zip(ev, ev[1:]):
            if (x, y) not in label_of:
                raise AnchoringError(f"boundary sub-edge {points[x]}-{points[y]} has no subtile")
            seq.append(label_of[(x, y)])
        seqs[e] = seq
    tile = TileType("T", list(DECAGON_WORD), n, edge_vertices, subtiles,
                    vertex_classes, corner_classes)
    pairings = [(f"T:{i - 1}", f"T:{j - 1}", tag) for i, j, tag in DECAGON_PAIRING]
    rule = SubdivisionRule({e: seqs[e] for e in "ABCDE"}, {"T": tile}, pairings,
                           _hex_geometry(setup, points, d.subtiles),
                           name=f"hex {tuple(setup.matrix)} beta={setup.beta}")
    return rule


_FRAME_TO_CART = np.array([[1 / 6, 1 / 12], [0.0, 3 ** 0.5 / 12]])
_CART_TO_FRAME = np.linalg.inv(_FRAME_TO_CART)


def _hex_geometry(setup: HexSetup, points, hexes) -> dict:
    a, b, c, d = setup.matrix
    P = np.array([[3.0, 3.0], [-3.0, 3.0]])
    Minv = np.linalg.inv(np.array([[a, b], [c, d]], dtype=float))
    A = P @ Minv @ np.linalg.inv(P)
    base = np.array(setup.beta_f, dtype=float)
    maps = []
    for cen in hexes:
        eps = 1.0 if _subtile_start(cen) == 2 else -1.0
        shift = np.array(cen, dtype=float) - eps * np.array([3.0, 0.0])
        lin = eps * A
        trans = shift - lin @ base
        Lc = _FRAME_TO_CART @ lin @ _CART_TO_FRAME
        tc = _FRAME_TO_CART @ trans
        maps.append(_affine_list(Lc, tc))
    return {"tiles": {"T": {"vertices": [_round_pt(hp.frame_to_cartesian(p)) for p in points]}},
            "maps": {"T": maps}}


def _affine_list(L, t) -> list[float]:
    return [round(float(v), 15) for v in (L[0, 0], L[0, 1], L[1, 0], L[1, 1], t[0], t[1])]


def _round_pt(p) -> list[float]:
    return [round(float(p[0]), 15), round(float(p[1]), 15)]


# ================================================================ parallelogram

PARALLELOGRAM_WORD = [("A", 1), ("A", -1), ("C", 1), ("B", 1), ("B", -1), ("C", -1)]
PARALLELOGRAM_PAIRING = [(1, 2, "rotation about c+u"), (4, 5, "rotation about c+u+v"),
                         (3, 6, "translation by 2u")]
_SHAPES = [((1, 0), (0, 1)), ((0, 1), (-1, 0)), ((1, 0), (1, 1))]
_OFFSETS = [(0, 0), (1, 0), (0, 1), (1, 1)]


def _in_span(p, u, v) -> tuple[int, int] | None:
    """Integer (i, j) with p = 2 i u + j v, or None."""
    det = u[0] * v[1] - u[1] * v[0]
    s = Fraction(p[0] * v[1] - p[1] * v[0], 2 * det)
    t = Fraction(u[0] * p[1] - u[1] * p[0], det)
    if s.denominator == 1 and t.denominator == 1:
        return int(s), int(t)
    return None


def parallelogram_shape(n: int, beta) -> tuple:
    """(u, v, c, (i0, j0)) with (n-1) c + beta = 2 i0 u + j0 v."""
    for u, v in _SHAPES:
        for c in _OFFSETS:
            p = ((n - 1) * c[0] + beta[0], (n - 1) * c[1] + beta[1])
            ij = _in_span(p, u, v)
            if ij is not None:
                return u, v, c, ij
    raise AssertionError("no parallelogram placement found")


def build_parallelogram_domain(n: int, tau: TauValue | None = None, beta=(0, 0)) -> FundamentalDomain:
    if n < 2:
        raise ValueError("nonrigid maps need n >= 2")
    if tau is None:
        from .exact import QuadExt
        tau = TauValue(QuadExt(-1, 0, 1))
    beta = (int(beta[0]) % 2, int(beta[1]) % 2)
    u, v, c, (i0, j0) = parallelogram_shape(n, beta)

    def at(k, l):
        # lattice point c + (k u + l v)/n in tile coordinates, scaled by n
        return (n * c[0] + k * u[0] + l * v[0], n * c[1] + k * u[1] + l * v[1])
    corner_grid = [(0, 0), (n, 0), (2 * n, 0), (2 * n, n), (n, n), (0, n)]
    paths = [((0, 0), (1, 0)), ((n, 0), (1, 0)), ((2 * n, 0), (0, 1)),
             ((2 * n, n), (-1, 0)), ((n, n), (-1, 0)), ((0, n), (0, -1))]
    boundary = []
    for (k0, l0), (dk, dl) in paths:
        boundary.append([(k0 + s * dk, l0 + s * dl) for s in range(n + 1)])
    cells = []
    for l in range(n):
        for i in range(n):
            rotated = (l + j0) % 2 == 1
            cells.append((2 * i, l, rotated))
    data = {"n": n, "tau": tau, "u": u, "v": v, "c": c, "offset": (i0, j0), "at": at}
    corners = dict(zip(("c", "c+u", "c+2u", "c+2u+v", "c+u+v", "c+v"), corner_grid))
    marks = {"c+u": (n, 0), "c+u+v": (n, n)}
    return FundamentalDomain("parallelogram", MultiplierMatrix.scalar(n), beta, boundary,
                             corners, marks, list(PARALLELOGRAM_PAIRING), cells, data)


def _cell_points(k: int, l: int, rotated: bool) -> list[tuple[int, int]]:
    pts = [(k, l), (k + 1, l), (k + 2, l), (k + 2, l + 1), (k + 1, l + 1), (k, l + 1)]
    return pts[3:] + pts[:3] if rotated else pts


def _verify_parallelogram(d: FundamentalDomain) -> DomainReport:
    n = d.data["n"]
    covered = set()
    overlap = False
    for k, l, rot in d.subtiles:
        for x in range(k, k + 2):
            if (x, l) in covered:
                overlap = True
            covered.add((x, l))
    full = covered == {(x, l) for x in range(2 * n) for l in range(n)}
    u, v, c, _ = d.data["u"], d.data["v"], d.data["c"], d.data["offset"]
    p = ((n - 1) * c[0] + d.beta[0], (n - 1) * c[1] + d.beta[1])
    checks = {"count": len(d.subtiles) == n * n, "cover": full and not overlap,
              "union_of_tiles": _in_span(p, u, v) is not None}
    return DomainReport(checks)


def _parallelogram_rule(d: FundamentalDomain) -> SubdivisionRule:
    n = d.data["n"]
    u, v, c = d.data["u"], d.data["v"], d.data["c"]
    bx, by = d.beta
    local: dict = {}
    for e in d.boundary:
        local.setdefault(e[0], len(local))
    for e in d.boundary:
        for p in e[1:-1]:
            local[p] = len(local)
    edge_vertices = [[local[p] for p in e] for e in d.boundary]
    for l in range(n + 1):
        for k in range(2 * n + 1):
            if (k, l) not in local:
                local[(k, l)] = len(local)
    points = sorted(local, key=local.get)

    def f_class(p):
        k, l = p
        x = n * c[0] + k * u[0] + l * v[0] + bx
        y = n * c[1] + k * u[1] + l * v[1] + by
        return _class_label((x % 2, y % 2))
    vertex_classes = [f_class(p) for p in points]
    corner_classes = vertex_classes[:6]
    subtiles = []
    label_of = {}
    for k, l, rot in d.subtiles:
        ids = [local[p] for p in _cell_points(k, l, rot)]
        subtiles.append(Subtile("P", ids))
        for pos in range(6):
            label_of[(ids[pos], ids[(pos + 1) % 6])] = PARALLELOGRAM_WORD[pos]
    seqs = {}
    for pos, (e, o) in enumerate(PARALLELOGRAM_WORD):
        if o == 1 and e not in seqs:
            ev = edge_vertices[pos]
            seqs[e] = [label_of[(x, y)] for x, y in zip(ev, ev[1:])]
    tile = TileType("P", list(PARALLELOGRAM_WORD), len(points), edge_vertices, subtiles,
                    vertex_classes, corner_classes)
    pairings = [(f"P:{i - 1}", f"P:{j - 1}", tag) for i, j, tag in PARALLELOGRAM_PAIRING]
    tau = complex(d.data["tau"].tau)
    cu = complex(u[0] + u[1] * tau.real, u[1] * tau.imag)
    cv = complex(v[0] + v[1] * tau.real, v[1] * tau.imag)
    cc = complex(c[0] + c[1] * tau.real, c[1] * tau.imag)

    def pos(p):
        z = cc + (p[0] * cu + p[1] * cv) / n
        return [round(z.real, 15), round(z.imag, 15)]
    maps = []
    for k, l, rot in d.subtiles:
        # z -> c + s (z - c)/n + offset, s = +-1
        s = -1.0 if rot else 1.0
        anchor = _cell_points(k, l, rot)[0]
        target = complex(*pos(anchor))
        L = np.array([[s / n, 0.0], [0.0, s / n]])
        t = np.array([target.real, target.imag]) - L @ np.array([cc.real, cc.imag])
        maps.append(_affine_list(L, t))
    geometry = {"tiles": {"P": {"vertices": [pos(p) for p in points]}}, "maps": {"P": maps}}
    return SubdivisionRule({e: seqs[e] for e in "ABC"}, {"P": tile}, pairings, geometry,
                           name=f"parallelogram n={n} beta={d.beta}")


# ================================================================ templates

def _template_text(name: str) -> str:
    if name not in TEMPLATE_NAMES:
        raise UnknownTemplate(name)
    path = resources.files("lattes_fsr") / "data" / "templates" / f"{name}.json"
    return path.read_text()


def build_from_template(name: str) -> FundamentalDomain:
    obj = json.loads(_template_text(name))
    if obj.get("schema_version") != 1:
        raise ValueError(f"template {name} has unsupported schema_version")
    if obj["kind"] == "hex":
        return hex_domain_from_hexes(obj["matrix"], obj["beta"],
                                     [tuple(c) for c in obj["hexes"]],
                                     {k: tuple(v) for k, v in obj["corners"].items()},
                                     name=name)
    if obj["kind"] == "two_tile":
        return _two_tile_domain(obj)
    raise ValueError(f"template {name} has unknown kind {obj['kind']!r}")


def hex_boundary_cycle(hexes) -> list[Frame] | None:
    """Counterclockwise corner cycle bounding a union of hexagons, if it is a
    single simple curve."""
    hexset = set(hexes)
    succ = {}
    for c in hexset:
        for k in range(6):
            if hp.add(c, hp.CENTER_STEPS[k]) in hexset:
                continue
            a, b = hp.hex_corner(c, k - 1), hp.hex_corner(c, k)
            if a in succ:
                return None
            succ[a] = b
    if not succ:
        return None
    start = min(succ)
    cyc = [start]
    while True:
        nxt = succ[cyc[-1]]
        if nxt == start:
            break
        if len(cyc) > len(succ):
            return None
        cyc.append(nxt)
    return cyc if len(cyc) == len(succ) else None


def split_cycle(cycle: list[Frame], corners: dict, setup: HexSetup):
    """Cut a corner cycle (with marked midpoints inserted) at the ten decagon
    corners.  None when some corner is missing or out of order."""
    nodes = []
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        nodes.append(a)
        m = ((a[0] + b[0]) // 2, (a[1] + b[1]) // 2)
        if hp.is_marked_midpoint(m):
            nodes.append(m)
    full = dict(corners)
    for name in ("beta", "1+beta", "tau+beta", "1+tau+beta"):
        full[name] = setup.mark(name)
    where = {p: i for i, p in enumerate(nodes)}
    if any(full[k] not in where for k in DECAGON_CORNERS):
        return None
    idx = [where[full[k]] for k in DECAGON_CORNERS]
    shift = idx[0]
    rel = [(i - shift) % len(nodes) for i in idx]
    if rel != sorted(rel) or len(set(rel)) != 10:
        return None
    rot = nodes[shift:] + nodes[:shift]
    edges = []
    for k in range(10):
        lo = rel[k]
        hi = rel[k + 1] if k < 9 else len(nodes)
        edges.append(rot[lo:hi + 1] if k < 9 else rot[lo:] + [rot[0]])
    return edges


def decagon_corners_for(hexes, setup: HexSetup) -> dict | None:
    """Find P1, P2 on a hexagon union's boundary making the ten-edge pairing
    work; the remaining corners are their images."""
    cyc = hex_boundary_cycle(hexes)
    if cyc is None:
        return None
    cyc_set = set(cyc)
    bf, tb = setup.beta_f, setup.mark("tau+beta")
    two_one = hp.scale(setup.one, 2)
    for p1 in cyc:
        q1, r1 = _rotate(p1, bf), hp.add(p1, two_one)
        if q1 not in cyc_set or r1 not in cyc_set:
            continue
        for p2 in cyc:
            if p2 == p1:
                continue
            q2, r2 = _rotate(p2, tb), hp.add(p2, two_one)
            if q2 not in cyc_set or r2 not in cyc_set:
                continue
            corners = {"P1": p1, "Q1": q1, "R1": r1, "P2": p2, "Q2": q2, "R2": r2}
            edges = split_cycle(cyc, corners, setup)
            if edges is None:
                continue
            if check_hex_boundary(setup, edges, None).checks["c8"]:
                return corners
    return None


def hex_domain_from_hexes(M, beta, hexes, corners=None, name: str = "") -> FundamentalDomain:
    M = MultiplierMatrix(*M)
    setup = HexSetup.of(M, tuple(beta))
    if corners is None:
        corners = decagon_corners_for(hexes, setup)
        if corners is None:
            raise ValidityCheckFailed(DomainReport({"c7": False, "c8": False}),
                                      "no decagon structure on this hexagon set")
    cyc = hex_boundary_cycle(hexes)
    edges = split_cycle(cyc, corners, setup) if cyc else None
    if edges is None:
        raise ValidityCheckFailed(DomainReport({"c7": False}), "corners not on the boundary")
    allc = dict(zip(DECAGON_CORNERS, [e[0] for e in edges]))
    d = _hex_domain(setup, edges, allc, sorted(hexes), {"template": name})
    report = verify_domain(d)
    if not report.ok:
        raise ValidityCheckFailed(report)
    d.data["report"] = report
    return d


# ---------------------------------------------------------------- two tiles

def _two_tile_domain(obj: dict) -> FundamentalDomain:
    rule = SubdivisionRule.from_json_obj(obj["rule"])
    d = FundamentalDomain("two_tile", MultiplierMatrix(*obj["matrix"]), tuple(obj["beta"]),
                          [[tuple(p) for p in e] for e in obj["boundary"]],
                          {k: tuple(v) for k, v in obj["corners"].items()},
                          {k: tuple(v) for k, v in obj["marks"].items()},
                          [tuple(p) for p in obj["pairing"]],
                          [tuple(tuple(p) for p in poly) for poly in obj["pieces"]],
                          {"rule": rule, "identity": obj.get("identity", "")})
    return d


def _verify_two_tile(d: FundamentalDomain) -> DomainReport:
    from .fsr import validate_rule, sphere_complex
    rule = d.data["rule"]
    problems = validate_rule(rule)
    sc = sphere_complex(rule)
    checks = {"rule": not problems, "sphere": sc.is_sphere(),
              "area": _two_tile_area_ok(d)}
    return DomainReport(checks, {"rule": "; ".join(problems)} if problems else {})


def _two_tile_area_ok(d: FundamentalDomain) -> bool:
    """The pieces tile the parallelogram spanned by the first and last
    boundary edges, whose area (in lattice units) is twice the covolume."""
    total = Fraction(0)
    for poly in d.subtiles:
        pts = [tuple(Fraction(x) for x in p) for p in poly]
        total += sum(p[0] * q[1] - p[1] * q[0] for p, q in zip(pts, pts[1:] + pts[:1])) / 2
    return total == 2


# ================================================================ extraction

def extract_rule(d: FundamentalDomain) -> SubdivisionRule:
    if d.kind == "hex":
        return _hex_rule(d)
    if d.kind == "parallelogram":
        return _parallelogram_rule(d)
    if d.kind == "two_tile":
        return d.data["rule"]
    raise ValueError(f"unknown domain kind {d.kind!r}")


def lattes_rule(M, beta) -> SubdivisionRule:
    """Rule for any map: parallelogram for n*I, otherwise the line
    construction or a bundled template."""
    M = MultiplierMatrix(*M)
    if M.is_scalar():
        return extract_rule(build_parallelogram_domain(M.a, beta=beta))
    if _is_exceptional(M):
        for name in TEMPLATE_NAMES:
            obj = json.loads(_template_text(name))
            if tuple(obj["matrix"]) == tuple(M) and tuple(obj["beta"]) == tuple(beta):
                return extract_rule(build_from_template(name))
        raise ExceptionalAlpha(f"no bundled template for {tuple(M)} beta={tuple(beta)}")
    return extract_rule(build_hex_domain(M, beta))


def tau_alpha(M) -> tuple:
    return tau_from_matrix(MultiplierMatrix(*M))
