"""The hexagon tiling, its dual triangulation, the lattice embedding onto
edge midpoints, and edge path approximations of lines.

Internally everything runs in an integer frame: the pair (X, Y) stands for
the point (X*a1 + Y*a2)/6 with a1 = (1, 0) and a2 = (1/2, sqrt3/2).  In that
frame

* hexagon centres (vertices of the dual triangulation) are (6u+3, 6w),
* hexagon corners (triangle centroids) are (6u+5, 6w+2) and (6u+1, 6w+4),
* edge midpoints are (6u+6, 6w), (6u+3, 6w+3) and (6u, 6w+3),

so every predicate reduces to integer arithmetic.  The frame is orientation
preserving, hence orientation signs agree with the Cartesian ones.  The
public functions that the rest of the world sees still speak PlanePoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

from .exact import (CROSSES_INTERIOR, TOUCHES_ENDPOINT, ExactLine, PlanePoint,
                    QuadExt, segment_crosses_line)
from .lattes import MultiplierMatrix

Frame = tuple[int, int]

# neighbouring hexagon centres, counterclockwise starting at angle 0
CENTER_STEPS: tuple[Frame, ...] = ((6, 0), (0, 6), (-6, 6), (-6, 0), (0, -6), (6, -6))

UP_CORNERS = ((-2, -2), (4, -2), (-2, 4))
DOWN_CORNERS = ((2, 2), (2, -4), (-4, 2))


class WindowTooSmall(ValueError):
    pass


class InconsistentConstraints(ValueError):
    pass


class DegeneratePosition(ValueError):
    """The line passes through an endpoint of the dual edge."""

    kind = TOUCHES_ENDPOINT


# ---------------------------------------------------------------- frame basics

def add(p: Frame, q: Frame) -> Frame:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Frame, q: Frame) -> Frame:
    return (p[0] - q[0], p[1] - q[1])


def neg(p: Frame) -> Frame:
    return (-p[0], -p[1])


def scale(p: Frame, k: int) -> Frame:
    return (p[0] * k, p[1] * k)


def cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def dot(p, q):
    """Euclidean inner product of two frame vectors, times 72."""
    return 2 * p[0] * q[0] + p[0] * q[1] + p[1] * q[0] + 2 * p[1] * q[1]


def frame_to_cartesian(p) -> tuple[float, float]:
    x, y = p
    return (float(x) / 6 + float(y) / 12, float(y) * 3 ** 0.5 / 12)


def frame_to_plane(p) -> PlanePoint:
    x, y = (Fraction(v) for v in p)
    return PlanePoint(QuadExt(3, x / 6 + y / 12, 0), QuadExt(3, 0, y / 12))


def plane_to_frame(pt: PlanePoint) -> tuple[Fraction, Fraction]:
    """Inverse of frame_to_plane; the point must have x rational and y in Q*sqrt3."""
    if pt.px.y != 0 or pt.py.x != 0:
        raise ValueError(f"{pt} is not representable in the lattice frame")
    Y = 12 * pt.py.y
    X = 6 * pt.px.x - Y / 2
    return X, Y


def _as_int_frame(p) -> Frame:
    x, y = p
    if Fraction(x).denominator != 1 or Fraction(y).denominator != 1:
        raise ValueError(f"{p} is not an integer frame point")
    return (int(x), int(y))


def is_center(p: Frame) -> bool:
    return p[0] % 6 == 3 and p[1] % 6 == 0


def is_corner(p: Frame) -> bool:
    return (p[0] % 6, p[1] % 6) in ((5, 2), (1, 4))


def is_up_corner(p: Frame) -> bool:
    return (p[0] % 6, p[1] % 6) == (5, 2)


def midpoint_direction(m: Frame) -> int | None:
    """0, 1 or 2 for an edge midpoint, None otherwise."""
    r = (m[0] % 6, m[1] % 6)
    return {(0, 0): 0, (3, 3): 1, (0, 3): 2}.get(r)


def is_midpoint(p: Frame) -> bool:
    return midpoint_direction(p) is not None


def is_marked_midpoint(m: Frame) -> bool:
    """Midpoints in psi of the scaled lattice: both coordinates divisible
    by 3 with an even sum of thirds."""
    return m[0] % 3 == 0 and m[1] % 3 == 0 and (m[0] // 3 + m[1] // 3) % 2 == 0


# half vectors of a T edge (corner to corner) and of its dual (centre to centre)
_EDGE_HALF = {0: (1, -2), 1: (2, -1), 2: (1, 1)}
_DUAL_HALF = {0: (3, 0), 1: (0, 3), 2: (-3, 3)}


def edge_corners(m: Frame) -> tuple[Frame, Frame]:
    h = _EDGE_HALF[midpoint_direction(m)]
    return sub(m, h), add(m, h)


def edge_centers(m: Frame) -> tuple[Frame, Frame]:
    h = _DUAL_HALF[midpoint_direction(m)]
    return sub(m, h), add(m, h)


def hex_center(u: int, w: int) -> Frame:
    return (6 * u + 3, 6 * w)


def center_index(c: Frame) -> tuple[int, int]:
    return ((c[0] - 3) // 6, c[1] // 6)


def hex_corner(c: Frame, k: int) -> Frame:
    """Corner k sits at angle 30 + 60k degrees."""
    d1 = CENTER_STEPS[k % 6]
    d2 = CENTER_STEPS[(k + 1) % 6]
    return (c[0] + (d1[0] + d2[0]) // 3, c[1] + (d1[1] + d2[1]) // 3)


def hex_midpoint(c: Frame, k: int) -> Frame:
    """Midpoint of edge k, which runs from corner k-1 to corner k."""
    d = CENTER_STEPS[k % 6]
    return (c[0] + d[0] // 2, c[1] + d[1] // 2)


def hex_corners(c: Frame) -> list[Frame]:
    return [hex_corner(c, k) for k in range(6)]


def hex_midpoints(c: Frame) -> list[Frame]:
    return [hex_midpoint(c, k) for k in range(6)]


def triangle_corners(g: Frame) -> list[Frame]:
    steps = UP_CORNERS if is_up_corner(g) else DOWN_CORNERS
    return [add(g, s) for s in steps]


def corner_hexes(g: Frame) -> list[Frame]:
    """The three hexagons meeting at a corner."""
    return triangle_corners(g)


def corner_midpoints(g: Frame) -> list[Frame]:
    a, b, c = triangle_corners(g)
    return [((a[0] + b[0]) // 2, (a[1] + b[1]) // 2),
            ((b[0] + c[0]) // 2, (b[1] + c[1]) // 2),
            ((c[0] + a[0]) // 2, (c[1] + a[1]) // 2)]


def psi_frame(p: int, q: int) -> Frame:
    return (3 * (p + q), 3 * (q - p))


def frame_to_psi(m: Frame) -> tuple[int, int]:
    """Inverse of psi_frame on marked midpoints."""
    if not is_marked_midpoint(m):
        raise ValueError(f"{m} is not a marked midpoint")
    s, t = m[0] // 3, m[1] // 3
    return ((s - t) // 2, (s + t) // 2)


# ---------------------------------------------------------------- public types

class TriVertex(NamedTuple):
    u: int
    w: int

    def frame(self) -> Frame:
        return hex_center(self.u, self.w)

    def to_plane(self) -> PlanePoint:
        return frame_to_plane(self.frame())


class GridEdge(NamedTuple):
    base: TriVertex
    dir: int

    def midpoint_frame(self) -> Frame:
        c = self.base.frame()
        return hex_midpoint(c, (0, 1, 2)[self.dir])

    def midpoint(self) -> PlanePoint:
        return frame_to_plane(self.midpoint_frame())

    def dual_segment(self) -> tuple[PlanePoint, PlanePoint]:
        c = self.base.frame()
        return frame_to_plane(c), frame_to_plane(add(c, CENTER_STEPS[self.dir]))

    @classmethod
    def from_midpoint(cls, m: Frame) -> GridEdge:
        d = midpoint_direction(m)
        if d is None:
            raise ValueError(f"{m} is not an edge midpoint")
        step = CENTER_STEPS[d]
        c = (m[0] - step[0] // 2, m[1] - step[1] // 2)
        return cls(TriVertex(*center_index(c)), d)


class MarkedLatticePoint(NamedTuple):
    p: int
    q: int

    def frame(self) -> Frame:
        return psi_frame(self.p, self.q)


def psi_embed(p: int, q: int) -> PlanePoint:
    """p*m1 + q*m2 with m1 = (1/4, -sqrt3/4), m2 = (3/4, sqrt3/4)."""
    return PlanePoint(QuadExt(3, Fraction(p + 3 * q, 4), 0),
                      QuadExt(3, 0, Fraction(q - p, 4)))


def marked_midpoints(h: TriVertex) -> list[PlanePoint]:
    c = TriVertex(*h).frame()
    return [frame_to_plane(m) for m in hex_midpoints(c) if is_marked_midpoint(m)]


def line_crosses_dual(line: ExactLine, e: GridEdge) -> bool:
    s0, s1 = GridEdge(*e).dual_segment()
    verdict = segment_crosses_line(line, s0, s1)
    if verdict == TOUCHES_ENDPOINT:
        raise DegeneratePosition("line passes through a vertex of the dual edge")
    return verdict == CROSSES_INTERIOR


# ---------------------------------------------------------------- the group

class PostcriticalClass(NamedTuple):
    x: int
    y: int

    @property
    def label(self) -> str:
        return {(0, 0): "0", (1, 0): "1", (0, 1): "tau", (1, 1): "1+tau"}[(self.x, self.y)]


def gamma_reduce(lam) -> PostcriticalClass:
    x, y = lam
    return PostcriticalClass(x % 2, y % 2)


def lattice_to_psi(M: MultiplierMatrix, lam) -> tuple[int, int]:
    """psi-coordinates of a point of the lattice: lambda = alpha^-1 (alpha lambda)."""
    return MultiplierMatrix(*M).apply(lam)


class GammaElement(NamedTuple):
    """z -> sign*z + 2*lam, with lam in the lattice given in the basis (1, tau)."""
    sign: int
    lam: tuple
    matrix: MultiplierMatrix

    def shift_frame(self) -> Frame:
        p, q = lattice_to_psi(self.matrix, self.lam)
        return scale(psi_frame(p, q), 2)

    def apply_frame(self, x) -> Frame:
        s = self.shift_frame()
        return (self.sign * x[0] + s[0], self.sign * x[1] + s[1])


def gamma_apply(g: GammaElement, x: PlanePoint) -> PlanePoint:
    p, q = lattice_to_psi(g.matrix, g.lam)
    shift = psi_embed(2 * p, 2 * q)
    base = x if g.sign == 1 else PlanePoint(-x.px, -x.py)
    return base + shift


# ---------------------------------------------------------------- line tracing

SideRule = Callable[[Fraction], int]


def global_side(s: int) -> SideRule:
    return lambda t: s


def alternating_side(s: int) -> SideRule:
    """Side s for parameters in (0,1) mod 2, -s for (1,2) mod 2.  Rotation by
    pi about a lattice point at an integer parameter swaps the two, which is
    exactly what keeps the traced path invariant under those rotations."""
    def rule(t: Fraction) -> int:
        if t.denominator == 1:
            raise AssertionError("a hexagon centre sits on a lattice point")
        return s if (t.numerator // t.denominator) % 2 == 0 else -s
    return rule


@dataclass(frozen=True)
class FrameLine:
    """Line through base2/2 with direction `direction` (frame units)."""
    base2: Frame
    direction: Frame
    side_rule: SideRule = field(default=global_side(1), compare=False)

    @classmethod
    def through(cls, base: Frame, direction: Frame, side_rule: SideRule | None = None,
                doubled: bool = False) -> FrameLine:
        b2 = base if doubled else scale(base, 2)
        return cls(b2, direction, side_rule or global_side(1))

    def offset(self, p: Frame) -> int:
        return cross(self.direction, (2 * p[0] - self.base2[0], 2 * p[1] - self.base2[1]))

    def param2(self, p) -> int:
        """2*72*|D|^2 times the line parameter of the projection of p."""
        return dot((2 * p[0] - self.base2[0], 2 * p[1] - self.base2[1]), self.direction)

    def param(self, p) -> Fraction:
        return Fraction(self.param2(p), 2 * dot(self.direction, self.direction))

    def side(self, v: Frame) -> int:
        o = self.offset(v)
        if o:
            return 1 if o > 0 else -1
        return self.side_rule(self.param(v))

    def translated(self, shift: Frame) -> FrameLine:
        return FrameLine((self.base2[0] + 2 * shift[0], self.base2[1] + 2 * shift[1]),
                         self.direction, self.side_rule)


@dataclass
class FramePath:
    """An edge path in traversal order: corners[i] -- mids[i] -- corners[i+1]."""
    corners: list
    mids: list

    def __post_init__(self):
        self.corner_index = {g: i for i, g in enumerate(self.corners)}
        self.mid_index = {m: i for i, m in enumerate(self.mids)}

    def translated(self, shift: Frame) -> FramePath:
        return FramePath([add(g, shift) for g in self.corners],
                         [add(m, shift) for m in self.mids])

    def node_run(self, i: int, j: int) -> list[Frame]:
        """S' vertices from corner i to corner j (either direction), marked
        midpoints of the traversed edges included."""
        out = [self.corners[i]]
        step = 1 if j >= i else -1
        k = i
        while k != j:
            m = self.mids[k] if step == 1 else self.mids[k - 1]
            if is_marked_midpoint(m):
                out.append(m)
            k += step
            out.append(self.corners[k])
        return out


def _crossed_mids(line: FrameLine, g: Frame) -> list[Frame]:
    cs = triangle_corners(g)
    sides = [line.side(c) for c in cs]
    out = []
    for i in range(3):
        a, b = cs[i], cs[(i + 1) % 3]
        if sides[i] != sides[(i + 1) % 3]:
            out.append(((a[0] + b[0]) // 2, (a[1] + b[1]) // 2))
    return out


def _start_corner(line: FrameLine) -> Frame:
    bx, by = line.base2[0] // 2, line.base2[1] // 2
    best = None
    for dx in range(-12, 13):
        for dy in range(-12, 13):
            g = (bx + dx, by + dy)
            if not is_corner(g):
                continue
            if len(_crossed_mids(line, g)) != 2:
                continue
            d = sub(scale(g, 2), line.base2)
            key = (dot(d, d), g)
            if best is None or key < best:
                best = key
    if best is None:
        raise WindowTooSmall("no triangle near the base point meets the line")
    return best[1]


def trace_line(line: FrameLine, t_lo: Fraction, t_hi: Fraction,
               max_steps: int = 100000) -> FramePath:
    """Walk triangle to triangle along the (perturbed) line, covering at
    least the parameter range [t_lo, t_hi]."""
    start = _start_corner(line)
    ma, mb = _crossed_mids(line, start)
    if line.param2(ma) > line.param2(mb):
        fwd, back = ma, mb
    else:
        fwd, back = mb, ma
    denom = 2 * dot(line.direction, line.direction)

    def walk(g, m, beyond):
        corners, mids = [], []
        for _ in range(max_steps):
            mids.append(m)
            g = (2 * m[0] - g[0], 2 * m[1] - g[1])
            corners.append(g)
            if beyond(Fraction(line.param2(m), denom)):
                return corners, mids
            nxt = [x for x in _crossed_mids(line, g) if x != m]
            if len(nxt) != 1:
                raise AssertionError("edge path approximation is not a path")
            m = nxt[0]
        raise WindowTooSmall("line walk did not leave the window")

    fc, fm = walk(start, fwd, lambda t: t > t_hi)
    bc, bm = walk(start, back, lambda t: t < t_lo)
    corners = bc[::-1] + [start] + fc
    mids = bm[::-1] + fm
    return FramePath(corners, mids)


# ---------------------------------------------------------------- public path

@dataclass
class EdgePath:
    path: FramePath
    anchors: list
    window: tuple

    @property
    def edges(self) -> list[GridEdge]:
        return [GridEdge.from_midpoint(m) for m in self.path.mids]

    def contains(self, pt: MarkedLatticePoint) -> bool:
        return MarkedLatticePoint(*pt).frame() in self.path.mid_index

    def is_simple(self) -> bool:
        return len(set(self.path.corners)) == len(self.path.corners)


def edge_path_approximation(line: ExactLine, window, must_contain: Sequence = (),
                            symmetry: Sequence[GammaElement] = (),
                            side: int = 1) -> EdgePath:
    """Edge path approximation of `line` over the parameter range covered by
    the box `window` = (lower-left, upper-right) PlanePoints.

    Lines through hexagon centres are resolved symbolically.  When anchors
    or rotation centres give lattice points on the line, the side choice
    alternates between consecutive such points so that the order-2
    rotations about them preserve the path.
    """
    b0 = plane_to_frame(line.p0)
    b1 = plane_to_frame(line.p1)
    direction = (b1[0] - b0[0], b1[1] - b0[1])
    den = 1
    for v in (*b0, *direction):
        den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
    # rescaling the direction does not move the line; the base needs integer doubling
    direction = (int(direction[0] * den), int(direction[1] * den))
    b2 = (2 * b0[0], 2 * b0[1])
    if Fraction(b2[0]).denominator != 1 or Fraction(b2[1]).denominator != 1:
        raise ValueError("line base point is not a half-integer frame point")
    probe = FrameLine((int(b2[0]), int(b2[1])), direction)

    anchors = [MarkedLatticePoint(*p) for p in must_contain]
    centres = [a.frame() for a in anchors]
    for g in symmetry:
        if g.sign == -1:
            s = g.shift_frame()
            centres.append((s[0] // 2, s[1] // 2))
    for c in centres:
        if probe.offset(c) != 0:
            raise InconsistentConstraints(f"{c} is not on the line")
    centres = sorted(set(centres), key=probe.param)

    rule = global_side(side)
    if len(centres) >= 2:
        gaps = [probe.param(q) - probe.param(p) for p, q in zip(centres, centres[1:])]
        k = min(range(len(gaps)), key=lambda i: gaps[i])
        origin, step = centres[k], sub(centres[k + 1], centres[k])
        ln = FrameLine.through(origin, step, alternating_side(side))
    elif len(centres) == 1:
        ln = FrameLine.through(centres[0], direction, global_side(side))
    else:
        ln = FrameLine(probe.base2, direction, rule)

    lo, hi = window
    params = []
    for x in (lo.px.x, hi.px.x):
        for y in (lo.py.y, hi.py.y):
            params.append(ln.param(plane_to_frame(PlanePoint(QuadExt(3, x, 0), QuadExt(3, 0, y)))))
    t_lo, t_hi = min(params), max(params)
    # one hexagon diameter (2/sqrt3) of slack, compared squared
    margin_sq = Fraction(96, dot(ln.direction, ln.direction))
    for c in centres:
        t = ln.param(c)
        if t - t_lo < 0 or t_hi - t < 0 or min(t - t_lo, t_hi - t) ** 2 < margin_sq:
            raise WindowTooSmall(f"anchor {c} lies within one hexagon of the window edge")
    path = trace_line(ln, t_lo, t_hi)
    for a in anchors:
        if a.frame() not in path.mid_index:
            raise InconsistentConstraints(f"anchor {tuple(a)} is not on the path")
    for g in symmetry:
        if not path_invariant(path, ln, g.apply_frame):
            raise InconsistentConstraints(f"path not invariant under {g.sign}, {g.lam}")
    return EdgePath(path, anchors, (lo, hi))


def path_invariant(path: FramePath, ln: FrameLine, move: Callable[[Frame], Frame]) -> bool:
    """Every traced edge whose image still lies in the traced parameter range
    must map to a traced edge."""
    ts = [ln.param(m) for m in path.mids]
    lo, hi = min(ts), max(ts)
    have = path.mid_index
    for m in path.mids:
        img = move(m)
        if img in have:
            continue
        if lo < ln.param(img) < hi:
            return False
    return True


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a
