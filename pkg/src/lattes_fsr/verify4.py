"""Numerical check of the quadratic Lattès map with multiplier (1 + sqrt(-7))/2.

f(z) = (A z^2 + B)/(z^2 + 1) with 2A^4 - A^2 + 1 = 0 and B = -A(2A^2 + 1).
Points of the sphere are handled projectively as pairs (z, w) so that
infinity is an ordinary point.  Everything here is double precision with
fixed tolerances.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx
import numpy as np

TOL = 1e-9
ALPHA = complex(0.5, 7 ** 0.5 / 2)
INF = (1 + 0j, 0j)


class OrbitNotClosed(RuntimeError):
    pass


def point(z) -> tuple[complex, complex]:
    """Projective point for a complex number, or INF for None/inf."""
    if z is None or (isinstance(z, (float, complex)) and cmath.isinf(z)):
        return INF
    return (complex(z), 1 + 0j)


def chordal(p, q) -> float:
    """Chordal distance between two projective points."""
    (a, b), (c, d) = p, q
    num = abs(a * d - b * c)
    den = (abs(a) ** 2 + abs(b) ** 2) ** 0.5 * (abs(c) ** 2 + abs(d) ** 2) ** 0.5
    return num / den


def finite(p) -> complex | None:
    z, w = p
    if abs(w) < 1e-14 * max(1.0, abs(z)):
        return None
    return z / w


@dataclass(frozen=True)
class QuadraticForm:
    """Degree-2 rational map [P(z, w) : Q(z, w)] with P, Q homogeneous
    quadratics given as coefficients of (z^2, zw, w^2)."""
    num: tuple
    den: tuple

    def __call__(self, p):
        z, w = p
        mono = (z * z, z * w, w * w)
        out = (sum(c * m for c, m in zip(self.num, mono)),
               sum(c * m for c, m in zip(self.den, mono)))
        scale = max(abs(out[0]), abs(out[1]))
        if scale == 0:
            raise ZeroDivisionError("P and Q share a zero")
        return (out[0] / scale, out[1] / scale)

    def critical_points(self) -> list:
        """Zeros of the Jacobian P_z Q_w - P_w Q_z (homogeneous of degree 2)."""
        p2, p1, p0 = self.num
        q2, q1, q0 = self.den
        # P_z = 2 p2 z + p1 w, P_w = p1 z + 2 p0 w, likewise for Q
        pz, pw = np.array([2 * p2, p1]), np.array([p1, 2 * p0])
        qz, qw = np.array([2 * q2, q1]), np.array([q1, 2 * q0])
        jac = np.convolve(pz, qw) - np.convolve(pw, qz)  # coefficients of z^2, zw, w^2
        nonzero = np.flatnonzero(np.abs(jac) > 1e-14)
        if nonzero.size == 0:
            raise ValueError("map is degenerate")
        lead = nonzero[0]
        pts = [INF] * int(lead)
        pts.extend(point(r) for r in np.roots(jac[lead:]))
        return pts


class QuadraticLattesMap(NamedTuple):
    A: complex
    B: complex
    branch: str

    @property
    def form(self) -> QuadraticForm:
        return QuadraticForm((self.A, 0, self.B), (1, 0, 1))


def solve_coefficients(branch: str = "plus") -> QuadraticLattesMap:
    if branch not in ("plus", "minus"):
        raise ValueError("branch is 'plus' or 'minus'")
    sign = 1 if branch == "plus" else -1
    A = cmath.sqrt((1 + sign * cmath.sqrt(-7)) / 4)
    # one Newton step on 2A^4 - A^2 + 1
    A -= (2 * A ** 4 - A ** 2 + 1) / (8 * A ** 3 - 2 * A)
    B = -A * (2 * A * A + 1)
    return QuadraticLattesMap(A, B, branch)


def evaluate(f: QuadraticLattesMap, z):
    """f at z (complex, None or inf for infinity); infinity comes back as None."""
    return finite(f.form(point(z)))


class MappingScheme(NamedTuple):
    nodes: dict  # name -> projective point
    arrows: list  # (source, target, local degree)

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.nodes)
        for s, t, k in self.arrows:
            g.add_edge(s, t, degree=k)
        return g


def _scheme(F: QuadraticForm, names: dict | None = None) -> MappingScheme:
    names = names or {}
    nodes: dict = {}

    def name_of(p):
        for n, q in nodes.items():
            if chordal(p, q) < 1e-8:
                return n
        for n, q in names.items():
            if chordal(p, q) < 1e-8:
                nodes[n] = q
                return n
        n = f"p{len(nodes)}"
        nodes[n] = p
        return n

    crit = F.critical_points()
    crit_names = {name_of(c) for c in crit}
    arrows = {}
    for c in crit:
        p = c
        for _ in range(8):
            src = name_of(p)
            q = F(p)
            dst = name_of(q)
            if src in arrows:
                break
            arrows[src] = (dst, 2 if src in crit_names else 1)
            p = q
        else:
            raise OrbitNotClosed("critical orbit did not close within 8 steps")
        if name_of(p) not in arrows:
            raise OrbitNotClosed("critical orbit did not close within 8 steps")
    return MappingScheme(nodes, [(s, t, k) for s, (t, k) in sorted(arrows.items())])


def reference_scheme() -> nx.DiGraph:
    """Critical points infinity and 0 map by degree 2 to A and B, which map
    to the fixed points X and Y."""
    g = nx.DiGraph()
    for s, t, k in (("inf", "A", 2), ("0", "B", 2), ("A", "X", 1), ("B", "Y", 1),
                    ("X", "X", 1), ("Y", "Y", 1)):
        g.add_edge(s, t, degree=k)
    return g


def _isomorphic(g: nx.DiGraph) -> bool:
    return nx.is_isomorphic(g, reference_scheme(),
                            edge_match=lambda a, b: a["degree"] == b["degree"])


def mapping_scheme(f: QuadraticLattesMap) -> MappingScheme:
    names = {"inf": INF, "0": point(0), "A": point(f.A), "B": point(f.B),
             "X": point(-f.A), "Y": point(-f.B)}
    return _scheme(f.form, names)


def scheme_matches(f: QuadraticLattesMap) -> bool:
    try:
        return _isomorphic(mapping_scheme(f).graph())
    except OrbitNotClosed:
        return False


def milnor_form(alpha: complex) -> QuadraticForm:
    """z (z + alpha^2) / (alpha^2 z + 1)."""
    a2 = alpha * alpha
    return QuadraticForm((1, a2, 0), (0, a2, 1))


def milnor_equiv(alpha: complex = ALPHA) -> bool:
    F = milnor_form(alpha)
    try:
        scheme = _scheme(F, {"inf": INF, "0": point(0)})
    except (OrbitNotClosed, ZeroDivisionError, ValueError):
        return False
    g = scheme.graph()
    if not _isomorphic(g):
        return False
    # 0 and infinity must be the fixed postcritical points
    return all(g.has_edge(n, n) for n in ("0", "inf"))


def preimages(f: QuadraticLattesMap, target: complex) -> list[complex]:
    """Solutions of f(z) = target: (A - t) z^2 = t - B."""
    return list(np.roots([f.A - target, 0, f.B - target]))


class CheckRow(NamedTuple):
    name: str
    residual: float
    passed: bool


def verify_quadratic(tol: float = TOL, seed: int = 0) -> list[CheckRow]:
    rows = []

    def add(name, residual):
        rows.append(CheckRow(name, float(residual), residual < tol))

    for branch in ("plus", "minus"):
        f = solve_coefficients(branch)
        A, B = f.A, f.B
        alpha = ALPHA if branch == "plus" else ALPHA.conjugate()
        add(f"{branch}: 2A^4 - A^2 + 1", abs(2 * A ** 4 - A ** 2 + 1))
        add(f"{branch}: B + A(2A^2 + 1)", abs(B + A * (2 * A * A + 1)))
        add(f"{branch}: 2A^2 - alpha", abs(2 * A * A - alpha))
        F = f.form
        add(f"{branch}: f(inf) = A", chordal(F(INF), point(A)))
        add(f"{branch}: f(0) = B", chordal(F(point(0)), point(B)))
        add(f"{branch}: f(A) = X = -A", chordal(F(point(A)), point(-A)))
        add(f"{branch}: f(B) = Y = -B", chordal(F(point(B)), point(-B)))
        add(f"{branch}: f(X) = X", chordal(F(point(-A)), point(-A)))
        add(f"{branch}: f(Y) = Y", chordal(F(point(-B)), point(-B)))
        crit = F.critical_points()
        add(f"{branch}: critical points are 0 and inf",
            max(min(chordal(c, point(0)), chordal(c, INF)) for c in crit))
        add(f"{branch}: mapping scheme matches", 0.0 if scheme_matches(f) else 1.0)
        rng = np.random.default_rng(seed)
        worst = 0.0
        for t in rng.normal(size=100) + 1j * rng.normal(size=100):
            roots = preimages(f, t)
            worst = max(worst, max(abs(evaluate(f, z) - t) for z in roots))
            if len(roots) != 2 or abs(roots[0] - roots[1]) < 1e-6:
                worst = max(worst, 1.0)
        add(f"{branch}: two preimages of 100 random points", worst)
    add("Milnor form for alpha", 0.0 if milnor_equiv(ALPHA) else 1.0)
    add("Milnor form for conjugate alpha", 0.0 if milnor_equiv(ALPHA.conjugate()) else 1.0)
    return rows


def format_table(rows: list[CheckRow]) -> str:
    width = max(len(r.name) for r in rows)
    lines = [f"{r.name:<{width}}  {r.residual:.3e}  {'PASS' if r.passed else 'FAIL'}" for r in rows]
    return "\n".join(lines)
