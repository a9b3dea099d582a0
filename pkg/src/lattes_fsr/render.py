"""Deterministic SVG output for rules, iterated subdivisions and domains.

Exact data is rounded only here.  Element order follows the input order, and
numbers are printed at a fixed precision, so equal inputs give equal bytes.
"""

from __future__ import annotations

from fractions import Fraction

from . import hexplane as hp
from .fsr import SubdivisionRule
from .fundom import FundamentalDomain, subtile_word_points

IDENTITY = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)
TILE_STYLE = 'fill="#f4f1e8" stroke="#333333" stroke-width="{w}"'
BOUNDARY_STYLE = 'fill="none" stroke="#b02020" stroke-width="{w}"'


class EmptyRender(ValueError):
    pass


def compose(f, g):
    """Affine map f after g, both as (a, b, c, d, e, f)."""
    a1, b1, c1, d1, e1, f1 = f
    a2, b2, c2, d2, e2, f2 = g
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2,
            a1 * e2 + b1 * f2 + e1, c1 * e2 + d1 * f2 + f1)


def apply(m, p):
    a, b, c, d, e, f = m
    return (a * p[0] + b * p[1] + e, c * p[0] + d * p[1] + f)


def _num(v: float, precision: int) -> str:
    s = f"{v:.{precision}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "", "-") else s


def svg_document(polygons, paths=(), dots=(), precision: int = 12) -> str:
    """polygons: closed point lists; paths: open point lists drawn on top;
    dots: points.  The y axis is flipped so the picture is upright."""
    pts = [p for poly in polygons for p in poly] + [p for path in paths for p in path] + list(dots)
    if not pts:
        raise EmptyRender("nothing to draw")
    xs = [p[0] for p in pts]
    ys = [-p[1] for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    pad = 0.05 * span
    w = span / 400
    n = lambda v: _num(v, precision)  # noqa: E731
    view = (min(xs) - pad, min(ys) - pad, max(xs) - min(xs) + 2 * pad, max(ys) - min(ys) + 2 * pad)
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{" ".join(n(v) for v in view)}">']

    def d_attr(seq, close):
        body = " L ".join(f"{n(x)} {n(-y)}" for x, y in seq)
        return f"M {body}{' Z' if close else ''}"
    for poly in polygons:
        out.append(f'<path class="tile" d="{d_attr(poly, True)}" {TILE_STYLE.format(w=n(w))}/>')
    for path in paths:
        out.append(f'<path class="boundary" d="{d_attr(path, False)}" {BOUNDARY_STYLE.format(w=n(3 * w))}/>')
    for x, y in dots:
        out.append(f'<circle class="mark" cx="{n(x)}" cy="{n(-y)}" r="{n(4 * w)}" fill="#000000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _tile_outline(rule: SubdivisionRule, tile_id: str) -> list[int]:
    T = rule.tile_types[tile_id]
    return [v for ev in T.edge_vertices for v in ev[:-1]]


def rule_polygons(rule: SubdivisionRule, level: int) -> tuple[list, list]:
    """Level-n tiles of every tile type drawn in the tile's own coordinates,
    plus the marked corners of the top-level tiles."""
    geo = rule.geometry
    if not geo:
        raise EmptyRender("rule has no geometry section")
    verts = {t: [tuple(p) for p in g["vertices"]] for t, g in geo["tiles"].items()}
    maps = {t: [tuple(m) for m in ms] for t, ms in geo["maps"].items()}
    polys = []
    dots = []
    for tid, T in rule.tile_types.items():
        for pos, cls_ in enumerate(T.corner_classes):
            if cls_ is not None:
                dots.append(verts[tid][_tile_outline(rule, tid)[_corner_index(T, pos)]])
        if level == 0:
            polys.append([verts[tid][i] for i in _tile_outline(rule, tid)])
            continue
        # tiles one level above the bottom, as (tile id, map into top tile)
        frontier = [(tid, IDENTITY)]
        for _ in range(level - 1):
            nxt = []
            for t, m in frontier:
                for s, sm in zip(rule.tile_types[t].subtiles, maps[t]):
                    nxt.append((s.tile, compose(m, sm)))
            frontier = nxt
        for t, m in frontier:
            for s in rule.tile_types[t].subtiles:
                polys.append([apply(m, verts[t][i]) for i in s.boundary_image])
    return polys, dots


def _corner_index(T, pos: int) -> int:
    """Offset of corner `pos` in the outline list."""
    return sum(len(ev) - 1 for ev in T.edge_vertices[:pos])


def render_rule(rule: SubdivisionRule, level: int, precision: int = 12) -> str:
    polys, dots = rule_polygons(rule, level)
    return svg_document(polys, dots=dots, precision=precision)


def render_domain(d: FundamentalDomain, precision: int = 12) -> str:
    if d.kind == "hex":
        polys = [[hp.frame_to_cartesian(p) for p in subtile_word_points(c) if hp.is_corner(p)]
                 for c in d.subtiles]
        paths = [[hp.frame_to_cartesian(p) for p in e] for e in d.boundary]
        dots = [hp.frame_to_cartesian(p) for p in d.marks.values()]
    elif d.kind == "parallelogram":
        tau = complex(d.data["tau"].tau)
        n = d.data["n"]

        def cart(kl):
            x, y = d.data["at"](*kl)
            z = (x + y * tau) / n
            return (z.real, z.imag)
        polys = []
        for k, l, _ in d.subtiles:
            polys.append([cart(p) for p in ((k, l), (k + 2, l), (k + 2, l + 1), (k, l + 1))])
        paths = [[cart(p) for p in e] for e in d.boundary]
        dots = [cart(p) for p in d.marks.values()]
    elif d.kind == "two_tile":
        alpha = complex(0.5, 7 ** 0.5 / 2)

        def cart(p):
            z = float(Fraction(p[0])) + float(Fraction(p[1])) * alpha
            return (z.real, z.imag)
        polys = [[cart(p) for p in poly] for poly in d.subtiles]
        paths = [[cart(p) for p in e] for e in d.boundary]
        dots = [cart(p) for p in d.marks.values()]
    else:
        raise ValueError(f"unknown domain kind {d.kind!r}")
    return svg_document(polys, paths, dots, precision)

