"""Finite subdivision rules as combinatorial data.

A rule has edge types, each with a subdivision sequence of (edge type,
orientation) pairs, and tile types.  A tile type is a k-gon with a cyclic
boundary word and a subdivided copy of itself: local vertex ids 0..k-1 are
the corners, then come the points inside the boundary edges (edge by edge),
then interior points.  `edge_vertices[i]` lists the local ids along edge i
from corner i to corner i+1, and every subtile names its tile type and the
local ids of its corners in counterclockwise order.

Orientation convention: the pair (e, +1) at boundary position i means the
tile traverses its edge i (corner i to corner i+1) in the positive direction
of edge type e.  In a CellComplex every edge is stored tail -> head along the
positive direction of its type, and a face dart (edge, o) means the face
walks the edge tail -> head iff o = +1.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import NamedTuple

SCHEMA_VERSION = 1


class RuleError(ValueError):
    pass


# ---------------------------------------------------------------- data types

@dataclass
class Subtile:
    tile: str
    boundary_image: list[int]


@dataclass
class TileType:
    id: str
    boundary: list[tuple[str, int]]
    vertex_count: int
    edge_vertices: list[list[int]]
    subtiles: list[Subtile]
    vertex_classes: list = field(default_factory=list)
    corner_classes: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.boundary)

    def interior_gluings(self) -> list[tuple[int, int, int, int]]:
        """(subtile, position, subtile, position) for every interior edge."""
        boundary_pairs = set()
        for ev in self.edge_vertices:
            for x, y in zip(ev, ev[1:]):
                boundary_pairs.add(frozenset((x, y)))
        seen: dict[frozenset, tuple[int, int]] = {}
        out = []
        for si, s in enumerate(self.subtiles):
            B = s.boundary_image
            for p in range(len(B)):
                key = frozenset((B[p], B[(p + 1) % len(B)]))
                if key in boundary_pairs:
                    continue
                if key in seen:
                    out.append((*seen.pop(key), si, p))
                else:
                    seen[key] = (si, p)
        return out


@dataclass
class SubdivisionRule:
    edge_types: dict[str, list[tuple[str, int]]]
    tile_types: dict[str, TileType]
    pairings: list[tuple[str, str, str]] = field(default_factory=list)
    geometry: dict | None = None
    name: str = ""

    def degree(self) -> int:
        """Subtiles per tile, summed over tile types and divided by their count.
        For the rules built here this is the degree of the map."""
        total = sum(len(t.subtiles) for t in self.tile_types.values())
        return total // len(self.tile_types)

    # -- JSON

    def to_json_obj(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "edge_types": [
                {"id": e, "subdivision": [{"edge": x, "orient": o} for x, o in seq]}
                for e, seq in self.edge_types.items()],
            "pairings": [list(p) for p in self.pairings],
            "tile_types": [
                {"id": t.id,
                 "boundary": [{"edge": x, "orient": o} for x, o in t.boundary],
                 "vertex_count": t.vertex_count,
                 "edge_vertices": t.edge_vertices,
                 "subtiles": [{"tile": s.tile, "boundary_image": s.boundary_image}
                              for s in t.subtiles],
                 "interior_gluings": [list(g) for g in t.interior_gluings()],
                 "vertex_classes": t.vertex_classes,
                 "corner_classes": t.corner_classes}
                for t in self.tile_types.values()],
            "geometry": self.geometry,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=1)

    @classmethod
    def from_json_obj(cls, obj: dict) -> SubdivisionRule:
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise RuleError(f"unsupported schema_version {obj.get('schema_version')!r}")
        edges = {e["id"]: [(x["edge"], int(x["orient"])) for x in e["subdivision"]]
                 for e in obj["edge_types"]}
        tiles = {}
        for t in obj["tile_types"]:
            tiles[t["id"]] = TileType(
                t["id"], [(x["edge"], int(x["orient"])) for x in t["boundary"]],
                int(t["vertex_count"]), [list(ev) for ev in t["edge_vertices"]],
                [Subtile(s["tile"], list(s["boundary_image"])) for s in t["subtiles"]],
                list(t.get("vertex_classes", [])), list(t.get("corner_classes", [])))
        pairings = [tuple(p) for p in obj.get("pairings", [])]
        return cls(edges, tiles, pairings, obj.get("geometry"), obj.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> SubdivisionRule:
        return cls.from_json_obj(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, SubdivisionRule):
            return NotImplemented
        return self.to_json_obj() == other.to_json_obj()


# ---------------------------------------------------------------- complexes

@dataclass
class CellComplex:
    vertex_labels: list
    edges: list[tuple[int, int, str]]
    faces: list[tuple[str, list[tuple[int, int]]]]

    @property
    def V(self) -> int:
        return len(self.vertex_labels)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.faces)

    def euler(self) -> int:
        return self.V - self.E + self.F

    def dart_ends(self, dart) -> tuple[int, int]:
        eid, o = dart
        t, h, _ = self.edges[eid]
        return (t, h) if o == 1 else (h, t)

    def check(self) -> list[str]:
        """Face words close up and every edge has exactly two sides."""
        problems = []
        uses = defaultdict(list)
        for fi, (_, darts) in enumerate(self.faces):
            for i, d in enumerate(darts):
                a, b = self.dart_ends(d)
                nxt = self.dart_ends(darts[(i + 1) % len(darts)])
                if b != nxt[0]:
                    problems.append(f"face {fi} is not closed at position {i}")
                uses[d[0]].append(d[1])
        for eid in range(self.E):
            if sorted(uses[eid]) != [-1, 1]:
                problems.append(f"edge {eid} has sides {sorted(uses[eid])}")
        return problems

    def is_sphere(self) -> bool:
        return not self.check() and self.euler() == 2

    def adjacency(self) -> dict[int, list[int]]:
        adj = {v: [] for v in range(self.V)}
        for t, h, _ in self.edges:
            adj[t].append(h)
            adj[h].append(t)
        return adj

    def marked(self) -> set[int]:
        return {v for v, lab in enumerate(self.vertex_labels) if lab is not None}

    def to_json_obj(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "vertices": [{"id": i, "label": lab} for i, lab in enumerate(self.vertex_labels)],
            "edges": [{"tail": t, "head": h, "type": e} for t, h, e in self.edges],
            "faces": [{"tile": tile, "darts": [[e, o] for e, o in darts]}
                      for tile, darts in self.faces],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=1)

    @classmethod
    def from_json_obj(cls, obj: dict) -> CellComplex:
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise RuleError(f"unsupported schema_version {obj.get('schema_version')!r}")
        verts = sorted(obj["vertices"], key=lambda v: v["id"])
        return cls([v["label"] for v in verts],
                   [(int(e["tail"]), int(e["head"]), e["type"]) for e in obj["edges"]],
                   [(f["tile"], [(int(e), int(o)) for e, o in f["darts"]])
                    for f in obj.get("faces", [])])

    @classmethod
    def from_json(cls, text: str) -> CellComplex:
        return cls.from_json_obj(json.loads(text))


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _occurrences(r: SubdivisionRule) -> dict[str, list[tuple[str, int, int]]]:
    occ = defaultdict(list)
    for t in r.tile_types.values():
        for i, (e, o) in enumerate(t.boundary):
            occ[e].append((t.id, i, o))
    return occ


def sphere_complex(r: SubdivisionRule) -> CellComplex:
    """Glue one copy of each tile type along equal edge types."""
    occ = _occurrences(r)
    uf = _UnionFind()
    for e, places in occ.items():
        ends = []
        for tid, i, o in places:
            k = r.tile_types[tid].k
            a, b = (tid, i), (tid, (i + 1) % k)
            ends.append((a, b) if o == 1 else (b, a))
        for tail, head in ends[1:]:
            uf.union(ends[0][0], tail)
            uf.union(ends[0][1], head)
    corners = [(t.id, i) for t in r.tile_types.values() for i in range(t.k)]
    roots = sorted({uf.find(c) for c in corners}, key=lambda c: (list(r.tile_types).index(c[0]), c[1]))
    vid = {root: n for n, root in enumerate(roots)}
    labels = [None] * len(roots)
    for tid, i in corners:
        cls_ = r.tile_types[tid].corner_classes
        if cls_ and cls_[i] is not None:
            labels[vid[uf.find((tid, i))]] = cls_[i]
    edge_ids = {}
    edges = []
    for e in r.edge_types:
        if e not in occ:
            continue
        tid, i, o = occ[e][0]
        k = r.tile_types[tid].k
        a, b = vid[uf.find((tid, i))], vid[uf.find((tid, (i + 1) % k))]
        edge_ids[e] = len(edges)
        edges.append((a, b) + (e,) if o == 1 else (b, a, e))
    faces = []
    for t in r.tile_types.values():
        faces.append((t.id, [(edge_ids[e], o) for e, o in t.boundary]))
    return CellComplex(labels, edges, faces)


def subdivide(c: CellComplex, r: SubdivisionRule, n: int = 1) -> CellComplex:
    for _ in range(n):
        c = _subdivide_once(c, r)
    return c


def _subdivide_once(c: CellComplex, r: SubdivisionRule) -> CellComplex:
    labels = list(c.vertex_labels)
    edges: list[tuple[int, int, str]] = []
    chains = []
    for tail, head, e in c.edges:
        if e not in r.edge_types:
            raise RuleError(f"edge type {e!r} is not in the rule")
        seq = r.edge_types[e]
        pts = [tail]
        for _ in range(len(seq) - 1):
            labels.append(None)
            pts.append(len(labels) - 1)
        pts.append(head)
        ids = []
        for j, (e2, o2) in enumerate(seq):
            ids.append(len(edges))
            edges.append((pts[j], pts[j + 1], e2) if o2 == 1 else (pts[j + 1], pts[j], e2))
        chains.append((pts, ids))
    faces = []
    for tile, darts in c.faces:
        T = r.tile_types.get(tile)
        if T is None:
            raise RuleError(f"tile type {tile!r} is not in the rule")
        if len(darts) != T.k:
            raise RuleError(f"face of type {tile!r} has {len(darts)} sides, expected {T.k}")
        local = [None] * T.vertex_count
        pair_edge = {}
        for i, (eid, o) in enumerate(darts):
            pts, ids = chains[eid]
            if o != 1:
                pts, ids = pts[::-1], ids[::-1]
            ev = T.edge_vertices[i]
            if len(ev) != len(pts):
                raise RuleError(f"tile {tile!r} edge {i} length mismatch")
            for x, v in zip(ev, pts):
                if local[x] is not None and local[x] != v:
                    raise RuleError(f"tile {tile!r} corner mismatch at local {x}")
                local[x] = v
            for j in range(len(ev) - 1):
                pair_edge[frozenset((ev[j], ev[j + 1]))] = ids[j]
        for x in range(T.vertex_count):
            if local[x] is None:
                labels.append(T.vertex_classes[x] if T.vertex_classes else None)
                local[x] = len(labels) - 1
            elif x >= T.k and T.vertex_classes and labels[local[x]] is None:
                labels[local[x]] = T.vertex_classes[x]
        for s in T.subtiles:
            W = r.tile_types[s.tile].boundary
            B = s.boundary_image
            sd = []
            for p, (e2, o2) in enumerate(W):
                x, y = B[p], B[(p + 1) % len(B)]
                key = frozenset((x, y))
                if key not in pair_edge:
                    pair_edge[key] = len(edges)
                    edges.append((local[x], local[y], e2) if o2 == 1 else (local[y], local[x], e2))
                sd.append((pair_edge[key], o2))
            faces.append((s.tile, sd))
    return CellComplex(labels, edges, faces)


# ---------------------------------------------------------------- validation

def _boundary_labels(r: SubdivisionRule, T: TileType, i: int):
    """(type, orient) of each sub-edge of boundary edge i, in tile order."""
    e, o = T.boundary[i]
    seq = r.edge_types[e]
    if o == 1:
        return list(seq)
    return [(x, -oo) for x, oo in reversed(seq)]


def validate_rule(r: SubdivisionRule) -> list[str]:
    out: list[str] = []
    occ = _occurrences(r)
    for e in r.edge_types:
        signs = sorted(o for _, _, o in occ.get(e, []))
        if signs != [-1, 1]:
            out.append(f"edge type {e} occurs with orientations {signs}, expected one of each")
        for x, _ in r.edge_types[e]:
            if x not in r.edge_types:
                out.append(f"edge type {e} subdivides into unknown type {x}")
    bad_types = set()
    for e, places in occ.items():
        if e not in r.edge_types:
            out.append(f"unknown edge type {e}")
            bad_types.add(e)
            continue
        lengths = {(tid, i): len(r.tile_types[tid].edge_vertices[i]) - 1 for tid, i, _ in places}
        if len(set(lengths.values())) > 1 or any(v != len(r.edge_types[e]) for v in lengths.values()):
            names = ", ".join(f"{tid}:{i}" for tid, i in sorted(lengths))
            out.append(f"paired edges ({names}) of type {e} subdivide differently")
            bad_types.add(e)
    if out:
        return out
    for T in r.tile_types.values():
        out.extend(_validate_tile(r, T, bad_types))
    if out:
        return out
    base = sphere_complex(r)
    problems = base.check()
    if problems or base.euler() != 2:
        out.append(f"quotient complex is not a sphere: chi={base.euler()} {problems[:3]}")
        return out
    try:
        once = subdivide(base, r, 1)
    except RuleError as exc:
        out.append(f"subdivision failed: {exc}")
        return out
    problems = once.check()
    if problems or once.euler() != 2:
        out.append(f"subdivided complex is not a sphere: chi={once.euler()} {problems[:3]}")
    return out


def _validate_tile(r: SubdivisionRule, T: TileType, bad_types) -> list[str]:
    out = []
    tag = f"tile {T.id}"
    if T.k < 3:
        out.append(f"{tag}: boundary word has length {T.k}")
    if len(T.edge_vertices) != T.k:
        return out + [f"{tag}: edge_vertices has {len(T.edge_vertices)} entries"]
    if T.vertex_classes and len(T.vertex_classes) != T.vertex_count:
        out.append(f"{tag}: vertex_classes has wrong length")
    seen_boundary = set()
    expected = {}
    for i, ev in enumerate(T.edge_vertices):
        if ev[0] != i or ev[-1] != (i + 1) % T.k:
            out.append(f"{tag}: edge {i} does not run from corner {i} to corner {(i + 1) % T.k}")
        for x in ev[1:-1]:
            if x < T.k or x in seen_boundary:
                out.append(f"{tag}: edge {i} reuses local vertex {x}")
            seen_boundary.add(x)
        if T.boundary[i][0] in bad_types:
            continue
        for (x, y), lab in zip(zip(ev, ev[1:]), _boundary_labels(r, T, i)):
            expected[(x, y)] = lab
    covered = defaultdict(list)
    for si, s in enumerate(T.subtiles):
        sub = r.tile_types.get(s.tile)
        if sub is None:
            out.append(f"{tag}: subtile {si} has unknown type {s.tile}")
            continue
        B = s.boundary_image
        if len(B) != sub.k:
            out.append(f"{tag}: subtile {si} has {len(B)} corners, its type has {sub.k}")
            continue
        if any(not 0 <= x < T.vertex_count for x in B) or len(set(B)) != len(B):
            out.append(f"{tag}: subtile {si} has a bad boundary image")
            continue
        for p, lab in enumerate(sub.boundary):
            covered[frozenset((B[p], B[(p + 1) % len(B)]))].append((B[p], lab, si, p))
    for (x, y), lab in expected.items():
        uses = covered.pop(frozenset((x, y)), [])
        if len(uses) != 1:
            out.append(f"{tag}: boundary sub-edge {x}-{y} covered {len(uses)} times")
            continue
        start, got, si, p = uses[0]
        if start != x or got != lab:
            out.append(f"{tag}: boundary sub-edge {x}-{y} is {got} in subtile {si} "
                       f"position {p}, edge subdivision says {lab}")
    for key, uses in covered.items():
        if len(uses) != 2:
            out.append(f"{tag}: interior edge {sorted(key)} covered {len(uses)} times")
            continue
        (s0, (e0, o0), a, pa), (s1, (e1, o1), b, pb) = uses
        if s0 == s1 or e0 != e1 or o0 != -o1:
            out.append(f"{tag}: subtiles {a}:{pa} and {b}:{pb} glue {e0}{o0:+d} to {e1}{o1:+d}")
    V = T.vertex_count
    E = len(expected) + sum(1 for v in covered.values() if len(v) == 2)
    if V - E + len(T.subtiles) != 1 and not out:
        out.append(f"{tag}: subdivided tile is not a disk (chi = {V - E + len(T.subtiles)})")
    if not out:
        try:
            _tile_fans(T)
        except RuleError as exc:
            out.append(f"{tag}: {exc}")
    return out


# ---------------------------------------------------------------- condition 1

class Condition1Result(NamedTuple):
    ok: bool
    level: int | None
    lengths: dict


def condition1(r: SubdivisionRule, n_max: int = 10) -> Condition1Result:
    """Smallest n <= n_max at which every edge type splits into >= 2 edges."""
    lengths = {e: 1 for e in r.edge_types}
    for n in range(1, n_max + 1):
        lengths = {e: sum(lengths[x] for x, _ in seq) for e, seq in r.edge_types.items()}
        if all(v >= 2 for v in lengths.values()):
            return Condition1Result(True, n, lengths)
    return Condition1Result(False, None, lengths)


# ---------------------------------------------------------------- condition 2

class PairGraph(NamedTuple):
    vertices: list
    arcs: dict


class Condition2Result(NamedTuple):
    graph: PairGraph
    acyclic: bool
    witness: list | None


def _disjoint_positions(k: int):
    for i in range(k):
        for j in range(k):
            if i != j and (i - j) % k not in (1, k - 1):
                yield i, j


def _boundary_position(T: TileType) -> dict:
    where = {}
    for i, ev in enumerate(T.edge_vertices):
        for x, y in zip(ev, ev[1:]):
            where[frozenset((x, y))] = i
    return where


def pair_graph(r: SubdivisionRule) -> PairGraph:
    verts = [(t.id, i, j) for t in r.tile_types.values() for i, j in _disjoint_positions(t.k)]
    arcs = {v: set() for v in verts}
    for T in r.tile_types.values():
        where = _boundary_position(T)
        for s in T.subtiles:
            B = s.boundary_image
            k2 = len(B)
            inside = {}
            for p in range(k2):
                pos = where.get(frozenset((B[p], B[(p + 1) % k2])))
                if pos is not None:
                    inside[p] = pos
            for p3, e1 in inside.items():
                for p4, e2 in inside.items():
                    if (T.id, e1, e2) in arcs:
                        arcs[(T.id, e1, e2)].add((s.tile, p3, p4))
    return PairGraph(verts, {v: sorted(a) for v, a in arcs.items()})


def find_cycle(arcs: dict) -> list | None:
    """A directed cycle as a vertex list (first == last), or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in arcs}
    for root in arcs:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(arcs[root]))]
        path = [root]
        color[root] = GREY
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = BLACK
                stack.pop()
                path.pop()
                continue
            if color.get(nxt, BLACK) == GREY:
                return path[path.index(nxt):] + [nxt]
            if color.get(nxt) == WHITE:
                color[nxt] = GREY
                stack.append((nxt, iter(arcs[nxt])))
                path.append(nxt)
    return None


def condition2_acyclic(r: SubdivisionRule) -> Condition2Result:
    g = pair_graph(r)
    cyc = find_cycle(g.arcs)
    return Condition2Result(g, cyc is None, cyc)


class MeshVerdict(NamedTuple):
    ok: bool
    condition1: Condition1Result
    condition2: Condition2Result
    implication_confirmed: bool


def mesh_approaches_zero(r: SubdivisionRule, n_max: int = 10) -> MeshVerdict:
    c2 = condition2_acyclic(r)
    c1 = condition1(r, n_max)
    return MeshVerdict(c1.ok and c2.acyclic, c1, c2, c2.acyclic and c1.ok)


# ---------------------------------------------------------------- valence

class ValenceResult(NamedTuple):
    bounded: bool | None
    bound: int | None


def _corner_specs(T: TileType):
    """For each local id, the subtile corners (subtile index, position) there."""
    at = defaultdict(list)
    for si, s in enumerate(T.subtiles):
        for p, x in enumerate(s.boundary_image):
            at[x].append((si, p))
    return at


def _tile_fans(T: TileType) -> dict[int, list[tuple[str, int]]]:
    """Counterclockwise fan of subtile corners at every local vertex.  For
    boundary points the fan starts at the sub-edge pointing forward along the
    tile boundary and ends at the one pointing backward."""
    at = _corner_specs(T)
    nxt_on_boundary = {}
    prev_on_boundary = {}
    for ev in T.edge_vertices:
        for x, y in zip(ev, ev[1:]):
            nxt_on_boundary[x] = y
            prev_on_boundary[y] = x
    fans = {}
    for x in range(T.vertex_count):
        corners = at.get(x, [])
        if not corners:
            raise RuleError(f"local vertex {x} belongs to no subtile")
        by_out = {}
        for si, p in corners:
            B = T.subtiles[si].boundary_image
            by_out[B[(p + 1) % len(B)]] = (si, p)
        if x in nxt_on_boundary:
            cur = by_out.get(nxt_on_boundary[x])
            stop = prev_on_boundary[x]
        else:
            cur = corners[0]
            stop = None
        fan = []
        while cur is not None and len(fan) <= len(corners):
            si, p = cur
            fan.append(cur)
            B = T.subtiles[si].boundary_image
            back = B[p - 1]
            if back == stop or (stop is None and by_out.get(back) == fan[0]):
                break
            cur = by_out.get(back)
        if len(fan) != len(corners) or cur is None:
            raise RuleError(f"subtile corners at local vertex {x} do not form a fan")
        fans[x] = [(T.subtiles[si].tile, p) for si, p in fan]
    return fans


def _canonical(cycle) -> tuple:
    n = len(cycle)
    return min(tuple(cycle[i:] + cycle[:i]) for i in range(n))


def vertex_types(c: CellComplex) -> list[tuple]:
    """Counterclockwise cyclic list of (tile, corner) around each vertex."""
    dart_at = {}
    for fi, (_, darts) in enumerate(c.faces):
        for i, d in enumerate(darts):
            dart_at[d] = (fi, i)
    seen = set()
    per_vertex = {}
    for fi, (_, darts) in enumerate(c.faces):
        for j in range(len(darts)):
            if (fi, j) in seen:
                continue
            v = c.dart_ends(darts[j])[0]
            cyc = []
            cur = (fi, j)
            while cur not in seen:
                seen.add(cur)
                f, i = cur
                cyc.append((c.faces[f][0], i))
                eid, o = c.faces[f][1][i - 1]
                cur = dart_at[(eid, -o)]
            per_vertex.setdefault(v, []).append(cyc)
    return [_canonical(max(per_vertex[v], key=len)) for v in sorted(per_vertex)]


def bounded_valence(r: SubdivisionRule, cap: int = 50) -> ValenceResult:
    fans_by_tile = {t.id: _tile_fans(t) for t in r.tile_types.values()}
    corner_fan = {(tid, i): fans[i] for tid, fans in fans_by_tile.items()
                  for i in range(r.tile_types[tid].k)}
    start = set(vertex_types(sphere_complex(r)))
    for T in r.tile_types.values():
        bnd = {x for ev in T.edge_vertices for x in ev}
        for x in range(T.vertex_count):
            if x not in bnd:
                start.add(_canonical(fans_by_tile[T.id][x]))
    occ = _occurrences(r)
    for e, places in occ.items():
        plus = [(tid, i) for tid, i, o in places if o == 1]
        minus = [(tid, i) for tid, i, o in places if o == -1]
        L = len(r.edge_types[e])
        for tp, ip in plus:
            for tm, im in minus:
                for m in range(1, L):
                    left = fans_by_tile[tp][r.tile_types[tp].edge_vertices[ip][m]]
                    right = fans_by_tile[tm][r.tile_types[tm].edge_vertices[im][L - m]]
                    start.add(_canonical(left + right))
    known = set(start)
    queue = list(start)
    while queue:
        vt = queue.pop()
        img = _canonical([c for corner in vt for c in corner_fan[corner]])
        if img not in known:
            known.add(img)
            if len(known) > cap:
                return ValenceResult(None, None)
            queue.append(img)
    return ValenceResult(True, max(len(t) for t in known))


# ---------------------------------------------------------------- trees

class NotATree(ValueError):
    pass


def _check_tree(V: int, edges) -> dict[int, list[int]]:
    adj = {v: [] for v in range(V)}
    for t, h, _ in edges:
        adj[t].append(h)
        adj[h].append(t)
    if len(edges) != V - 1:
        raise NotATree(f"{V} vertices and {len(edges)} edges")
    seen = {0} if V else set()
    stack = [0] if V else []
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != V:
        raise NotATree("skeleton is disconnected")
    return adj


def prune(c: CellComplex, marked) -> CellComplex:
    """Smallest subtree spanning the marked vertices, with unmarked valence-2
    vertices smoothed away.  Faces are dropped: the result is a tree."""
    marked = set(marked)
    if not marked:
        raise ValueError("need at least one marked vertex")
    _check_tree(c.V, c.edges)
    alive = set(range(c.V))
    edges = {i: e for i, e in enumerate(c.edges)}

    def degree(v):
        return sum(1 for t, h, _ in edges.values() if v in (t, h))

    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if v in marked:
                continue
            if degree(v) <= 1 and len(alive) > 1:
                for i in [i for i, (t, h, _) in edges.items() if v in (t, h)]:
                    del edges[i]
                alive.discard(v)
                changed = True
        for v in sorted(alive):
            if v in marked:
                continue
            inc = [i for i, (t, h, _) in edges.items() if v in (t, h)]
            if len(inc) == 2:
                i, j = inc
                a = edges[i][0] if edges[i][1] == v else edges[i][1]
                b = edges[j][0] if edges[j][1] == v else edges[j][1]
                kind = edges[i][2]
                del edges[i], edges[j]
                edges[min(i, j)] = (a, b, kind)
                alive.discard(v)
                changed = True
    order = sorted(alive)
    new_id = {v: n for n, v in enumerate(order)}
    labels = [c.vertex_labels[v] if v in marked else None for v in order]
    for v in order:
        if v in marked and labels[new_id[v]] is None:
            labels[new_id[v]] = "marked"
    new_edges = [(new_id[t], new_id[h], e) for _, (t, h, e) in sorted(edges.items())]
    return CellComplex(labels, new_edges, [])


def classify_tree(c: CellComplex, marked=None) -> int:
    """Shape of a pruned tree with four marked vertices:
    1 path, 2 three-star with marked centre, 3 four-star with unmarked centre,
    4 three-star with unmarked centre and a marked valence-2 vertex,
    5 H-shaped tree with two unmarked valence-3 vertices."""
    marked = c.marked() if marked is None else set(marked)
    if len(marked) != 4:
        raise ValueError(f"need exactly 4 marked vertices, got {len(marked)}")
    adj = _check_tree(c.V, c.edges)
    deg = {v: len(adj[v]) for v in adj}
    if any(deg[v] <= 2 and v not in marked for v in adj):
        raise ValueError("tree is not pruned")
    big = sorted(v for v in adj if deg[v] >= 3)
    if not big and c.V == 4:
        return 1
    if len(big) == 1:
        centre = big[0]
        if deg[centre] == 3 and centre in marked and c.V == 4:
            return 2
        if deg[centre] == 4 and centre not in marked and c.V == 5:
            return 3
        if deg[centre] == 3 and centre not in marked and c.V == 5:
            return 4
    if len(big) == 2 and all(deg[v] == 3 and v not in marked for v in big) \
            and big[1] in adj[big[0]] and c.V == 6:
        return 5
    raise AssertionError("pruned tree with four marked vertices has an unexpected shape")


def quotient_skeleton(r: SubdivisionRule) -> CellComplex:
    return sphere_complex(r)


class SkeletonShape(NamedTuple):
    is_tree: bool
    is_circle: bool
    cycle: list  # edge indices of one cycle, empty for a forest
    dangling: list  # valence-1 vertices


def skeleton_shape(c: CellComplex) -> SkeletonShape:
    """Coarse shape of the 1-skeleton: tree, circle, or something else with a
    witnessed cycle and its dangling vertices."""
    valence = [0] * c.V
    for t, h, _ in c.edges:
        valence[t] += 1
        valence[h] += 1
    uf = _UnionFind()
    cycle: list[int] = []
    parent_edge: dict[int, list[tuple[int, int]]] = {v: [] for v in range(c.V)}
    for i, (t, h, _) in enumerate(c.edges):
        if uf.find(t) == uf.find(h) and not cycle:
            cycle = _tree_path(parent_edge, h, t) + [i]
        else:
            uf.union(t, h)
            parent_edge[t].append((h, i))
            parent_edge[h].append((t, i))
    comps = len({uf.find(v) for v in range(c.V)})
    is_tree = comps == 1 and len(c.edges) == c.V - 1
    is_circle = comps == 1 and len(c.edges) == c.V and all(v == 2 for v in valence)
    return SkeletonShape(is_tree, is_circle, cycle, [v for v in range(c.V) if valence[v] == 1])


def _tree_path(adj, start: int, goal: int) -> list[int]:
    """Edge indices along the forest path from start to goal."""
    prev = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == goal:
            break
        for w, i in adj[v]:
            if w not in prev:
                prev[w] = (v, i)
                stack.append(w)
    out = []
    v = goal
    while prev[v] is not None:
        v, i = prev[v]
        out.append(i)
    return out[::-1]
