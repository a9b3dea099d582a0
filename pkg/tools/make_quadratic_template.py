"""Write the two-tile template for z -> alpha z, alpha = (1 + sqrt(-7))/2.

Run from the repository root:  python3 tools/make_quadratic_template.py

Points are (x, y) meaning x + y*alpha.  Lattice basis (1, alpha), so tau is
alpha and the multiplier matrix is (0, -2, 1, 1) because alpha^2 = alpha - 2.
The domain is the parallelogram 0, 2, alpha+1, alpha-1 cut by the extra
edge from 0 to alpha into a triangle and a pentagon.  The pullback of each
tile under z -> alpha z is read off from 1 - alpha = 2/alpha.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction as F
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from lattes_fsr.fsr import Subtile, SubdivisionRule, TileType, validate_rule  # noqa: E402

OUT = ROOT / "src" / "lattes_fsr" / "data" / "templates" / "quadratic_sqrtm7.json"
ALPHA = complex(0.5, 7 ** 0.5 / 2)
LABEL = {(0, 0): "0", (1, 0): "1", (0, 1): "tau", (1, 1): "1+tau"}
HALF = F(1, 2)

# local vertex positions per tile type
TRIANGLE_POINTS = [(0, 0), (0, 1), (-1, 1), (HALF, HALF), (-HALF, HALF)]
PENTAGON_POINTS = [(0, 0), (1, 0), (2, 0), (1, 1), (0, 1), (F(3, 2), HALF), (HALF, HALF)]


def point_class(p):
    # class of the point itself modulo 2 Lambda
    return LABEL[(int(p[0]) % 2, int(p[1]) % 2)]


def image_class(p):
    # alpha (x + y alpha) = -2y + (x + y) alpha
    x, y = p
    u, v = -2 * y, x + y
    if u.denominator != 1 or v.denominator != 1:
        return None
    return LABEL[(int(u) % 2, int(v) % 2)]


def cart(p):
    z = float(p[0]) + float(p[1]) * ALPHA
    return [round(z.real, 15), round(z.imag, 15)]


def fit(src, dst):
    """Least-squares affine map [a, b, c, d, e, f] sending src to dst."""
    A = np.array([[x, y, 1.0] for x, y in src])
    sol_x = np.linalg.lstsq(A, np.array([p[0] for p in dst]), rcond=None)[0]
    sol_y = np.linalg.lstsq(A, np.array([p[1] for p in dst]), rcond=None)[0]
    vals = [sol_x[0], sol_x[1], sol_y[0], sol_y[1], sol_x[2], sol_y[2]]
    return [round(float(v), 15) for v in vals]


def build_rule() -> SubdivisionRule:
    edges = {
        "a": [("d", 1)],
        "b": [("d", 1)],
        "c": [("a", 1), ("a", -1)],
        "d": [("c", 1), ("b", 1)],
    }
    tri = TileType(
        "triangle", [("d", 1), ("b", -1), ("c", -1)], len(TRIANGLE_POINTS),
        [[0, 3, 1], [1, 2], [2, 4, 0]],
        [Subtile("pentagon", [2, 4, 0, 3, 1])],
        [image_class(p) for p in TRIANGLE_POINTS],
        [point_class(p) for p in TRIANGLE_POINTS[:3]])
    pent = TileType(
        "pentagon", [("a", 1), ("a", -1), ("c", 1), ("b", 1), ("d", -1)], len(PENTAGON_POINTS),
        [[0, 1], [1, 2], [2, 5, 3], [3, 4], [4, 6, 0]],
        [Subtile("triangle", [0, 1, 6]), Subtile("triangle", [3, 4, 6]),
         Subtile("pentagon", [2, 5, 3, 6, 1])],
        [image_class(p) for p in PENTAGON_POINTS],
        [point_class(p) for p in PENTAGON_POINTS[:5]])
    pairings = [("pentagon:0", "pentagon:1", "rotation about 1"),
                ("pentagon:3", "triangle:1", "rotation about alpha"),
                ("pentagon:2", "triangle:2", "translation by 2"),
                ("triangle:0", "pentagon:4", "shared edge from 0 to alpha")]
    tiles = {"triangle": tri, "pentagon": pent}
    points = {"triangle": TRIANGLE_POINTS, "pentagon": PENTAGON_POINTS}
    geometry = {"tiles": {k: {"vertices": [cart(p) for p in pts]} for k, pts in points.items()},
                "maps": {}}
    for k, T in tiles.items():
        maps = []
        for s in T.subtiles:
            src_pts = points[s.tile][:len(s.boundary_image)]
            src = [cart(p) for p in src_pts]
            dst = [cart(points[k][i]) for i in s.boundary_image]
            maps.append(fit(src, dst))
        geometry["maps"][k] = maps
    return SubdivisionRule(edges, tiles, pairings, geometry, name="quadratic sqrt(-7)")


def frac(v) -> str:
    return str(F(v))


def main() -> int:
    rule = build_rule()
    problems = validate_rule(rule)
    if problems:
        print("\n".join(problems))
        return 1
    pts = lambda seq: [[frac(x), frac(y)] for x, y in seq]  # noqa: E731
    obj = {
        "schema_version": 1,
        "kind": "two_tile",
        "name": "quadratic_sqrtm7",
        "matrix": [0, -2, 1, 1],
        "beta": [0, 0],
        "identity": "1 - alpha = 2/alpha",
        "corners": {"0": ["0", "0"], "2": ["2", "0"], "alpha+1": ["1", "1"], "alpha-1": ["-1", "1"]},
        "marks": {"1": ["1", "0"], "alpha": ["0", "1"]},
        # boundary of the parallelogram, counterclockwise, split at corners and marks
        "boundary": [pts([(0, 0), (1, 0)]), pts([(1, 0), (2, 0)]), pts([(2, 0), (1, 1)]),
                     pts([(1, 1), (0, 1)]), pts([(0, 1), (-1, 1)]), pts([(-1, 1), (0, 0)])],
        "pairing": [[1, 2, "rotation about 1"], [4, 5, "rotation about alpha"],
                    [3, 6, "translation by 2"]],
        "pieces": [pts(TRIANGLE_POINTS[:3]), pts(PENTAGON_POINTS[:5])],
        "rule": rule.to_json_obj(),
    }
    OUT.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT.relative_to(ROOT)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
