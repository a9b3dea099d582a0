"""The quadratic map with multiplier (1 + sqrt(-7))/2: numbers and tiles.

The one-tile hexagon construction fails for this map, so it comes with a
bundled two-tile rule instead.
"""

from lattes_fsr import fsr, fundom, verify4
from lattes_fsr.lattes import MultiplierMatrix

f = verify4.solve_coefficients("plus")
print(f"f(z) = (A z^2 + B)/(z^2 + 1), A = {f.A:.6f}, B = {f.B:.6f}")
print(verify4.format_table(verify4.verify_quadratic()))

try:
    fundom.build_hex_domain(MultiplierMatrix(0, -2, 1, 1), (0, 0))
except fundom.ValidityCheckFailed as exc:
    print("\nhexagon construction fails:", ", ".join(exc.report.failing))

rule = fundom.extract_rule(fundom.build_from_template("quadratic_sqrtm7"))
for t in rule.tile_types.values():
    print(f"{t.id}: {len(t.boundary)} edges -> {[s.tile for s in t.subtiles]}")
base = fsr.sphere_complex(rule)
print(f"sphere complex V={base.V} E={base.E} F={base.F}")
print("mesh ok:", fsr.mesh_approaches_zero(rule).ok, " valence:", fsr.bounded_valence(rule))
shape = fsr.skeleton_shape(base)
print(f"1-skeleton: cycle through edges {shape.cycle}, dangling vertices {shape.dangling}")
