"""Build the hexagon domain for alpha = (9 + sqrt(-23))/2 and inspect it.

    python3 demos/degree26_domain.py [output-dir]
"""

import sys
from pathlib import Path

from lattes_fsr import fsr, fundom, render
from lattes_fsr.lattes import MultiplierMatrix, tau_from_matrix

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

M = MultiplierMatrix(5, -3, 2, 4)
tau, alpha = tau_from_matrix(M)
print(f"tau = {tau.tau}, alpha = {alpha}")

domain = fundom.build_hex_domain(M, (0, 0))
report = fundom.verify_domain(domain)
print("checks:", " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in report.checks.items()))
print(f"{len(domain.subtiles)} hexagons, corners {sorted(domain.corners)}")
for first, second, how in domain.pairing:
    print(f"  edge {first} ~ edge {second}: {how}")

rule = fundom.extract_rule(domain)
verdict = fsr.mesh_approaches_zero(rule)
print(f"condition 1 at level {verdict.condition1.level}, pair graph acyclic: {verdict.condition2.acyclic}")
print("valence bound:", fsr.bounded_valence(rule).bound)

skeleton = fsr.quotient_skeleton(rule)
print("pruned skeleton type:", fsr.classify_tree(fsr.prune(skeleton, skeleton.marked())))

(out / "degree26_domain.svg").write_text(render.render_domain(domain))
(out / "degree26_rule.json").write_text(rule.to_json() + "\n")
print(f"wrote {out}/degree26_domain.svg and {out}/degree26_rule.json")
