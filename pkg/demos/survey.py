"""Survey every rigid class up to a degree: how its rule was obtained and
whether the rule is certified.

    python3 demos/survey.py [max-degree]
"""

import sys
from collections import Counter

from lattes_fsr import fsr, fundom
from lattes_fsr.lattes import beta_representatives, degree, enumerate_rigid

max_degree = int(sys.argv[1]) if len(sys.argv) > 1 else 12
tally = Counter()
for M in enumerate_rigid(max_degree):
    for beta in beta_representatives(M).representatives:
        try:
            rule = fundom.lattes_rule(M, beta)
        except fundom.ExceptionalAlpha:
            kind, status = "exceptional", "exceptional alpha, no bundled template"
        except fundom.ValidityCheckFailed as exc:
            kind, status = "failed", "fails " + ",".join(exc.report.failing)
        else:
            ok = fsr.mesh_approaches_zero(rule).ok and fsr.bounded_valence(rule).bounded
            kind = status = "certified" if ok else "not certified"
        tally[kind] += 1
        print(f"{degree(M):>3}  {','.join(map(str, M)):<14} beta={beta}  {status}")
print(dict(tally))
