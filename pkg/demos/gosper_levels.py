"""Iterate the Gosper snowflake rule and draw the first few levels.

    python3 demos/gosper_levels.py [output-dir]
"""

import sys
from pathlib import Path

from lattes_fsr import fsr, fundom, render

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

rule = fundom.extract_rule(fundom.build_from_template("gosper_2m312"))
c = fsr.sphere_complex(rule)
for level in range(4):
    sub = fsr.subdivide(c, rule, level)
    print(f"level {level}: V={sub.V:5d} E={sub.E:5d} F={sub.F:5d} euler={sub.euler()}")
    if level:
        (out / f"gosper_level{level}.svg").write_text(render.render_rule(rule, level, precision=6))
print(f"SVGs in {out}/")
