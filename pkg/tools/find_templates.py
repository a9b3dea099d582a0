"""Offline search for the hexagon-set templates of the exceptional multipliers.

Run from the repository root:  python3 tools/find_templates.py
Writes src/lattes_fsr/data/templates/<name>.json for every hex template.
A template is a connected set of deg(M) hexagons, one per orbit of the
orbifold group, whose boundary carries a valid ten-edge pairing and whose
rule passes validation, mesh and bounded valence.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from lattes_fsr import fsr, fundom  # noqa: E402
from lattes_fsr import hexplane as hp  # noqa: E402
from lattes_fsr.lattes import MultiplierMatrix, degree  # noqa: E402

CASES = {
    "gosper_2m312": ((2, -3, 1, 2), (0, 0)),
    "case_2m612": ((2, -6, 1, 2), (0, 0)),
    "case_1m312": ((1, -3, 1, 2), (0, 0)),
    "case_1m612": ((1, -6, 1, 2), (0, 0)),
    "case_0m411": ((0, -4, 1, 1), (0, 0)),
    "case_0m710_b1": ((0, -7, 1, 0), (1, 0)),
}
OUT = ROOT / "src" / "lattes_fsr" / "data" / "templates"


def accept(M, beta, hexes):
    try:
        d = fundom.hex_domain_from_hexes(M, beta, hexes)
        rule = fundom.extract_rule(d)
    except (fundom.ValidityCheckFailed, fundom.AnchoringError):
        return None
    if fsr.validate_rule(rule):
        return None
    if not fsr.mesh_approaches_zero(rule).ok:
        return None
    if not fsr.bounded_valence(rule).bounded:
        return None
    return d


def flower_candidates(setup):
    """Seven-hexagon flowers having beta on their boundary."""
    b = setup.beta_f
    for start in hp.edge_centers(b):
        for k in range(6):
            centre = hp.add(start, hp.CENTER_STEPS[k])
            yield [centre] + [hp.add(centre, s) for s in hp.CENTER_STEPS]


def line_candidates(M, beta):
    for sides in fundom.SIDE_CHOICES:
        setup = fundom.HexSetup.of(M, beta)
        l1, l2, l3 = fundom._trace_lines(setup, sides)
        p1, p2 = fundom._choose_p1_p2(l1, l2, l3)
        lc = fundom.LineConstruction(setup, sides, l1, l2, l3, p1, p2)
        report, edges, _ = fundom.evaluate_lines(lc)
        if edges is not None and "hexes" in report.diagnostics:
            yield report.diagnostics["hexes"]


def polyhex_candidates(setup, size, limit=200000):
    """Connected hexagon sets of the given size, one per group orbit,
    containing exactly one of the two hexagons at beta.  Grown level by
    level with set deduplication."""
    seeds = hp.edge_centers(setup.beta_f)
    count = 0
    for seed in seeds:
        other = seeds[1] if seed == seeds[0] else seeds[0]
        level = {frozenset([seed])}
        for _ in range(size - 1):
            nxt = set()
            for cur in level:
                keys = {fundom.gamma_orbit_key(setup, c) for c in cur}
                for c in cur:
                    for s in hp.CENTER_STEPS:
                        nb = hp.add(c, s)
                        if nb in cur or nb == other:
                            continue
                        if fundom.gamma_orbit_key(setup, nb) in keys:
                            continue
                        nxt.add(cur | {nb})
            level = nxt
        for cur in sorted(level, key=sorted):
            count += 1
            yield sorted(cur)
            if count >= limit:
                return


def search(name, M, beta):
    M = MultiplierMatrix(*M)
    setup = fundom.HexSetup.of(M, beta)
    sources = []
    if name == "gosper_2m312":
        sources.append(("flower", flower_candidates(setup)))
    sources.append(("lines", line_candidates(M, beta)))
    sources.append(("polyhex", polyhex_candidates(setup, degree(M))))
    for label, gen in sources:
        for hexes in gen:
            d = accept(M, beta, hexes)
            if d is not None:
                return label, d
    return None, None


def dump(name, d):
    obj = {
        "schema_version": 1,
        "kind": "hex",
        "name": name,
        "matrix": list(d.matrix),
        "beta": list(d.beta),
        "hexes": [list(c) for c in d.subtiles],
        "corners": {k: list(v) for k, v in sorted(d.corners.items())},
    }
    (OUT / f"{name}.json").write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def main(argv):
    names = argv[1:] or list(CASES)
    OUT.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in names:
        M, beta = CASES[name]
        label, d = search(name, M, beta)
        if d is None:
            print(f"{name}: no template found")
            status = 1
            continue
        dump(name, d)
        print(f"{name}: {len(d.subtiles)} hexagons via {label}")
    return status


if __name__ == "__main__":
    sys.exit(main(sys.argv))
