"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 construction error, 3 bad input.
Diagnostics go to standard error; results to standard output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fsr, fundom, lattes, render, verify4

OK, CHECK_FAILED, CONSTRUCTION_ERROR, BAD_INPUT = 0, 1, 2, 3


class BadInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(BAD_INPUT)


def _ints(text: str, count: int) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated integers, got {text!r}")
    if len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} comma-separated integers, got {text!r}")
    return vals


def _matrix(text):
    return _ints(text, 4)


def _beta(text):
    return _ints(text, 2)


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise BadInput(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise BadInput(f"{path} is not JSON: {exc}")


def _load_rule(path: str) -> fsr.SubdivisionRule:
    try:
        return fsr.SubdivisionRule.from_json_obj(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, BadInput):
            raise
        raise BadInput(f"{path} is not a subdivision rule: {exc}")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------- commands

def cmd_enumerate(args) -> int:
    rows = []
    for M in lattes.enumerate_rigid(args.max_degree):
        tau, alpha = lattes.tau_from_matrix(M)
        betas = lattes.beta_representatives(M).representatives
        rows.append((lattes.degree(M), tuple(M), str(tau.tau), str(alpha), betas))
    if args.json:
        out = [{"degree": d, "matrix": list(m), "tau": t, "alpha": a,
                "beta": [list(b) for b in bs]} for d, m, t, a, bs in rows]
        print(json.dumps(out, indent=1))
        return OK
    print(f"{'deg':>3}  {'a,b,c,d':<16} {'tau':<24} {'alpha':<24} beta")
    for d, m, t, a, bs in rows:
        mtxt = ",".join(str(v) for v in m)
        btxt = " ".join(f"({x},{y})" for x, y in bs)
        print(f"{d:>3}  {mtxt:<16} {t:<24} {a:<24} {btxt}")
    print(f"{len(rows)} matrices")
    return OK


def cmd_classes(args) -> int:
    total = 0
    for M in lattes.enumerate_rigid(args.max_degree):
        keys = []
        for b in lattes.beta_representatives(M).representatives:
            k = lattes.conjugacy_key(M, b)
            keys.append(k)
            if args.json:
                print(k.to_json())
        total += len(keys)
        if not args.json:
            mtxt = ",".join(str(v) for v in M)
            print(f"{lattes.degree(M):>3}  {mtxt:<16} " + " ".join(f"beta=({k.beta[0]},{k.beta[1]})" for k in keys))
    if not args.json:
        print(f"{total} classes")
    return OK


def _build_domain(args) -> fundom.FundamentalDomain:
    if args.template:
        return fundom.build_from_template(args.template)
    if args.matrix is None:
        raise BadInput("build needs --matrix or --template")
    M = lattes.MultiplierMatrix(*args.matrix)
    beta = args.beta or (0, 0)
    if M.is_scalar():
        return fundom.build_parallelogram_domain(M.a, beta=beta)
    if not lattes.satisfies_mx(M):
        raise BadInput(f"{tuple(M)} violates the normalization inequalities")
    reps = lattes.beta_representatives(M).representatives
    if tuple(b % 2 for b in beta) not in [tuple(r) for r in reps]:
        key = lattes.conjugacy_key(M, beta).beta
        print(f"note: beta {beta} is conjugate to representative {key}", file=sys.stderr)
        beta = key
    return fundom.build_hex_domain(M, beta)


def cmd_build(args) -> int:
    d = _build_domain(args)
    rule = fundom.extract_rule(d)
    problems = fsr.validate_rule(rule)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return CONSTRUCTION_ERROR
    if args.out:
        _write(args.out, rule.to_json() + "\n")
    if args.complex_out:
        _write(args.complex_out, fsr.sphere_complex(rule).to_json() + "\n")
    if args.svg:
        _write(args.svg, render.render_domain(d, args.precision))
    print(f"{d.kind} domain, {len(d.subtiles)} subtiles, "
          f"{len(rule.tile_types)} tile type(s), {len(rule.edge_types)} edge types")
    return OK


def cmd_check(args) -> int:
    rule = _load_rule(args.rule)
    problems = fsr.validate_rule(rule)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        print("valid: false")
        return CHECK_FAILED
    mesh = fsr.mesh_approaches_zero(rule)
    val = fsr.bounded_valence(rule)
    c1, c2 = mesh.condition1, mesh.condition2
    print("valid: true")
    print(f"condition 1: {str(c1.ok).lower()}" + (f" at level {c1.level}" if c1.ok else ""))
    graph = c2.graph
    arcs = sum(len(v) for v in graph.arcs.values())
    print(f"condition 2: {str(c2.acyclic).lower()} (pair graph: {len(graph.vertices)} vertices, {arcs} arcs)")
    if c2.witness:
        print(f"  cycle: {' -> '.join(str(v) for v in c2.witness)}")
    valence_txt = "unknown" if val.bounded is None else str(val.bound)
    print(f"mesh: {str(mesh.ok).lower()}, valence: {valence_txt}")
    return OK if mesh.ok and val.bounded else CHECK_FAILED


def cmd_subdivide(args) -> int:
    rule = _load_rule(args.rule)
    if args.level < 0:
        raise BadInput("--level must be non-negative")
    c = fsr.subdivide(fsr.sphere_complex(rule), rule, args.level)
    print(f"level {args.level}: V={c.V} E={c.E} F={c.F} euler={c.euler()}")
    if args.out:
        _write(args.out, c.to_json() + "\n")
    if args.svg:
        _write(args.svg, render.render_rule(rule, args.level, args.precision))
    return OK


def cmd_prune(args) -> int:
    try:
        c = fsr.CellComplex.from_json_obj(_read_json(args.complex))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, BadInput):
            raise
        raise BadInput(f"{args.complex} is not a cell complex: {exc}")
    marked = set(args.marked) if args.marked else c.marked()
    try:
        pruned = fsr.prune(c, marked)
    except fsr.NotATree as exc:
        shape = fsr.skeleton_shape(c)
        print(f"not a tree: {exc}", file=sys.stderr)
        if shape.cycle:
            print(f"cycle through edges {shape.cycle}", file=sys.stderr)
        return CHECK_FAILED
    print(f"pruned: V={pruned.V} E={pruned.E}")
    if len(pruned.marked()) == 4:
        print(f"tree type: {fsr.classify_tree(pruned)}")
    if args.out:
        _write(args.out, pruned.to_json() + "\n")
    return OK


def cmd_verify_quadratic(args) -> int:
    rows = verify4.verify_quadratic()
    print(verify4.format_table(rows))
    return OK if all(r.passed for r in rows) else CHECK_FAILED


def cmd_render(args) -> int:
    if args.rule:
        text = render.render_rule(_load_rule(args.rule), args.level, args.precision)
    else:
        text = render.render_domain(_build_domain(args), args.precision)
    _write(args.svg, text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lattes-fsr", description="Finite subdivision rules for Lattès maps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("enumerate", help="list rigid multiplier matrices")
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classes", help="list conjugacy classes (matrix, beta)")
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_classes)

    def domain_flags(s):
        s.add_argument("--matrix", type=_matrix, help="a,b,c,d")
        s.add_argument("--beta", type=_beta, help="x,y")
        s.add_argument("--template", choices=fundom.TEMPLATE_NAMES)
        s.add_argument("--precision", type=int, default=12)

    s = sub.add_parser("build", help="build a domain and write its rule")
    domain_flags(s)
    s.add_argument("--out", help="rule JSON path")
    s.add_argument("--complex-out", help="sphere complex JSON path")
    s.add_argument("--svg", help="domain picture path")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("check", help="mesh and valence verdicts for a rule")
    s.add_argument("rule")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("subdivide", help="iterate a rule on its sphere complex")
    s.add_argument("rule")
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--out", help="complex JSON path")
    s.add_argument("--svg", help="picture path")
    s.add_argument("--precision", type=int, default=12)
    s.set_defaults(func=cmd_subdivide)

    s = sub.add_parser("prune", help="prune a tree complex and classify it")
    s.add_argument("complex")
    s.add_argument("--marked", type=int, nargs="*")
    s.add_argument("--out")
    s.set_defaults(func=cmd_prune)

    s = sub.add_parser("verify-quadratic", help="numerical checks of the quadratic example")
    s.set_defaults(func=cmd_verify_quadratic)

    s = sub.add_parser("render", help="SVG of a domain or of a rule's subdivision")
    domain_flags(s)
    s.add_argument("--rule", help="rule JSON path (renders its subdivision)")
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--svg", required=True)
    s.set_defaults(func=cmd_render)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else OK
    try:
        return args.func(args)
    except BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except fundom.ValidityCheckFailed as exc:
        print(f"construction failed: {', '.join(exc.report.failing)}", file=sys.stderr)
        for k, v in sorted(exc.report.diagnostics.items()):
            if k != "hexes":
                print(f"  {k}: {v}", file=sys.stderr)
        return CONSTRUCTION_ERROR
    except (fundom.ExceptionalAlpha, fundom.WindowExhausted, fundom.AnchoringError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return CONSTRUCTION_ERROR
    except (lattes.InvalidMatrix, render.EmptyRender, fsr.RuleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


def main() -> None:
    sys.exit(run())
