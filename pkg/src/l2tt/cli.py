"""Command line interface: ``l2tt COMMAND FILE``.

Exit status is 0 on success, 1 when the input parses but fails validation
(or a computation cannot be certified), and 2 on a parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import catalog
from .bound import analyze_strata, convention_map, torsion_upper_bound
from .dsl import InputDocument, Problem, build, parse
from .errors import L2TTError, ParseError
from .jacobian import jacobian, render_matrix
from .morphism import check_invariant, refine_filtration, validate
from .report import build_report, dumps
from .spectral import DEFAULT_TOL

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


def default_tol() -> float:
    value = os.environ.get("L2TT_TOL")
    return float(value) if value else DEFAULT_TOL


def format_bound(value: float, exact_zero: bool) -> str:
    return "0" if exact_zero else f"{value:.9f}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="a .ttmap file, '-' for stdin, or a built-in example name")
    common.add_argument("--tol", type=float, default=None, help="spectral tolerance (default 1e-12 or $L2TT_TOL)")
    common.add_argument("--format", choices=["text", "json"], default="text")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--power-check", type=int, default=4, metavar="K",
                        help="compare M(f^k)_s with (M_s)^k for k <= K (default 4)")
    bounds.add_argument("--bound-at-power", type=int, nargs="+", default=[], metavar="K",
                        help="also report the finite-power bounds at these k")

    parser = argparse.ArgumentParser(prog="l2tt", description="Upper bounds on l2-torsion of free-by-cyclic groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the map and filtration")
    sub.add_parser("strata", parents=[common], help="refined strata and Perron-Frobenius eigenvalues")
    sub.add_parser("jacobian", parents=[common], help="print J0, J1 and the induced automorphism")
    sub.add_parser("bound", parents=[common, bounds], help="print the bound in nats")
    p_report = sub.add_parser("report", parents=[common, bounds], help="emit the full JSON report")
    p_report.add_argument("--jacobians", action="store_true", help="include J0 and J1 as strings")
    p_report.add_argument("--chain-rule", type=int, default=None, metavar="K",
                          help="verify (tJ1)^K = t^K J1(f^K) exactly")

    p_ex = sub.add_parser("examples", help="list, print or dump the built-in examples")
    p_ex.add_argument("name", nargs="?", help="print this example")
    p_ex.add_argument("--dump", metavar="DIR", help="write every example to DIR/NAME.ttmap")
    return parser


def read_input(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if path.exists():
        return path.read_text(encoding="utf-8")
    if source in catalog.names():
        return catalog.text(source)
    raise FileNotFoundError(f"no such file or built-in example: {source}")


def _load(args) -> tuple[InputDocument, Problem]:
    doc = parse(read_input(args.file))
    return doc, build(doc)


def _emit(args, text: str, payload: dict) -> None:
    print(json.dumps(payload, indent=2) if args.format == "json" else text)


def cmd_validate(args) -> int:
    doc, problem = _load(args)
    result = validate(problem.morphism)
    if problem.filtration is not None:
        check_invariant(result.morphism, problem.filtration)
    g = problem.graph
    tightened = [g.edge_names[e] for e in result.tightened_edges]
    lines = [f"valid: {g.num_vertices} vertices, {g.num_edges} edges, rank {g.rank}"]
    if tightened:
        lines.append("tightened edge images: " + " ".join(tightened))
    if problem.filtration is not None:
        lines.append("filtration is invariant")
    _emit(args, "\n".join(lines), {"valid": True, "tightened_edges": tightened,
                                   "filtration_invariant": problem.filtration is not None or None})
    return EXIT_OK


def cmd_strata(args) -> int:
    doc, problem = _load(args)
    f = validate(problem.morphism).morphism
    g, q = convention_map(f)
    filt = refine_filtration(g, problem.filtration)
    strata = analyze_strata(g, filt, args.tol)
    names = problem.graph.edge_names
    rows, payload = [], []
    if q > 1:
        rows.append(f"strata of f^{q} (f^{q} fixes every vertex in its image)")
    for s in strata:
        edges = " ".join(names[e] for e in s.edges)
        if s.lam is None:
            lam = "zero block"
        elif s.lam.lower == s.lam.upper:
            lam = f"lambda = {s.lam.lower:g} exactly"
        else:
            lam = f"lambda in [{s.lam.lower:.12f}, {s.lam.upper:.12f}]"
        rows.append(f"H{s.index + 1}: {edges:<20} n={s.n}  {lam}{'  EG' if s.is_eg else ''}")
        payload.append({"edges": [names[e] for e in s.edges], "n": s.n, "kind": s.kind, "eg": s.is_eg,
                        "lambda": None if s.lam is None else {"lower": s.lam.lower, "upper": s.lam.upper}})
    _emit(args, "\n".join(rows), {"convention_power": q, "strata": payload})
    return EXIT_OK


def cmd_jacobian(args) -> int:
    doc, problem = _load(args)
    f = validate(problem.morphism).morphism
    jac = jacobian(f, problem.marking)
    g = problem.graph
    text = "\n".join([
        "automorphism: " + str(jac.phi),
        "vertex order: " + " ".join(g.vertex_names[u] for u in jac.vertex_order),
        "J0 =",
        render_matrix(jac.J0),
        "edge order: " + " ".join(g.edge_names[e] for e in jac.edge_order),
        "J1 =",
        render_matrix(jac.J1),
    ])
    _emit(args, text, {
        "automorphism": [str(w) for w in jac.phi.images],
        "J0": [[str(a) for a in row] for row in jac.J0],
        "J1": [[str(a) for a in row] for row in jac.J1],
    })
    return EXIT_OK


def cmd_bound(args) -> int:
    doc, problem = _load(args)
    report = torsion_upper_bound(problem.morphism, problem.marking, problem.filtration, tol=args.tol,
                                 power_check=args.power_check, powers=tuple(args.bound_at_power))
    lines = [format_bound(report.bound_nats, not report.eg_strata)]
    lines.extend(f"k={k}: {v:.9f}" for k, v in report.per_power_bounds)
    _emit(args, "\n".join(lines), {"bound_nats": report.bound_nats, "bound_bits": report.bound_bits,
                                   "bound_at_power": [{"k": k, "value": v} for k, v in report.per_power_bounds]})
    return EXIT_OK


def cmd_report(args) -> int:
    doc, problem = _load(args)
    document = build_report(doc, problem, include_jacobians=args.jacobians, tol=args.tol,
                            power_check=args.power_check, chain_rule_k=args.chain_rule,
                            powers=tuple(args.bound_at_power))
    print(dumps(document))
    return EXIT_OK


def cmd_examples(args) -> int:
    if args.dump:
        out = Path(args.dump)
        out.mkdir(parents=True, exist_ok=True)
        for name in catalog.names():
            (out / f"{name}.ttmap").write_text(catalog.text(name), encoding="utf-8")
        print(f"wrote {len(catalog.names())} examples to {out}")
    elif args.name:
        sys.stdout.write(catalog.text(args.name))
    else:
        for name, description in catalog.DESCRIPTIONS.items():
            print(f"{name:<10} {description}")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "strata": cmd_strata,
    "jacobian": cmd_jacobian,
    "bound": cmd_bound,
    "report": cmd_report,
    "examples": cmd_examples,
}


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", "absent") is None:
        args.tol = default_tol()
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (L2TTError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
