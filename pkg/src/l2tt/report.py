"""JSON report documents."""

from __future__ import annotations

import json

from .bound import BoundReport, torsion_upper_bound
from .dsl import InputDocument, Problem, render
from .jacobian import format_matrix, jacobian
from .morphism import validate

SCHEMA_ID = "l2tt.report/1"


def _stratum(report_stratum, graph) -> dict:
    lam = report_stratum.lam
    return {
        "index": report_stratum.index,
        "edges": [graph.edge_names[e] for e in report_stratum.edges],
        "n": report_stratum.n,
        "kind": report_stratum.kind,
        "lambda": None if lam is None else {"lower": lam.lower, "upper": lam.upper},
        "eg": report_stratum.is_eg,
    }


def report_document(
    doc: InputDocument,
    problem: Problem,
    bound: BoundReport,
    include_jacobians: bool = False,
) -> dict:
    graph = problem.graph
    checks = bound.checks
    out: dict = {
        "schema": SCHEMA_ID,
        "input_echo": render(doc),
        "rank": bound.rank,
        "convention_power": bound.convention_power,
        "strata": [_stratum(s, graph) for s in bound.strata],
        "bound_nats": bound.bound_nats,
        "bound_bits": bound.bound_bits,
        "raw_bound_nats": bound.raw_bound_nats,
        "checks": {
            "validated": checks.validated,
            "tightened_edges": [graph.edge_names[e] for e in checks.tightened_edges],
            "filtration_invariant": checks.filtration_invariant,
            "rtt_power_check": {
                "K": checks.rtt.K,
                "pass": checks.rtt.passed,
                "first_failure": None
                if checks.rtt.first_failure is None
                else {"k": checks.rtt.first_failure[0], "stratum": checks.rtt.first_failure[1]},
            },
            "l1_equals_transition": checks.l1_equals_transition,
        },
    }
    if checks.chain_rule is not None:
        out["checks"]["chain_rule"] = {"k": checks.chain_rule.k, "pass": checks.chain_rule.passed}
    if bound.iwip_bound is not None:
        out["iwip_bound"] = bound.iwip_bound
    if bound.per_power_bounds:
        out["bound_at_power"] = [{"k": k, "value": v} for k, v in bound.per_power_bounds]
    if include_jacobians:
        f = validate(problem.morphism).morphism
        jac = jacobian(f, problem.marking)
        out["jacobians"] = {
            "vertex_order": [graph.vertex_names[u] for u in jac.vertex_order],
            "edge_order": [graph.edge_names[e] for e in jac.edge_order],
            "automorphism": [str(w) for w in jac.phi.images],
            "J0": format_matrix(jac.J0),
            "J1": format_matrix(jac.J1),
        }
    return out


def build_report(doc: InputDocument, problem: Problem, include_jacobians: bool = False, **options) -> dict:
    bound = torsion_upper_bound(problem.morphism, problem.marking, problem.filtration, **options)
    return report_document(doc, problem, bound, include_jacobians)


def dumps(document: dict) -> str:
    return json.dumps(document, indent=2)
