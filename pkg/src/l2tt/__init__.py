"""Fox-calculus Jacobians, stratum growth rates and l2-torsion upper bounds
for graph self-maps representing free-group automorphisms."""

from .algebra import Automorphism, GroupRingElement, TwistedPolynomial, Word, parse_element, parse_word
from .bound import BoundReport, bound_at_power, iwip_bound, power_scaling_check, torsion_upper_bound
from .catalog import example
from .dsl import parse, render
from .errors import (
    ConventionError,
    ConvergenceError,
    L2TTError,
    MalformedInputError,
    ParseError,
    StructuralError,
)
from .graphs import EdgePath, Graph, Marking, spanning_tree, tighten
from .jacobian import jacobian, verify_chain_rule
from .morphism import (
    Filtration,
    GraphMorphism,
    compose,
    iterate,
    refine_filtration,
    rtt_power_check,
    transition_matrix,
    validate,
    vertex_fixing_power,
)
from .spectral import l1_projection, pf_eigenvalue, spectral_norm

__version__ = "0.1.0"

__all__ = [
    "Automorphism", "BoundReport", "ConventionError", "ConvergenceError", "EdgePath", "Filtration",
    "Graph", "GraphMorphism", "GroupRingElement", "L2TTError", "MalformedInputError", "Marking",
    "ParseError", "StructuralError", "TwistedPolynomial", "Word", "bound_at_power", "compose",
    "example", "iterate", "iwip_bound", "jacobian", "l1_projection", "parse", "parse_element",
    "parse_word", "pf_eigenvalue", "power_scaling_check", "refine_filtration", "render",
    "rtt_power_check", "spanning_tree", "spectral_norm", "tighten", "torsion_upper_bound",
    "transition_matrix", "validate", "verify_chain_rule", "vertex_fixing_power",
]
