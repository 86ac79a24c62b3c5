"""Upper bounds on the l2-torsion -rho(G_phi) of a free-by-cyclic group from a
relative train-track representative.

The headline bound is sum over exponentially growing strata of
n_s * log(lambda_s), in nats. Only upper bounds are produced; nothing here
claims that the torsion itself is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .charpoly import spectral_radius_exceeds_one
from .errors import ConvergenceError
from .graphs import Marking, spanning_tree
from .jacobian import ChainRuleCheck, jacobian, satisfies_convention, verify_chain_rule
from .morphism import (
    Filtration,
    GraphMorphism,
    RTTCheck,
    block,
    check_invariant,
    iterate,
    refine_filtration,
    rtt_power_check,
    transition_matrix,
    validate,
    vertex_fixing_power,
)
from .spectral import DEFAULT_TOL, Enclosure, is_irreducible, l1_projection, log_i_plus_power_norm, pf_eigenvalue


@dataclass(frozen=True)
class StratumReport:
    index: int
    edges: tuple[int, ...]
    n: int
    kind: str  # "zero" or "irreducible"
    lam: Enclosure | None
    is_eg: bool

    @property
    def log_lambda(self) -> float:
        return math.log(self.lam.midpoint) if self.is_eg else 0.0


@dataclass(frozen=True)
class Checks:
    validated: bool
    tightened_edges: tuple[int, ...]
    filtration_invariant: bool
    rtt: RTTCheck
    l1_equals_transition: bool | None
    chain_rule: ChainRuleCheck | None = None


@dataclass(frozen=True)
class BoundReport:
    strata: tuple[StratumReport, ...]
    bound_nats: float
    raw_bound_nats: float
    convention_power: int
    rank: int
    checks: Checks
    iwip_bound: float | None = None
    per_power_bounds: tuple[tuple[int, float], ...] = ()
    filtration: Filtration | None = field(default=None, repr=False)

    @property
    def bound_bits(self) -> float:
        return self.bound_nats / math.log(2)

    @property
    def eg_strata(self) -> tuple[int, ...]:
        return tuple(s.index for s in self.strata if s.is_eg)


def analyze_strata(f: GraphMorphism, filt: Filtration, tol: float = DEFAULT_TOL) -> tuple[StratumReport, ...]:
    """Classify each stratum of a refined filtration and enclose its Perron root.

    Whether lambda > 1 is decided exactly from the characteristic polynomial
    of the integer block, never from the float enclosure.
    """
    M = transition_matrix(f)
    out = []
    for s, edges in enumerate(filt.strata):
        B = block(M, edges)
        if not is_irreducible(B):
            if B.any():
                raise ValueError(f"stratum {s} is neither zero nor irreducible; refine the filtration first")
            out.append(StratumReport(s, edges, len(edges), "zero", None, False))
            continue
        eg = spectral_radius_exceeds_one(B.tolist())
        if eg:
            lam = pf_eigenvalue(B, tol)
            if not lam.converged:
                raise ConvergenceError(
                    f"Perron root of stratum {s} not resolved to {tol} after {lam.iterations} iterations "
                    f"(enclosure [{lam.lower}, {lam.upper}])"
                )
        else:
            lam = Enclosure(1.0, 1.0, True, 0)
        out.append(StratumReport(s, edges, len(edges), "irreducible", lam, eg))
    return tuple(out)


def convention_map(f: GraphMorphism) -> tuple[GraphMorphism, int]:
    """f^q for the smallest q fixing every vertex in its image."""
    q = vertex_fixing_power(f)
    return (f if q == 1 else iterate(f, q)), q


def rebased(f: GraphMorphism) -> GraphMorphism | None:
    """The same map with a fixed basepoint and trivial connecting path, if any vertex is fixed."""
    if satisfies_convention(f):
        return f
    fixed = [u for u, fu in enumerate(f.vertex_map) if fu == u]
    if not fixed:
        return None
    base = f.basepoint if f.basepoint in fixed else fixed[0]
    return GraphMorphism(f.graph, f.vertex_map, f.edge_images, f.graph.trivial_path(base))


def iwip_bound(f: GraphMorphism, rank: int | None = None, tol: float = DEFAULT_TOL) -> float | None:
    """3 |chi(F)| log lambda when f has a single irreducible stratum, else None."""
    f = validate(f).morphism
    filt = refine_filtration(f)
    if len(filt.strata) != 1:
        return None
    (stratum,) = analyze_strata(f, filt, tol)
    if stratum.kind != "irreducible":
        return None
    rank = f.graph.rank if rank is None else rank
    return 3 * (rank - 1) * stratum.log_lambda


def bound_at_power(f: GraphMorphism, k: int, filtration: Filtration | None = None) -> float:
    """sum_s n_s log ||I + (M_s)^k||^(1/k) over the refined strata of f.

    Each value bounds -rho from above for a train-track f meeting the vertex
    convention; it tends to the headline bound as k grows.
    """
    f = validate(f).morphism
    filt = refine_filtration(f, filtration)
    M = transition_matrix(f)
    return float(sum(len(edges) * log_i_plus_power_norm(block(M, edges), k) for edges in filt.strata))


def torsion_upper_bound(
    f: GraphMorphism,
    marking: Marking | None = None,
    filtration: Filtration | None = None,
    tol: float = DEFAULT_TOL,
    power_check: int = 4,
    chain_rule_k: int | None = None,
    powers: tuple[int, ...] = (),
) -> BoundReport:
    """Bound -rho(G_phi) by sum over EG strata of n_s log lambda_s.

    If f does not fix the vertices in its image, f^q is used with q from
    :func:`vertex_fixing_power` and the result divided by q.
    """
    validated = validate(f)
    f = validated.morphism
    if filtration is not None:
        check_invariant(f, filtration)
    if marking is None:
        marking = spanning_tree(f.graph, f.basepoint)

    g, q = convention_map(f)
    filt = refine_filtration(g, filtration)
    strata = analyze_strata(g, filt, tol)
    raw = float(sum(s.n * s.log_lambda for s in strata if s.is_eg))

    l1_ok = None
    if marking.basepoint == f.basepoint:
        J1 = jacobian(f, marking).J1
        l1_ok = bool(np.array_equal(l1_projection(J1), transition_matrix(f)))

    chain = None
    if chain_rule_k:
        h = rebased(g)
        if h is not None:
            m = marking if h.basepoint == marking.basepoint else spanning_tree(h.graph, h.basepoint)
            chain = verify_chain_rule(h, m, chain_rule_k, filt)

    checks = Checks(
        validated=True,
        tightened_edges=validated.tightened_edges,
        filtration_invariant=True,
        rtt=rtt_power_check(g, filt, power_check),
        l1_equals_transition=l1_ok,
        chain_rule=chain,
    )
    per_power = tuple((k, bound_at_power(f, k, filtration)) for k in powers)
    return BoundReport(
        strata=strata,
        bound_nats=raw / q,
        raw_bound_nats=raw,
        convention_power=q,
        rank=marking.rank,
        checks=checks,
        iwip_bound=iwip_bound(f, marking.rank, tol),
        per_power_bounds=per_power,
        filtration=filt,
    )


@dataclass(frozen=True)
class PowerScaling:
    q: int
    passed: bool
    base: float
    powered: float


def power_scaling_check(f: GraphMorphism, q: int, filtration: Filtration | None = None,
                        tol: float = DEFAULT_TOL, atol: float = 1e-9) -> PowerScaling:
    """Compare the bound for f^q, refined afresh, with q times the bound for f."""
    if q < 1:
        raise ValueError("q must be at least 1")
    f = validate(f).morphism
    base = torsion_upper_bound(f, filtration=filtration, tol=tol).bound_nats
    powered = torsion_upper_bound(iterate(f, q), filtration=filtration, tol=tol).bound_nats
    return PowerScaling(q, abs(powered - q * base) <= atol, base, powered)
