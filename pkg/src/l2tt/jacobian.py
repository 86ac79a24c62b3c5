"""Jacobian matrices J0(f), J1(f) of a graph morphism over Z[F].

The lift of f to the universal cover is never built. With the marking's
identification V(cover) = F x V, it acts by (g, u) -> (Phi(g) * g_u, f(u)),
where g_u is the word of p * f(tau_u) * tau_f(u)^-1.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .algebra import Automorphism, GroupRingElement, TwistedPolynomial, Word, twisted_matmul
from .errors import ConventionError, StructuralError
from .graphs import CoverPoint, EdgePath, Marking, lift_path, path_word
from .morphism import Filtration, GraphMorphism, induced_automorphism, iterate, refine_filtration

GRMatrix = list  # rows of GroupRingElement


def vertex_offsets(f: GraphMorphism, m: Marking) -> list[Word]:
    """g_u for every vertex u, so that the lift sends (1, u) to (g_u, f(u))."""
    p = f.connecting_path
    out = []
    for u in range(f.graph.num_vertices):
        tau_u = m.tree_paths[u]
        loop = p + f.image_of_path(tau_u) + m.tree_paths[f.vertex_map[u]].inverse()
        out.append(path_word(m, loop))
    return out


def cover_map(phi: Automorphism, offsets: Sequence[Word], f: GraphMorphism, point: CoverPoint) -> CoverPoint:
    return CoverPoint(phi(point.group) * offsets[point.vertex], f.vertex_map[point.vertex])


def fixed_first_order(f: GraphMorphism) -> tuple[int, ...]:
    fixed = [u for u, fu in enumerate(f.vertex_map) if fu == u]
    rest = [u for u, fu in enumerate(f.vertex_map) if fu != u]
    return tuple(fixed + rest)


def edge_derivatives(m: Marking, start: CoverPoint, path: EdgePath) -> dict[int, GroupRingElement]:
    """Column -> sum of sign * coordinate over the lifted crossings of ``path``.

    Works on unreduced paths too; a backtrack contributes +h and -h to the
    same column.
    """
    crossings, _ = lift_path(m, start, path)
    acc: dict[int, list[tuple[Word, int]]] = {}
    for g, e, s in crossings:
        acc.setdefault(e, []).append((g, s))
    return {e: GroupRingElement(terms) for e, terms in acc.items()}


@dataclass(frozen=True)
class JacobianPair:
    J0: GRMatrix
    J1: GRMatrix
    vertex_order: tuple[int, ...]
    edge_order: tuple[int, ...]
    phi: Automorphism
    marking: Marking = field(repr=False)


def jacobian(f: GraphMorphism, m: Marking) -> JacobianPair:
    """J0 and J1 of ``f`` with respect to ``m`` and f's connecting path.

    Rows and columns of J1 follow the input edge order; those of J0 list
    fixed vertices first, then the rest in input order.
    """
    g = f.graph
    if m.graph != g:
        raise StructuralError("marking belongs to a different graph")
    phi = induced_automorphism(f, m)
    offsets = vertex_offsets(f, m)

    vertex_order = fixed_first_order(f)
    position = {u: i for i, u in enumerate(vertex_order)}
    zero = GroupRingElement()
    J0 = [[zero] * g.num_vertices for _ in range(g.num_vertices)]
    for u in vertex_order:
        J0[position[u]][position[f.vertex_map[u]]] = GroupRingElement.of(offsets[u])

    J1 = []
    for e in range(g.num_edges):
        tail = g.edges[e][0]
        start = cover_map(phi, offsets, f, CoverPoint(Word(), tail))
        derivs = edge_derivatives(m, start, f.edge_images[e])
        J1.append([derivs.get(j, zero) for j in range(g.num_edges)])
    return JacobianPair(J0, J1, vertex_order, tuple(range(g.num_edges)), phi, m)


def jacobian_block(J1: GRMatrix, filt: Filtration, s: int) -> GRMatrix:
    """The n_s x n_s diagonal block of J1 (input edge order) for stratum ``s``."""
    if not 0 <= s < len(filt.strata):
        raise IndexError(f"filtration has no stratum {s}")
    edges = filt.strata[s]
    return [[J1[i][j] for j in edges] for i in edges]


def gr_matmul(A: GRMatrix, B: GRMatrix) -> GRMatrix:
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        out_row = []
        for j in range(cols):
            s = GroupRingElement()
            for k in range(inner):
                if row[k] and B[k][j]:
                    s = s + row[k] * B[k][j]
            out_row.append(s)
        out.append(out_row)
    return out


def apply_entrywise(phi: Automorphism, A: GRMatrix) -> GRMatrix:
    return [[phi(a) for a in row] for row in A]


def boundary_matrix(m: Marking, vertex_order: Sequence[int]) -> GRMatrix:
    """Cellular boundary of the cover, row per edge: w(e) at d1(e) minus 1 at d0(e)."""
    g = m.graph
    position = {u: i for i, u in enumerate(vertex_order)}
    D = []
    for e, (a, b) in enumerate(g.edges):
        row = [GroupRingElement()] * g.num_vertices
        row[position[b]] = row[position[b]] + GroupRingElement.of(m.edge_words[e])
        row[position[a]] = row[position[a]] - GroupRingElement.one()
        D.append(row)
    return D


def times_t(A: GRMatrix, k: int = 1) -> list:
    """The matrix t^k * A over the twisted ring."""
    return [[TwistedPolynomial.monomial(k, a) for a in row] for row in A]


def twisted_power(A: list, k: int, phi: Automorphism) -> list:
    result = A
    for _ in range(k - 1):
        result = twisted_matmul(result, A, phi)
    return result


@dataclass(frozen=True)
class ChainRuleCheck:
    k: int
    passed: bool
    blocks_passed: bool
    mismatches: tuple[tuple[int, int], ...] = ()


def satisfies_convention(f: GraphMorphism) -> bool:
    return f.vertex_map[f.basepoint] == f.basepoint and not f.connecting_path.steps


def verify_chain_rule(f: GraphMorphism, m: Marking, k: int, filt: Filtration | None = None) -> ChainRuleCheck:
    """Compare (t J1(f))^k with t^k J1(f^k), whole and block by block.

    ``f`` must fix its basepoint with a trivial connecting path.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not satisfies_convention(f):
        raise ConventionError(
            "the chain rule check needs f to fix the basepoint with trivial p; "
            "pass to f^q with q = vertex_fixing_power(f) and re-mark at a fixed vertex"
        )
    jac = jacobian(f, m)
    lhs = twisted_power(times_t(jac.J1), k, jac.phi)
    rhs = times_t(jacobian(iterate(f, k), m).J1, k)
    n = len(lhs)
    mismatches = tuple((i, j) for i in range(n) for j in range(n) if lhs[i][j] != rhs[i][j])

    if filt is None:
        filt = refine_filtration(f)
    blocks_ok = True
    for s in range(len(filt.strata)):
        lhs_s = twisted_power(times_t(jacobian_block(jac.J1, filt, s)), k, jac.phi)
        edges = filt.strata[s]
        rhs_s = [[rhs[i][j] for j in edges] for i in edges]
        if lhs_s != rhs_s:
            blocks_ok = False
            break
    return ChainRuleCheck(k, not mismatches and blocks_ok, blocks_ok, mismatches)


def format_matrix(A: GRMatrix) -> list[list[str]]:
    return [[str(a) for a in row] for row in A]


def render_matrix(A: GRMatrix) -> str:
    cells = format_matrix(A)
    if not cells:
        return "[]"
    widths = [max(len(row[j]) for row in cells) for j in range(len(cells[0]))]
    lines = ["[ " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) + " ]" for row in cells]
    return "\n".join(lines)
