"""Graph self-maps: validation, composition, transition matrices,
filtrations and the train-track power check."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .algebra import Automorphism
from .errors import MalformedInputError, StructuralError
from .graphs import EdgePath, Graph, Marking, Step, path_to_word, tighten


@dataclass(frozen=True)
class GraphMorphism:
    """A cellular self-map of ``graph``.

    ``connecting_path`` runs from the basepoint to its image; its start *is*
    the basepoint used for the induced automorphism.
    """

    graph: Graph
    vertex_map: tuple[int, ...]
    edge_images: tuple[EdgePath, ...]
    connecting_path: EdgePath

    @property
    def basepoint(self) -> int:
        return self.connecting_path.start

    def image_of_path(self, p: EdgePath) -> EdgePath:
        """f(p) before tightening."""
        steps: list[Step] = []
        for e, s in p.steps:
            img = self.edge_images[e]
            steps.extend(img.steps if s > 0 else img.inverse().steps)
        start = self.vertex_map[p.start]
        return EdgePath(start, tuple(steps), self.vertex_map[p.end])

    def edge_image_str(self, e: int) -> str:
        return self.graph.path_str(self.edge_images[e])


def identity_morphism(graph: Graph, basepoint: int = 0) -> GraphMorphism:
    return GraphMorphism(
        graph,
        tuple(range(graph.num_vertices)),
        tuple(graph.path(a, [(e, 1)]) for e, (a, _) in enumerate(graph.edges)),
        graph.trivial_path(basepoint),
    )


def build_morphism(
    graph: Graph,
    vertex_map: Sequence[int],
    edge_steps: Sequence[Sequence[Step]],
    basepoint: int = 0,
    connecting_steps: Sequence[Step] = (),
) -> GraphMorphism:
    """Assemble a morphism from raw steps, naming the edge at fault on failure."""
    if len(vertex_map) != graph.num_vertices or any(not 0 <= u < graph.num_vertices for u in vertex_map):
        raise StructuralError("vertex map must send every vertex to a vertex")
    if len(edge_steps) != graph.num_edges:
        raise StructuralError("every edge needs an image")
    images = []
    for e, steps in enumerate(edge_steps):
        start = vertex_map[graph.edges[e][0]]
        try:
            images.append(graph.path(start, steps))
        except MalformedInputError as exc:
            raise StructuralError(f"image of edge {graph.edge_names[e]} is not an edge-path from "
                                  f"f({graph.vertex_names[graph.edges[e][0]]}) = "
                                  f"{graph.vertex_names[start]}: {exc}") from None
    try:
        p = graph.path(basepoint, connecting_steps)
    except MalformedInputError as exc:
        raise StructuralError(f"connecting path p does not start at the basepoint: {exc}") from None
    return GraphMorphism(graph, tuple(vertex_map), tuple(images), p)


@dataclass(frozen=True)
class Validated:
    morphism: GraphMorphism
    tightened_edges: tuple[int, ...]


def validate(f: GraphMorphism) -> Validated:
    """Check endpoint compatibility and tighten every edge image.

    Raises :class:`StructuralError` naming the first incompatible edge.
    """
    g = f.graph
    for e, (a, b) in enumerate(g.edges):
        img = f.edge_images[e]
        try:
            g.check_path(img)
        except MalformedInputError as exc:
            raise StructuralError(f"image of edge {g.edge_names[e]}: {exc}") from None
        if img.start != f.vertex_map[a] or img.end != f.vertex_map[b]:
            raise StructuralError(
                f"image of edge {g.edge_names[e]} runs {g.vertex_names[img.start]} -> "
                f"{g.vertex_names[img.end]} but the vertex map requires "
                f"{g.vertex_names[f.vertex_map[a]]} -> {g.vertex_names[f.vertex_map[b]]}"
            )
    p = f.connecting_path
    if p.end != f.vertex_map[p.start]:
        raise StructuralError("connecting path p must end at the image of the basepoint")
    tightened = tuple(e for e, img in enumerate(f.edge_images) if not img.is_reduced)
    images = tuple(tighten(img) for img in f.edge_images)
    return Validated(GraphMorphism(g, f.vertex_map, images, tighten(p)), tightened)


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """The tightened composite ``f o g`` (apply g first).

    The connecting path is p_f * f(p_g), so the induced automorphisms compose
    as Phi_f o Phi_g.
    """
    if f.graph != g.graph:
        raise StructuralError("cannot compose morphisms of different graphs")
    if f.basepoint != g.basepoint:
        raise StructuralError("cannot compose morphisms with different basepoints")
    vertex_map = tuple(f.vertex_map[g.vertex_map[u]] for u in range(f.graph.num_vertices))
    images = tuple(tighten(f.image_of_path(img)) for img in g.edge_images)
    p = tighten(f.connecting_path + f.image_of_path(g.connecting_path))
    return GraphMorphism(f.graph, vertex_map, images, p)


def iterate(f: GraphMorphism, k: int) -> GraphMorphism:
    if k < 0:
        raise ValueError("k must be nonnegative")
    result = identity_morphism(f.graph, f.basepoint)
    for _ in range(k):
        result = compose(f, result)
    return result


def transition_matrix(f: GraphMorphism) -> np.ndarray:
    """Entry (i, j) counts the crossings of e_j, either direction, in f(e_i)."""
    n = f.graph.num_edges
    M = np.zeros((n, n), dtype=np.int64)
    for i, img in enumerate(f.edge_images):
        for e, _ in img.steps:
            M[i, e] += 1
    return M


def induced_automorphism(f: GraphMorphism, m: Marking) -> Automorphism:
    """gamma -> p * f(gamma) * p^-1 read through the marking."""
    if m.basepoint != f.basepoint:
        raise StructuralError("marking and connecting path use different basepoints")
    p = f.connecting_path
    images = []
    for i in range(1, m.rank + 1):
        loop = p + f.image_of_path(m.generator_loop(i)) + p.inverse()
        images.append(path_to_word(m, tighten(loop)))
    return Automorphism(images)


@dataclass(frozen=True)
class Filtration:
    """Strata listed bottom-up; each stratum is a tuple of edge indices."""

    strata: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(tuple(s) for s in self.strata))

    @classmethod
    def trivial(cls, graph: Graph) -> Filtration:
        return cls((tuple(range(graph.num_edges)),))

    @property
    def edge_order(self) -> tuple[int, ...]:
        """All edges, lower strata first."""
        return tuple(e for s in self.strata for e in s)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.strata)

    @property
    def first_indices(self) -> tuple[int, ...]:
        """Position of each stratum's first edge in :attr:`edge_order` (0-based)."""
        out, pos = [], 0
        for s in self.strata:
            out.append(pos)
            pos += len(s)
        return tuple(out)

    def level(self) -> dict[int, int]:
        return {e: s for s, edges in enumerate(self.strata) for e in edges}

    def check_partition(self, graph: Graph) -> None:
        flat = self.edge_order
        if sorted(flat) != list(range(graph.num_edges)) or any(not s for s in self.strata):
            raise StructuralError("filtration strata must partition the edges into nonempty sets")


def invariance_violation(f: GraphMorphism, filt: Filtration) -> tuple[int, int] | None:
    """First ``(edge, crossed edge)`` with the crossed edge in a higher stratum."""
    level = filt.level()
    for s, edges in enumerate(filt.strata):
        for e in edges:
            for crossed, _ in f.edge_images[e].steps:
                if level[crossed] > s:
                    return e, crossed
    return None


def check_invariant(f: GraphMorphism, filt: Filtration) -> None:
    filt.check_partition(f.graph)
    bad = invariance_violation(f, filt)
    if bad is not None:
        names = f.graph.edge_names
        raise StructuralError(
            f"filtration is not invariant: the image of {names[bad[0]]} crosses {names[bad[1]]}, "
            f"which lies in a higher stratum"
        )


def refine_filtration(f: GraphMorphism, coarse: Filtration | None = None) -> Filtration:
    """Split each stratum so that every diagonal block is zero or irreducible.

    Blocks are the strongly connected components of the transition digraph
    inside each coarse stratum. A component sits above everything it maps
    onto; ties go to the component with the smallest edge index.
    """
    if coarse is None:
        coarse = Filtration.trivial(f.graph)
    check_invariant(f, coarse)
    M = transition_matrix(f)
    strata: list[tuple[int, ...]] = []
    for layer in coarse.strata:
        digraph = nx.DiGraph()
        digraph.add_nodes_from(layer)
        digraph.add_edges_from((i, j) for i in layer for j in layer if M[i, j] > 0)
        components = [tuple(sorted(c)) for c in nx.strongly_connected_components(digraph)]
        owner = {e: k for k, comp in enumerate(components) for e in comp}
        succ = [
            {owner[j] for i in comp for j in digraph.successors(i)} - {k}
            for k, comp in enumerate(components)
        ]
        placed: set[int] = set()
        while len(placed) < len(components):
            ready = [k for k in range(len(components)) if k not in placed and succ[k] <= placed]
            k = min(ready, key=lambda k: components[k][0])
            placed.add(k)
            strata.append(components[k])
    return Filtration(tuple(strata))


def block(M: np.ndarray, edges: Sequence[int]) -> np.ndarray:
    idx = np.asarray(edges, dtype=int)
    return M[np.ix_(idx, idx)]


def permuted(M: np.ndarray, filt: Filtration) -> np.ndarray:
    """``M`` with rows and columns listed in filtration order."""
    return block(M, filt.edge_order)


def is_lower_block_triangular(M: np.ndarray, filt: Filtration) -> bool:
    level = filt.level()
    n = M.shape[0]
    return all(M[i, j] == 0 for i in range(n) for j in range(n) if level[j] > level[i])


@dataclass(frozen=True)
class RTTCheck:
    K: int
    passed: bool
    first_failure: tuple[int, int] | None = None  # (power k, stratum index)


def _int_matpow(A: np.ndarray, k: int) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    result = np.identity(A.shape[0], dtype=int).astype(object)
    for _ in range(k):
        result = result.dot(A)
    return result


def rtt_power_check(f: GraphMorphism, filt: Filtration, K: int = 4) -> RTTCheck:
    """Compare M(f^k)_s with (M(f)_s)^k for k = 1..K.

    Passing is necessary, not sufficient, for ``f`` to be a relative
    train-track map.
    """
    blocks = [block(transition_matrix(f), s) for s in filt.strata]
    fk = f
    for k in range(1, K + 1):
        if k > 1:
            fk = compose(f, fk)
        Mk = transition_matrix(fk)
        for s, edges in enumerate(filt.strata):
            if not np.array_equal(block(Mk, edges).astype(object), _int_matpow(blocks[s], k)):
                return RTTCheck(K, False, (k, s))
    return RTTCheck(K, True)


def vertex_fixing_power(f: GraphMorphism) -> int:
    """Smallest q >= 1 with f^q fixing every vertex in the image of f^q."""
    sigma = f.vertex_map
    m = len(sigma)
    # cycle lengths bound the search: q = lcm * (tail + 1) always works
    limit = math.lcm(*range(1, m + 1)) * (m + 1)
    current = list(range(m))
    for q in range(1, limit + 1):
        current = [sigma[u] for u in current]
        if all(current[u] == u for u in set(current)):
            return q
    raise AssertionError("unreachable: some power always fixes its image")
