"""Finite graphs, edge-paths, markings pi_1(G, v) = F and lifting to the
universal cover.

Vertices and edges are referred to by their index in input order. A step of
an edge-path is a pair ``(edge, sign)``; sign ``+1`` crosses the edge from its
initial to its terminal vertex.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from .algebra import IDENTITY, Word
from .errors import MalformedInputError, StructuralError

Step = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """A finite connected graph without valence-one vertices.

    ``edges`` holds ``(initial, terminal)`` vertex indices.
    """

    vertex_names: tuple[str, ...]
    edge_names: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    _vertex_index: dict = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_names", tuple(self.vertex_names))
        object.__setattr__(self, "edge_names", tuple(self.edge_names))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(self.edge_names) != len(self.edges):
            raise MalformedInputError("one name per edge is required")
        if len(set(self.vertex_names)) != len(self.vertex_names):
            raise MalformedInputError("duplicate vertex name")
        if len(set(self.edge_names)) != len(self.edge_names):
            raise MalformedInputError("duplicate edge name")
        m = len(self.vertex_names)
        if m == 0:
            raise StructuralError("a graph needs at least one vertex")
        for name, (a, b) in zip(self.edge_names, self.edges):
            if not (0 <= a < m and 0 <= b < m):
                raise MalformedInputError(f"edge {name} references a missing vertex")
        object.__setattr__(self, "_vertex_index", {n: i for i, n in enumerate(self.vertex_names)})
        object.__setattr__(self, "_edge_index", {n: i for i, n in enumerate(self.edge_names)})

        valence = [0] * m
        for a, b in self.edges:
            valence[a] += 1
            valence[b] += 1
        for name, val in zip(self.vertex_names, valence):
            if val < 2:
                raise StructuralError(f"vertex {name} has valence {val}; valence at least 2 is required")
        if len(self._component(0)) != m:
            raise StructuralError("graph is not connected")

    @classmethod
    def from_names(cls, vertices: Sequence[str], edges: Sequence[tuple[str, str, str]]) -> Graph:
        """Build from vertex names and ``(edge, initial, terminal)`` name triples."""
        index = {v: i for i, v in enumerate(vertices)}
        try:
            return cls(
                tuple(vertices),
                tuple(e for e, _, _ in edges),
                tuple((index[a], index[b]) for _, a, b in edges),
            )
        except KeyError as exc:
            raise MalformedInputError(f"unknown vertex {exc.args[0]}") from None

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def rank(self) -> int:
        """Rank of the fundamental group, 1 - chi."""
        return self.num_edges - self.num_vertices + 1

    def vertex(self, name: str) -> int:
        try:
            return self._vertex_index[name]
        except KeyError:
            raise MalformedInputError(f"unknown vertex {name}") from None

    def edge(self, name: str) -> int:
        try:
            return self._edge_index[name]
        except KeyError:
            raise MalformedInputError(f"unknown edge {name}") from None

    def step_ends(self, step: Step) -> tuple[int, int]:
        e, sign = step
        a, b = self.edges[e]
        return (a, b) if sign > 0 else (b, a)

    def _component(self, start: int) -> set[int]:
        adj: dict[int, list[int]] = {}
        for a, b in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in adj.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def path(self, start: int, steps: Iterable[Step]) -> EdgePath:
        """Build an edge-path, checking that consecutive steps meet."""
        steps = tuple((int(e), int(s)) for e, s in steps)
        here = start
        for i, (e, s) in enumerate(steps):
            if not 0 <= e < self.num_edges or s not in (1, -1):
                raise MalformedInputError(f"bad step {(e, s)!r}")
            a, b = self.step_ends((e, s))
            if a != here:
                raise MalformedInputError(
                    f"step {i} ({self.step_name((e, s))}) starts at {self.vertex_names[a]}, "
                    f"not at {self.vertex_names[here]}"
                )
            here = b
        return EdgePath(start, steps, here)

    def trivial_path(self, vertex: int) -> EdgePath:
        return EdgePath(vertex, (), vertex)

    def check_path(self, p: EdgePath) -> None:
        q = self.path(p.start, p.steps)
        if q.end != p.end:
            raise MalformedInputError("path end does not match its steps")

    def step_name(self, step: Step) -> str:
        e, s = step
        return self.edge_names[e] if s > 0 else f"{self.edge_names[e]}^-1"

    def path_str(self, p: EdgePath) -> str:
        return " ".join(self.step_name(st) for st in p.steps) if p.steps else "."


@dataclass(frozen=True)
class EdgePath:
    start: int
    steps: tuple[Step, ...]
    end: int

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def is_reduced(self) -> bool:
        return all(
            not (e1 == e2 and s1 == -s2)
            for (e1, s1), (e2, s2) in zip(self.steps, self.steps[1:])
        )

    @property
    def is_loop(self) -> bool:
        return self.start == self.end

    def __add__(self, other: EdgePath) -> EdgePath:
        if self.end != other.start:
            raise MalformedInputError("cannot concatenate: paths do not meet")
        return EdgePath(self.start, self.steps + other.steps, other.end)

    def inverse(self) -> EdgePath:
        return EdgePath(self.end, tuple((e, -s) for e, s in reversed(self.steps)), self.start)


def tighten(p: EdgePath, graph: Graph | None = None) -> EdgePath:
    """The unique reduced path homotopic to ``p`` rel endpoints.

    With ``graph`` given the input is first checked for consistency.
    """
    if graph is not None:
        graph.check_path(p)
    out: list[Step] = []
    for e, s in p.steps:
        if out and out[-1] == (e, -s):
            out.pop()
        else:
            out.append((e, s))
    return EdgePath(p.start, tuple(out), p.end)


class CoverPoint(NamedTuple):
    """The vertex g * v~_u of the universal cover."""

    group: Word
    vertex: int


@dataclass(frozen=True)
class Marking:
    """A spanning tree at a basepoint and the isomorphism pi_1(G, v) = F it induces.

    ``generators[i - 1] = (edge, sign)`` says that x_i is the loop obtained by
    crossing ``edge`` in direction ``sign`` and joining its ends to the
    basepoint through the tree. ``edge_words[e]`` is the word of the loop
    tau(d0 e) * e * tau(d1 e)^-1, where tau(u) is the tree path from the
    basepoint to u.
    """

    graph: Graph
    basepoint: int
    tree: frozenset[int]
    generators: tuple[Step, ...]
    edge_words: tuple[Word, ...]
    tree_paths: tuple[EdgePath, ...]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def generator_loop(self, i: int) -> EdgePath:
        """The loop at the basepoint representing x_i."""
        e, s = self.generators[i - 1]
        a, b = self.graph.step_ends((e, s))
        loop = self.tree_paths[a] + self.graph.path(a, [(e, s)]) + self.tree_paths[b].inverse()
        return tighten(loop)

    def generator_names(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.rank + 1)]


def _bfs_tree(graph: Graph, basepoint: int) -> frozenset[int]:
    seen = {basepoint}
    queue = deque([basepoint])
    tree = set()
    while queue:
        u = queue.popleft()
        for e, (a, b) in enumerate(graph.edges):
            if a == u and b not in seen:
                other = b
            elif b == u and a not in seen:
                other = a
            else:
                continue
            seen.add(other)
            tree.add(e)
            queue.append(other)
    return frozenset(tree)


def _tree_paths(graph: Graph, basepoint: int, tree: frozenset[int]) -> list[EdgePath | None]:
    paths: list[EdgePath | None] = [None] * graph.num_vertices
    paths[basepoint] = graph.trivial_path(basepoint)
    queue = deque([basepoint])
    while queue:
        u = queue.popleft()
        for e in sorted(tree):
            a, b = graph.edges[e]
            for sign, src, dst in ((1, a, b), (-1, b, a)):
                if src == u and paths[dst] is None:
                    paths[dst] = paths[u] + graph.path(u, [(e, sign)])
                    queue.append(dst)
    return paths


def spanning_tree(
    graph: Graph,
    basepoint: int = 0,
    tree: Iterable[int] | None = None,
    generators: Sequence[Step] | None = None,
) -> Marking:
    """Mark ``graph`` by a maximal tree.

    Without ``tree`` a breadth-first tree from the basepoint is used, scanning
    edges in input order. Without ``generators`` the non-tree edges, in input
    order and positively oriented, become x_1, x_2, ...
    """
    if not 0 <= basepoint < graph.num_vertices:
        raise MalformedInputError("basepoint is not a vertex")
    tree = _bfs_tree(graph, basepoint) if tree is None else frozenset(tree)
    for e in tree:
        if not 0 <= e < graph.num_edges:
            raise MalformedInputError(f"tree edge index {e} out of range")
    if len(tree) != graph.num_vertices - 1:
        raise StructuralError(
            f"tree has {len(tree)} edges; a spanning tree of this graph needs {graph.num_vertices - 1}"
        )
    paths = _tree_paths(graph, basepoint, tree)
    if any(p is None for p in paths):
        # right edge count but not spanning means it contains a cycle
        raise StructuralError("tree edges do not form a spanning tree")

    non_tree = [e for e in range(graph.num_edges) if e not in tree]
    if generators is None:
        generators = [(e, 1) for e in non_tree]
    generators = tuple((int(e), int(s)) for e, s in generators)
    if sorted(e for e, _ in generators) != non_tree or any(s not in (1, -1) for _, s in generators):
        raise StructuralError("generators must list every non-tree edge exactly once")

    words = [IDENTITY] * graph.num_edges
    for i, (e, s) in enumerate(generators, 1):
        words[e] = Word.generator(i, s)
    return Marking(graph, basepoint, tree, generators, tuple(words), tuple(paths))


def path_word(m: Marking, p: EdgePath) -> Word:
    """Product of the edge words along ``p``; no loop requirement."""
    letters: list[int] = []
    for e, s in p.steps:
        w = m.edge_words[e]
        letters.extend(w.letters if s > 0 else w.inverse().letters)
    return Word(letters)


def path_to_word(m: Marking, p: EdgePath) -> Word:
    """The element of F represented by a loop at the basepoint."""
    if p.start != m.basepoint or p.end != m.basepoint:
        raise MalformedInputError("path_to_word needs a loop at the basepoint")
    return path_word(m, p)


def lift_path(m: Marking, start: CoverPoint, p: EdgePath) -> tuple[list[tuple[Word, int, int]], CoverPoint]:
    """Lift ``p`` to the universal cover starting at ``start``.

    Returns one ``(coordinate, edge, sign)`` triple per step, where the
    crossed lift is ``coordinate * e~``, together with the end point.
    """
    if start.vertex != p.start:
        raise MalformedInputError("path does not start at the vertex of the cover point")
    g = start.group
    crossings = []
    for e, s in p.steps:
        w = m.edge_words[e]
        if s > 0:
            crossings.append((g, e, 1))
            g = g * w
        else:
            g = g * w.inverse()
            crossings.append((g, e, -1))
    return crossings, CoverPoint(g, p.end)
