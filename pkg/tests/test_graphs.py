import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from randomized import random_graph, random_walk

from l2tt import catalog
from l2tt.algebra import IDENTITY, parse_word
from l2tt.errors import MalformedInputError, StructuralError
from l2tt.graphs import CoverPoint, EdgePath, Graph, lift_path, path_to_word, spanning_tree, tighten

THETA = catalog.example("theta")
DKL = catalog.example("dkl")


def path(problem, start: str, text: str) -> EdgePath:
    g = problem.graph
    steps = []
    for tok in text.split():
        name, sign = (tok[:-3], -1) if tok.endswith("^-1") else (tok, 1)
        steps.append((g.edge(name), sign))
    return g.path(g.vertex(start), steps)


class TestGraph:
    def test_rank(self):
        assert THETA.graph.rank == 2
        assert DKL.graph.rank == 3

    def test_low_valence_rejected(self):
        with pytest.raises(StructuralError, match="valence"):
            Graph.from_names(["v", "w"], [("a", "v", "w"), ("b", "v", "v")])

    def test_disconnected_rejected(self):
        with pytest.raises(StructuralError):
            Graph.from_names(["v", "w"], [("a", "v", "v"), ("b", "w", "w")])

    def test_path_must_be_consistent(self):
        g = THETA.graph
        with pytest.raises(MalformedInputError):
            g.path(g.vertex("v"), [(g.edge("a"), 1), (g.edge("b"), 1)])


class TestTighten:
    def test_examples(self):
        assert tighten(path(THETA, "v", "a a^-1")) == THETA.graph.trivial_path(THETA.graph.vertex("v"))
        assert tighten(path(THETA, "v", "b b^-1 a")) == path(THETA, "v", "a")
        dkl_d = path(DKL, "v", "c^-1 a b^-1 d a^-1 b")
        assert tighten(dkl_d) == dkl_d

    @given(st.integers(0, 10_000))
    def test_idempotent_and_endpoints(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng)
        u = rng.randrange(g.num_vertices)
        steps, x = [], u
        for _ in range(rng.randint(0, 10)):
            e = rng.randrange(g.num_edges)
            a, b = g.edges[e]
            if a == x:
                steps.append((e, 1))
                x = b
            elif b == x:
                steps.append((e, -1))
                x = a
        p = g.path(u, steps)
        t = tighten(p)
        assert (t.start, t.end) == (p.start, p.end)
        assert t.is_reduced
        assert tighten(t) == t


class TestMarking:
    def test_theta_generators(self):
        m = THETA.marking
        assert m.tree == {THETA.graph.edge("b")}
        assert path_to_word(m, path(THETA, "v", "b a^-1")) == parse_word("x1")
        assert path_to_word(m, path(THETA, "v", "b c^-1")) == parse_word("x2")

    def test_dkl_generators(self):
        m = DKL.marking
        assert path_to_word(m, path(DKL, "v", "a b^-1")) == parse_word("x1")
        assert path_to_word(m, path(DKL, "v", "d a^-1")) == parse_word("x2")
        assert path_to_word(m, path(DKL, "v", "c^-1")) == parse_word("x3")

    def test_rose_has_empty_tree(self):
        rose = catalog.example("golden")
        assert rose.marking.tree == frozenset()
        assert [str(w) for w in rose.marking.edge_words] == ["x1", "x2"]

    def test_backtrack_is_trivial(self):
        assert path_to_word(THETA.marking, path(THETA, "v", "b b^-1")) == IDENTITY

    def test_default_orientation(self):
        m = spanning_tree(THETA.graph, 0, [THETA.graph.edge("b")])
        assert path_to_word(m, path(THETA, "v", "a b^-1")) == parse_word("x1")

    def test_bad_tree(self):
        g = THETA.graph
        with pytest.raises(StructuralError):
            spanning_tree(g, 0, [g.edge("a"), g.edge("b")])
        with pytest.raises(StructuralError):
            spanning_tree(g, 0, [g.edge("b")], [(g.edge("a"), 1)])

    @given(st.integers(0, 10_000))
    def test_edge_words(self, seed):
        g = random_graph(random.Random(seed))
        m = spanning_tree(g)
        for e in range(g.num_edges):
            w = m.edge_words[e]
            if e in m.tree:
                assert w == IDENTITY
            else:
                assert len(w) == 1


class TestLift:
    def test_theta_traces(self):
        m, g = THETA.marking, THETA.graph
        w = g.vertex("w")
        crossings, end = lift_path(m, CoverPoint(IDENTITY, w), path(THETA, "w", "b^-1"))
        assert crossings == [(IDENTITY, g.edge("b"), -1)]
        assert end == CoverPoint(IDENTITY, g.vertex("v"))
        crossings, _ = lift_path(m, CoverPoint(IDENTITY, w), path(THETA, "w", "a^-1"))
        assert crossings == [(parse_word("x1"), g.edge("a"), -1)]

    def test_empty(self):
        start = CoverPoint(parse_word("x2"), 0)
        assert lift_path(THETA.marking, start, THETA.graph.trivial_path(0)) == ([], start)

    @given(st.integers(0, 10_000))
    def test_concatenation_and_loops(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng)
        m = spanning_tree(g)
        mid = rng.randrange(g.num_vertices)
        p = g.path(0, random_walk(rng, g, 0, mid, 6))
        q = g.path(mid, random_walk(rng, g, mid, 0, 6))
        start = CoverPoint(IDENTITY, 0)
        lp, end_p = lift_path(m, start, p)
        lq, end_q = lift_path(m, end_p, q)
        lpq, end_pq = lift_path(m, start, p + q)
        assert lpq == lp + lq and end_pq == end_q
        assert end_pq == CoverPoint(path_to_word(m, p + q), 0)
