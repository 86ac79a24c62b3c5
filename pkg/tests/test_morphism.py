import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from randomized import random_morphism

from l2tt import catalog
from l2tt.algebra import Automorphism, parse_word
from l2tt.dsl import load
from l2tt.errors import StructuralError
from l2tt.graphs import spanning_tree
from l2tt.morphism import (
    Filtration,
    build_morphism,
    compose,
    identity_morphism,
    induced_automorphism,
    invariance_violation,
    is_lower_block_triangular,
    iterate,
    refine_filtration,
    rtt_power_check,
    transition_matrix,
    validate,
    vertex_fixing_power,
)
from l2tt.spectral import is_irreducible

THETA = catalog.example("theta")
DKL = catalog.example("dkl")
ROSE_POLY = catalog.example("rose_poly")

ROSE_SWAP = """\
graph:
  vertex v
  edge a = v -> v
  edge b = v -> v

map:
  v -> v
  a -> b
  b -> b^-1 a
"""

# edge images as printed, counted by hand into rows of M
DKL_IMAGES = {"a": "d", "b": "a", "c": "b a^-1", "d": "c^-1 a b^-1 d a^-1 b"}


def count_matrix(images: dict[str, str], order: str) -> np.ndarray:
    rows = []
    for e in order:
        c = Counter(tok.removesuffix("^-1") for tok in images[e].split())
        rows.append([c[x] for x in order])
    return np.array(rows)


class TestValidate:
    def test_examples_valid(self):
        for problem in (THETA, DKL):
            assert validate(problem.morphism).tightened_edges == ()

    def test_wrong_vertex_names_edge(self):
        g = THETA.graph
        f = THETA.morphism
        images = [img.steps for img in f.edge_images]
        images[g.edge("c")] = [(g.edge("a"), 1)]  # c must start at f(v) = w but a starts at v
        with pytest.raises(StructuralError, match="edge c"):
            build_morphism(g, f.vertex_map, images, 0, f.connecting_path.steps)

    def test_tightening_reported(self):
        g = ROSE_POLY.graph
        a, b = g.edge("a"), g.edge("b")
        f = build_morphism(g, [0], [[(a, 1), (b, 1), (b, -1), (b, 1)], [(b, 1)]])
        v = validate(f)
        assert v.tightened_edges == (a,)
        assert g.path_str(v.morphism.edge_images[a]) == "a b"


class TestComposition:
    def test_iterate_one(self):
        assert iterate(THETA.morphism, 1) == validate(THETA.morphism).morphism

    def test_theta_period(self):
        f3 = iterate(THETA.morphism, 3)
        assert [THETA.graph.path_str(p) for p in f3.edge_images] == ["a^-1", "b^-1", "c^-1"]
        f6 = iterate(THETA.morphism, 6)
        assert [THETA.graph.path_str(p) for p in f6.edge_images] == ["a", "b", "c"]
        assert f6.vertex_map == (0, 1)

    def test_dkl_square(self):
        f2 = iterate(DKL.morphism, 2)
        assert DKL.graph.path_str(f2.edge_images[DKL.graph.edge("b")]) == "d"

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10_000))
    def test_transition_submultiplicative(self, seed):
        rng = random.Random(seed)
        f = random_morphism(rng, max_len=4)
        g = random_morphism(rng, f.graph, max_len=4)
        bound = transition_matrix(g) @ transition_matrix(f)
        assert (transition_matrix(compose(f, g)) <= bound).all()

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000))
    def test_induced_automorphism_composes(self, seed):
        rng = random.Random(seed)
        f = random_morphism(rng, fix_basepoint=True, max_len=4)
        g = random_morphism(rng, f.graph, fix_basepoint=True, max_len=4)
        m = spanning_tree(f.graph)
        assert induced_automorphism(compose(f, g), m) == induced_automorphism(f, m).compose(induced_automorphism(g, m))


class TestTransitionMatrix:
    def test_theta(self):
        assert transition_matrix(THETA.morphism).tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]

    def test_dkl(self):
        M = transition_matrix(DKL.morphism)
        assert M.tolist() == [[0, 0, 0, 1], [1, 0, 0, 0], [1, 1, 0, 0], [2, 2, 1, 1]]
        assert np.array_equal(M, count_matrix(DKL_IMAGES, "abcd"))

    def test_identity(self):
        assert np.array_equal(transition_matrix(identity_morphism(DKL.graph)), np.eye(4, dtype=int))


class TestInducedAutomorphism:
    def test_dkl(self):
        phi = induced_automorphism(DKL.morphism, DKL.marking)
        assert phi == Automorphism([parse_word("x2"), parse_word("x3*x1*x2*x1^-1*x2^-1"), parse_word("x1")])

    def test_theta_with_connecting_path(self):
        # p = b: x1 = b a^-1 goes to b . c^-1 b . b^-1 = x2, x2 = b c^-1 to b . c^-1 a . b^-1 = x2 x1^-1
        phi = induced_automorphism(THETA.morphism, THETA.marking)
        assert phi == Automorphism([parse_word("x2"), parse_word("x2*x1^-1")])

    def test_identity(self):
        f = identity_morphism(DKL.graph)
        assert induced_automorphism(f, DKL.marking) == Automorphism.identity(3)


class TestFiltration:
    def test_single_strata(self):
        assert refine_filtration(DKL.morphism).strata == ((0, 1, 2, 3),)
        assert refine_filtration(THETA.morphism).strata == ((0, 1, 2),)

    def test_rose_two_strata(self):
        filt = refine_filtration(ROSE_POLY.morphism)
        b, a = ROSE_POLY.graph.edge("b"), ROSE_POLY.graph.edge("a")
        assert filt.strata == ((b,), (a,))

    def test_non_invariant_detected(self):
        g = ROSE_POLY.graph
        bad = Filtration(((g.edge("a"),), (g.edge("b"),)))
        assert invariance_violation(ROSE_POLY.morphism, bad) is not None
        with pytest.raises(StructuralError):
            refine_filtration(ROSE_POLY.morphism, bad)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10_000))
    def test_refined_blocks(self, seed):
        f = random_morphism(random.Random(seed))
        filt = refine_filtration(f)
        M = transition_matrix(f)
        assert is_lower_block_triangular(M, filt)
        for edges in filt.strata:
            B = M[np.ix_(edges, edges)]
            assert is_irreducible(B) or (len(edges) == 1 and B[0, 0] == 0)


class TestRTT:
    def test_examples_pass(self):
        assert rtt_power_check(DKL.morphism, refine_filtration(DKL.morphism), 4).passed
        assert rtt_power_check(THETA.morphism, refine_filtration(THETA.morphism), 6).passed

    def test_rose_swap_pinned(self):
        # f^2(b) = a^-1 b b and f^3(b) = b^-1 b^-1 a b^-1 a: nothing cancels
        f = load(ROSE_SWAP).morphism
        check = rtt_power_check(f, refine_filtration(f), 4)
        assert check.passed and check.first_failure is None

    def test_cancellation_detected(self):
        g = ROSE_POLY.graph
        a, b = g.edge("a"), g.edge("b")
        # a -> a b, b -> b^-1 a: f(a b) = a b b^-1 a tightens to a a
        f = build_morphism(g, [0], [[(a, 1), (b, 1)], [(b, -1), (a, 1)]])
        check = rtt_power_check(f, refine_filtration(f), 4)
        assert not check.passed and check.first_failure == (2, 0)


class TestVertexFixingPower:
    def test_examples(self):
        assert vertex_fixing_power(THETA.morphism) == 2
        assert vertex_fixing_power(DKL.morphism) == 1
        assert vertex_fixing_power(identity_morphism(THETA.graph)) == 1

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000))
    def test_minimal(self, seed):
        f = random_morphism(random.Random(seed), max_len=3)
        q = vertex_fixing_power(f)
        for k in range(1, q + 1):
            vm = iterate(f, k).vertex_map
            fixes = all(vm[u] == u for u in set(vm))
            assert fixes == (k == q)
