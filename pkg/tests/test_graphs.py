from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equitiler.extremal import build_ex1_like, build_ex2
from equitiler.graphs import (
    Graph,
    VertexSet,
    as_fraction,
    complement,
    connected_components,
    find_clique_of_size,
    gamma_independent,
    induced_edge_count,
    low_degree_set,
    max_independent_set,
    ore_edge_bound,
    sigma,
)

from _brute import adj_sets, brute_independence_number, brute_sigma, graph_edges
from conftest import cycle, random_graph


def edge_list_strategy(max_n=9):
    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=0, max_value=max_n))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
        return n, chosen

    return build()


class TestVertexSet:
    def test_roundtrip(self):
        s = VertexSet([3, 1, 4])
        assert list(s) == [1, 3, 4]
        assert len(s) == 3
        assert 4 in s and 2 not in s
        assert s == VertexSet(0b11010)

    def test_ops(self):
        a, b = VertexSet([0, 1, 2]), VertexSet([2, 3])
        assert (a & b).members() == (2,)
        assert (a | b).members() == (0, 1, 2, 3)
        assert (a - b).members() == (0, 1)
        assert not a.isdisjoint(b)
        assert VertexSet([2]).issubset(b)

    def test_immutable(self):
        s = VertexSet([1])
        with pytest.raises(AttributeError):
            s.bits = 7


class TestGraphBasics:
    def test_from_edges_rejects_loop(self):
        with pytest.raises(ValueError, match="loop"):
            Graph.from_edges(3, [(1, 1)])

    def test_from_edges_rejects_range(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph.from_edges(3, [(0, 3)])

    def test_from_edges_rejects_duplicate(self):
        with pytest.raises(ValueError, match="duplicate"):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_edge_iteration_sorted(self):
        g = Graph.from_edges(4, [(2, 3), (0, 3), (0, 1)])
        assert list(g.edges()) == [(0, 1), (0, 3), (2, 3)]

    def test_induced_relabels(self):
        g = Graph.from_edges(5, [(0, 2), (2, 4), (1, 3)])
        sub, names = g.induced(0b10101)
        assert names == [0, 2, 4]
        assert graph_edges(sub) == {(0, 1), (1, 2)}

    def test_content_hash_is_label_sensitive(self):
        g1 = Graph.from_edges(3, [(0, 1)])
        g2 = Graph.from_edges(3, [(1, 2)])
        assert g1.content_hash() != g2.content_hash()
        assert g1.content_hash() == Graph.from_edges(3, [(0, 1)]).content_hash()


@settings(max_examples=120, deadline=None)
@given(edge_list_strategy())
def test_complement_involution(ne):
    n, edges = ne
    g = Graph.from_edges(n, edges)
    assert complement(complement(g)) == g
    assert g.edge_count() + complement(g).edge_count() == n * (n - 1) // 2


@settings(max_examples=120, deadline=None)
@given(edge_list_strategy())
def test_sigma_matches_reference(ne):
    n, edges = ne
    g = Graph.from_edges(n, edges)
    st_ = sigma(g)
    ref = brute_sigma(n, edges)
    if ref is None:
        assert st_.is_complete
        assert st_.sigma == math.inf
    else:
        assert st_.sigma == ref
        x, y = st_.witness
        assert not g.has_edge(x, y)
        assert g.degree(x) + g.degree(y) == ref


def test_sigma_of_halved_join_matches_bound():
    # Independent part of size n/r + 1 joined to a clique: the floor sits on
    # pairs inside the independent part and equals 2(1 - 1/r)n - 2.
    g = build_ex1_like(6, 3)
    st_ = sigma(g)
    assert st_.sigma == 6
    assert st_.witness == (0, 1)
    r, n = 3, 6
    assert st_.sigma == Fraction(2) * (1 - Fraction(1, r)) * n - 2


def test_sigma_witness_is_lex_smallest():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert sigma(g).witness == (0, 2)


def test_ore_edge_bound_reports_worst_edge():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    ok, worst = ore_edge_bound(g, 2)
    assert ok and worst == (1, 2)
    ok2, worst2 = ore_edge_bound(g, 1)
    assert not ok2 and worst2 == (1, 2)
    assert ore_edge_bound(Graph.empty(3), 1) == (True, None)


class TestGammaIndependent:
    def test_exact_threshold(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2)])
        everyone = VertexSet([0, 1, 2, 3])
        assert gamma_independent(g, everyone, Fraction(2, 16))
        assert not gamma_independent(g, everyone, Fraction(1, 16))

    def test_string_and_float_thresholds_agree(self):
        g = Graph.from_edges(5, [(0, 1)])
        s = VertexSet([0, 1, 2])
        assert gamma_independent(g, s, "1/25") == gamma_independent(g, s, Fraction(1, 25))
        assert as_fraction(0.04) == Fraction(1, 25)

    def test_zero_budget_means_independent(self):
        g = Graph.from_edges(4, [(0, 1)])
        assert gamma_independent(g, VertexSet([1, 2, 3]), 0)
        assert not gamma_independent(g, VertexSet([0, 1]), 0)


def test_low_degree_set_splits_odd_split_shape():
    # In the odd-split graph on 12 vertices with r=3, s=1 the small clique
    # side is the unique low-degree class: degree 4 vs 8 and 10.
    g = build_ex2(12, 3, 1)
    assert sorted(g.degrees()) == [4] + [8] * 4 + [10] * 7
    assert low_degree_set(g, 7).members() == (0,)
    assert low_degree_set(g, Fraction(9, 2)).members() == (0,)
    assert low_degree_set(g, 4).members() == ()


class TestCliqueSearch:
    def test_petersen_is_triangle_free(self, petersen):
        assert find_clique_of_size(petersen, 3) is None
        assert find_clique_of_size(petersen, 2) == VertexSet([0, 1])

    def test_lex_first(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
        assert find_clique_of_size(g, 3) == VertexSet([0, 1, 2])

    def test_inside_mask(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
        assert find_clique_of_size(g, 3, VertexSet([3, 4, 5])) == VertexSet([3, 4, 5])
        assert find_clique_of_size(g, 3, VertexSet([1, 2, 3, 4])) is None

    def test_trivial_sizes(self):
        g = Graph.empty(3)
        assert find_clique_of_size(g, 0) == VertexSet(0)
        assert find_clique_of_size(g, 1) == VertexSet([0])
        assert find_clique_of_size(g, 2) is None


def test_max_independent_set_matches_reference(rng):
    for _ in range(60):
        n = rng.randrange(1, 11)
        g = random_graph(rng, n, rng.choice([0.2, 0.5, 0.8]))
        mis = max_independent_set(g)
        assert g.is_independent(mis.bits)
        assert len(mis) == brute_independence_number(n, list(g.edges()))


def test_connected_components():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (4, 5)])
    comps = connected_components(g)
    assert [c.members() for c in comps] == [(0, 1, 2), (3,), (4, 5), (6,)]


def test_cycle_nine_has_independence_number_four():
    g = cycle(9)
    assert len(max_independent_set(g)) == 4


def test_induced_edge_count_matches_reference(rng):
    for _ in range(40):
        n = rng.randrange(1, 10)
        g = random_graph(rng, n, 0.5)
        mask = rng.randrange(0, 1 << n)
        verts = [v for v in range(n) if (mask >> v) & 1]
        adj = adj_sets(n, list(g.edges()))
        expect = sum(1 for i, u in enumerate(verts) for w in verts[i + 1:] if w in adj[u])
        assert induced_edge_count(g, mask) == expect
