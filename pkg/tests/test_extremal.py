from __future__ import annotations

import pytest

from equitiler.extremal import (
    BicliqueObstruction,
    CliqueObstruction,
    Ex1Witness,
    Ex2Witness,
    build_ex1_like,
    build_ex2,
    build_obstruction,
    ex2_witness,
    find_biclique,
    recognize_extremal,
)
from equitiler.graphs import Graph, VertexSet

from _brute import has_biclique
from conftest import cycle, random_graph


class TestBuilders:
    def test_ex2_layout(self):
        g = build_ex2(12, 3, 1)
        # Small clique side first, then the big side, then the joined parts.
        assert not any(g.has_edge(0, v) for v in range(1, 8))
        assert all(g.has_edge(0, v) for v in range(8, 12))
        assert g.is_clique(0b11111110)  # vertices 1..7
        assert g.is_independent(0b111100000000)  # vertices 8..11

    def test_ex2_validation(self):
        with pytest.raises(ValueError, match="odd"):
            build_ex2(12, 3, 2)
        with pytest.raises(ValueError, match="divide"):
            build_ex2(13, 3, 1)
        with pytest.raises(ValueError, match="r >= 3"):
            build_ex2(8, 2, 1)
        with pytest.raises(ValueError):
            build_ex2(12, 3, 5)

    def test_ex1_like_structure(self):
        g = build_ex1_like(9, 3)
        assert g.is_independent((1 << 4) - 1)
        assert g.is_clique(g.full_mask ^ ((1 << 4) - 1))
        assert g.degree(0) == 5 and g.degree(8) == 8

    def test_obstruction_clique(self):
        g = build_obstruction(4)
        assert g.n == 5 and g.is_clique(g.full_mask)

    def test_obstruction_biclique(self):
        g = build_obstruction(4, 3)
        assert g.n == 8
        assert g.is_independent((1 << 3) - 1)
        assert g.is_independent(g.full_mask ^ ((1 << 3) - 1))
        assert all(g.has_edge(u, v) for u in range(3) for v in range(3, 8))
        with pytest.raises(ValueError, match="odd"):
            build_obstruction(4, 2)


class TestRecognizer:
    @pytest.mark.parametrize(
        "n,r,s", [(9, 3, 1), (9, 3, 3), (12, 3, 1), (12, 3, 3), (12, 4, 1), (16, 4, 3), (20, 5, 1)]
    )
    def test_roundtrip_odd_split(self, n, r, s):
        g = build_ex2(n, r, s)
        w = recognize_extremal(g, r)
        assert isinstance(w, Ex2Witness)
        assert w.s == s
        assert w.verify(g, r)
        assert w == ex2_witness(n, r, s)

    def test_relabeled_odd_split_still_found(self, rng):
        g = build_ex2(12, 3, 3)
        perm = list(range(12))
        rng.shuffle(perm)
        h = g.relabel(perm)
        w = recognize_extremal(h, 3)
        assert isinstance(w, Ex2Witness) and w.s == 3 and w.verify(h, 3)

    def test_near_independent_found(self):
        g = build_ex1_like(12, 3)
        w = recognize_extremal(g, 3)
        assert isinstance(w, Ex1Witness)
        assert w.verify(g, 3)

    def test_cycle_nine(self):
        w = recognize_extremal(cycle(9), 3)
        assert isinstance(w, Ex1Witness)
        assert len(w.independent_set) == 4
        assert w.verify(cycle(9), 3)

    def test_perturbed_odd_split_not_matched(self):
        g = build_ex2(12, 3, 1)
        g.add_edge(8, 9)  # edge inside a joined part breaks the exact shape
        w = recognize_extremal(g, 3)
        assert not isinstance(w, Ex2Witness)

    def test_dense_random_unrecognized(self, rng):
        g = random_graph(rng, 12, 0.85)
        assert recognize_extremal(g, 3) is None

    def test_equal_sides(self):
        # s = n/r makes both clique sides the same size; either labeling of
        # the pair is a valid witness.
        g = build_ex2(9, 3, 3)
        w = recognize_extremal(g, 3)
        assert isinstance(w, Ex2Witness)
        assert len(w.b0) == len(w.b1) == 3


class TestWitnessVerification:
    def test_ex2_rejects_wrong_graph(self):
        w = ex2_witness(12, 3, 1)
        assert not w.verify(build_ex2(12, 3, 3), 3)
        assert not w.verify(Graph.complete(12), 3)

    def test_ex1_rejects_wrong_size(self):
        w = Ex1Witness(VertexSet([0, 1, 2]))
        assert not w.verify(build_ex1_like(12, 3), 3)

    def test_clique_obstruction(self):
        g = Graph.complete(5)
        assert CliqueObstruction(VertexSet([0, 1, 2, 3, 4])).verify(g, 4)
        assert not CliqueObstruction(VertexSet([0, 1, 2, 3])).verify(g, 4)

    def test_biclique_obstruction_subgraph_semantics(self):
        # Internal edges on either side are irrelevant; cross edges decide.
        g = build_obstruction(3, 1)
        g.add_edge(1, 2)
        w = BicliqueObstruction(VertexSet([0]), VertexSet([1, 2, 3, 4, 5]))
        assert w.verify(g, 3)
        assert not w.verify(g, 4)
        even = BicliqueObstruction(VertexSet([0, 1]), VertexSet([2, 3, 4, 5]))
        assert not even.verify(g, 3)


class TestFindBiclique:
    def test_matches_reference(self, rng):
        for _ in range(80):
            n = rng.randrange(2, 8)
            g = random_graph(rng, n, rng.choice([0.3, 0.6, 0.9]))
            a = rng.randrange(1, 4)
            b = rng.randrange(a, 5)
            got = find_biclique(g, a, b)
            want = has_biclique(n, list(g.edges()), a, b)
            assert (got is not None) == want
            if got is not None:
                sa, sb = got
                assert len(sa) == a and len(sb) == b and sa.isdisjoint(sb)
                for u in sa:
                    for v in sb:
                        assert g.has_edge(u, v)

    def test_too_large(self):
        assert find_biclique(Graph.complete(4), 2, 3) is None
