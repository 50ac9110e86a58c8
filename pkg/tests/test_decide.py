"""Decision ladder: padding, lifting, branch selection, honest fallbacks."""

import random
from dataclasses import replace
from fractions import Fraction

import pytest

from equitiler import (
    BicliqueObstruction,
    CliqueObstruction,
    Ex1Witness,
    Ex2Witness,
    Graph,
    InternalContradiction,
    PreconditionError,
    Tiling,
    VertexSet,
    build_ex2,
    coloring_obstruction,
    complement,
    decide_equitable,
    decide_kr_factor,
    default_constants,
    equitable_coloring_exact,
    kr_factor_exact,
    lift_coloring,
    ore_edge_bound,
    pad_to_divisible,
    random_gnp,
)
from conftest import random_graph


def vs(*vals):
    return VertexSet(vals)


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def multipartite(sizes):
    n = sum(sizes)
    side = []
    for i, s in enumerate(sizes):
        side.extend([i] * s)
    g = Graph.empty(n)
    for u in range(n):
        for v in range(u + 1, n):
            if side[u] != side[v]:
                g.add_edge(u, v)
    return g


def without_edge(g, u, v):
    out = g.copy()
    out.adj[u] &= ~(1 << v)
    out.adj[v] &= ~(1 << u)
    return out


# Ladder window sized so peeling at n=36 accepts a once-perturbed part and
# nothing else; the refinement scales derive as 2x/4x/8x the first rung.
DESK36 = replace(
    default_constants(3),
    gamma=Fraction(1, 600),
    gammas=(Fraction(1, 300), Fraction(1, 25), Fraction(1, 3), Fraction(1, 3)),
    ladder_ratio=Fraction(1),
)

DENSE = replace(default_constants(3), xi=Fraction(1, 4), epsilon=Fraction(1, 10))


class TestPad:
    def test_seven_three(self):
        g, q = pad_to_divisible(Graph.empty(7), 3)
        assert (g.n, q) == (9, 2)
        assert g.has_edge(7, 8)
        assert all(not g.has_edge(v, 7) and not g.has_edge(v, 8) for v in range(7))

    def test_divisible_passthrough(self):
        k6 = Graph.complete(6)
        g, q = pad_to_divisible(k6, 3)
        assert q == 0 and g is k6

    def test_padded_k4_still_blocked(self):
        g, q = pad_to_divisible(Graph.complete(4), 3)
        assert q == 2
        assert equitable_coloring_exact(g, 3) is None

    def test_degree_bound_preserved(self):
        g = cycle(7)
        padded, _ = pad_to_divisible(g, 3)
        assert ore_edge_bound(padded, 3)[0] == ore_edge_bound(g, 3)[0]

    def test_k_out_of_range(self):
        with pytest.raises(PreconditionError):
            pad_to_divisible(Graph.complete(4), 5)
        with pytest.raises(PreconditionError):
            pad_to_divisible(Graph.complete(4), 0)


class TestLift:
    def test_two_disjoint_edges(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        t = kr_factor_exact(complement(g), 2)
        col = lift_coloring(t, 0, 2, g)
        assert col.verify(g)
        assert set(c.bits for c in col.classes) == {vs(0, 2).bits, vs(1, 3).bits}

    def test_padded_cycle(self):
        # n=7, k=3: two padding vertices must come out of distinct classes,
        # leaving sizes 3,2,2.
        g = cycle(7)
        padded, q = pad_to_divisible(g, 3)
        t = kr_factor_exact(complement(padded), 3)
        assert t is not None
        col = lift_coloring(t, q, 3, g)
        assert col.verify(g)
        assert sorted(len(c) for c in col.classes) == [2, 2, 3]

    def test_wrong_clique_count(self):
        t = Tiling(2, (vs(0, 1), vs(2, 3)))
        with pytest.raises(PreconditionError):
            lift_coloring(t, 0, 3)

    def test_padding_pair_in_one_class(self):
        t = Tiling(2, (vs(4, 5), vs(0, 1), vs(2, 3)))
        with pytest.raises(InternalContradiction):
            lift_coloring(t, 2, 3)


class TestColoringObstruction:
    def test_clique_first(self):
        w = coloring_obstruction(Graph.complete(5), 4)
        assert isinstance(w, CliqueObstruction)
        assert len(w.vertices) == 5

    def test_balanced_biclique(self):
        g = multipartite((3, 3))
        w = coloring_obstruction(g, 3)
        assert isinstance(w, BicliqueObstruction)
        assert w.m == 3

    def test_star_is_an_m1_biclique(self):
        s5 = Graph.from_edges(6, [(0, v) for v in range(1, 6)])
        w = coloring_obstruction(s5, 3)
        assert isinstance(w, BicliqueObstruction)
        assert w.side_a == vs(0)
        assert w.side_b == vs(1, 2, 3, 4, 5)

    def test_even_square_has_none(self):
        assert coloring_obstruction(cycle(4), 2) is None


class TestFactorLadder:
    def test_odd_split_recognized(self):
        c = decide_kr_factor(build_ex2(9, 3, 1), 3)
        assert (c.kind, c.answer, c.provenance) == ("obstructed", False, "recognizer")
        assert isinstance(c.witness, Ex2Witness)
        assert c.witness.verify(build_ex2(9, 3, 1), 3)

    def test_complete_graph(self):
        c = decide_kr_factor(Graph.complete(9), 3)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "oracle")
        assert len(c.certificate.cliques) == 3
        assert c.certificate.verify(Graph.complete(9))

    def test_r_one_and_empty(self):
        c = decide_kr_factor(Graph.empty(30), 1)
        assert c.answer is True and len(c.certificate.cliques) == 30
        c = decide_kr_factor(Graph.empty(0), 3)
        assert c.answer is True and c.certificate.cliques == ()

    def test_divisibility_guard(self):
        with pytest.raises(PreconditionError):
            decide_kr_factor(Graph.complete(7), 3)
        with pytest.raises(PreconditionError):
            decide_kr_factor(Graph.complete(6), 0)

    def test_even_cycle_matching(self):
        c = decide_kr_factor(cycle(30), 2)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "pipeline")
        assert c.certificate.verify(cycle(30))

    def test_star_yields_independent_witness(self):
        star = Graph.from_edges(30, [(0, v) for v in range(1, 30)])
        c = decide_kr_factor(star, 2)
        assert (c.kind, c.answer) == ("obstructed", False)
        assert isinstance(c.witness, Ex1Witness)
        assert c.witness.verify(star, 2)

    def test_two_odd_cliques_settled_without_witness(self):
        g = Graph.empty(30)
        for base in (0, 15):
            for u in range(base, base + 15):
                for v in range(u + 1, base + 15):
                    g.add_edge(u, v)
        c = decide_kr_factor(g, 2)
        assert (c.kind, c.answer) == ("exact", False)
        assert any("28 of 30" in note for note in c.notes)

    def test_dense_even_graph_matches(self):
        rng = random.Random(3)
        g = random_graph(rng, 26, 0.85)
        c = decide_kr_factor(g, 2)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "pipeline")


class TestFactorPipelines:
    def test_dense_absorption_route(self):
        rng = random.Random(0xE0A1)
        g = random_graph(rng, 60, 0.9)
        c = decide_kr_factor(g, 3, cfg=DENSE)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "pipeline")
        assert c.certificate.verify(g)
        assert any(stage == "absorption" for stage, _ in c.timings)

    def test_medium_dense_falls_back_honestly(self):
        # Default xi leaves no room for an absorber family at n=30, so the
        # decider lands on the exact search and says so.
        rng = random.Random(0xE0A1)
        g = random_graph(rng, 30, 0.9)
        c = decide_kr_factor(g, 3)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "oracle")
        assert any("absorption route" in note for note in c.notes)

    def test_odd_split_families_at_36(self):
        for (n, r, s) in ((36, 3, 1), (36, 3, 3), (36, 4, 1)):
            c = decide_kr_factor(build_ex2(n, r, s), r)
            assert (c.kind, c.answer, c.provenance) == ("obstructed", False, "recognizer")

    def test_perturbed_split_through_pipeline(self):
        g = build_ex2(36, 3, 1)
        g.add_edge(24, 25)
        c = decide_kr_factor(g, 3, cfg=DESK36)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "pipeline")
        assert c.certificate.verify(g)

    def test_weakened_split_stays_negative(self):
        g = without_edge(build_ex2(36, 3, 1), 5, 6)
        c = decide_kr_factor(g, 3)
        assert (c.kind, c.answer, c.provenance) == ("exact", False, "oracle")

    def test_tripartite_resolves_by_fallback(self):
        c = decide_kr_factor(multipartite((9, 9, 9)), 3)
        assert (c.kind, c.answer, c.provenance) == ("factorable", True, "oracle")
        assert c.certificate.verify(multipartite((9, 9, 9)))

    def test_midrange_density_is_unresolved(self):
        rng = random.Random(0xE0A1)
        g = random_graph(rng, 60, 0.5)
        c = decide_kr_factor(g, 3)
        assert (c.kind, c.answer, c.verified) == ("unresolved", None, False)
        assert any("absorption route" in note for note in c.notes)
        assert any("fallback cap" in note for note in c.notes)


class TestEquitable:
    def test_clique_obstruction(self):
        c = decide_equitable(Graph.complete(4), 3)
        assert (c.kind, c.answer) == ("obstructed", False)
        assert isinstance(c.witness, CliqueObstruction)
        assert c.witness.verify(Graph.complete(4), 3)

    def test_balanced_biclique_obstruction(self):
        g = multipartite((3, 3))
        c = decide_equitable(g, 3)
        assert (c.kind, c.answer) == ("obstructed", False)
        assert isinstance(c.witness, BicliqueObstruction)
        assert (c.witness.side_a, c.witness.side_b) == (vs(0, 1, 2), vs(3, 4, 5))

    def test_five_cycle(self):
        c = decide_equitable(cycle(5), 3)
        assert (c.kind, c.answer) == ("colorable", True)
        assert sorted(len(cl) for cl in c.certificate.classes) == [1, 2, 2]
        assert c.certificate.verify(cycle(5))

    def test_padded_seven_cycle(self):
        c = decide_equitable(cycle(7), 3)
        assert c.answer is True
        assert sorted(len(cl) for cl in c.certificate.classes) == [2, 2, 3]

    def test_more_colors_than_vertices(self):
        c = decide_equitable(Graph.complete(5), 7)
        assert c.answer is True
        assert c.certificate.verify(Graph.complete(5))

    def test_k_must_be_positive(self):
        with pytest.raises(PreconditionError):
            decide_equitable(Graph.complete(4), 0)

    def test_degree_bound_reported(self):
        c = decide_equitable(cycle(5), 3)
        assert any("holds" in note for note in c.notes)
        c = decide_equitable(Graph.complete(5), 2)
        assert any("fails at" in note for note in c.notes)

    def test_split_complement_witness(self):
        # The complement of the 9-vertex odd split: the recognizer answer on
        # the factor side surfaces as a K_{1,5} in the input graph.
        g = complement(build_ex2(9, 3, 1))
        c = decide_equitable(g, 3)
        assert (c.kind, c.answer, c.provenance) == ("obstructed", False, "recognizer")
        assert isinstance(c.witness, BicliqueObstruction)
        assert (c.witness.side_a, c.witness.side_b) == (vs(0), vs(1, 2, 3, 4, 5))
        assert c.witness.verify(g, 3)

    def test_random_agreement(self):
        rng = random.Random(5)
        for _ in range(150):
            n = rng.randint(2, 12)
            g = random_graph(rng, n, rng.random())
            k = rng.randint(1, n)
            c = decide_equitable(g, k)
            assert c.answer is (equitable_coloring_exact(g, k) is not None)
            if c.answer:
                assert c.certificate.verify(g)

    def test_between_caps_colors_at_source_scale(self):
        # n=19, k=9 pads to 27 vertices, past the main oracle cap.  The
        # wrapper must not hand this to the 27-vertex clique search; the
        # source-scale colouring oracle settles it with a lone oracle stage.
        g = random_gnp(19, 0.5, 414)
        c = decide_equitable(g, 9)
        assert (c.kind, c.provenance) == ("colorable", "oracle")
        assert [stage for stage, _ in c.timings] == ["oracle"]
        assert c.certificate.verify(g, equitable=True)

        c = decide_equitable(Graph.complete(26), 5)
        assert (c.kind, c.answer, c.provenance) == ("obstructed", False, "oracle")
        assert isinstance(c.witness, CliqueObstruction)
        assert c.witness.verify(Graph.complete(26), 5)
