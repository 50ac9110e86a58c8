from __future__ import annotations

import pytest

from equitiler.graphio import (
    GraphParseError,
    dumps,
    loads,
    parse_dimacs,
    parse_edgelist,
    write_dimacs,
    write_edgelist,
)
from equitiler.graphs import Graph

from _brute import graph_edges
from conftest import random_graph


def test_edgelist_roundtrip(rng):
    for _ in range(25):
        g = random_graph(rng, rng.randrange(0, 12), 0.4)
        assert parse_edgelist(write_edgelist(g)) == g


def test_dimacs_roundtrip(rng):
    for _ in range(25):
        g = random_graph(rng, rng.randrange(1, 12), 0.4)
        assert parse_dimacs(write_dimacs(g)) == g


def test_formats_describe_same_graph():
    g = Graph.from_edges(4, [(0, 2), (1, 3)])
    assert graph_edges(loads(dumps(g, "dimacs"), "dimacs")) == graph_edges(g)


def test_edgelist_comments_and_blanks():
    g = parse_edgelist("# header\n\n3 2\n0 1\n\n# mid\n1 2\n")
    assert graph_edges(g) == {(0, 1), (1, 2)}


def test_edgelist_duplicate_reports_line():
    with pytest.raises(GraphParseError) as ei:
        parse_edgelist("3 2\n0 1\n1 0\n")
    assert ei.value.line_no == 3
    assert "duplicate" in str(ei.value)


def test_edgelist_loop_reports_line():
    with pytest.raises(GraphParseError) as ei:
        parse_edgelist("3 1\n2 2\n")
    assert ei.value.line_no == 2 and "loop" in str(ei.value)


def test_edgelist_out_of_range():
    with pytest.raises(GraphParseError, match="out of range"):
        parse_edgelist("3 1\n0 3\n")


def test_edgelist_count_mismatch():
    with pytest.raises(GraphParseError, match="declared 2"):
        parse_edgelist("3 2\n0 1\n")
    with pytest.raises(GraphParseError, match="more than the declared"):
        parse_edgelist("3 1\n0 1\n1 2\n")


def test_edgelist_bad_header():
    with pytest.raises(GraphParseError, match="header"):
        parse_edgelist("3\n")
    with pytest.raises(GraphParseError, match="empty"):
        parse_edgelist("# nothing\n")


def test_dimacs_one_based():
    g = parse_dimacs("c demo\np edge 3 2\ne 1 2\ne 2 3\n")
    assert graph_edges(g) == {(0, 1), (1, 2)}


def test_dimacs_zero_vertex_rejected():
    with pytest.raises(GraphParseError) as ei:
        parse_dimacs("p edge 3 1\ne 0 1\n")
    assert ei.value.line_no == 2


def test_dimacs_duplicate_reversed():
    with pytest.raises(GraphParseError) as ei:
        parse_dimacs("p edge 3 2\ne 1 2\ne 2 1\n")
    assert ei.value.line_no == 3 and "duplicate" in str(ei.value)


def test_dimacs_unknown_line_type():
    with pytest.raises(GraphParseError, match="unknown line type"):
        parse_dimacs("p edge 2 0\nx 1 2\n")


def test_dimacs_edge_before_problem():
    with pytest.raises(GraphParseError, match="before problem"):
        parse_dimacs("e 1 2\n")


def test_unknown_format():
    with pytest.raises(ValueError, match="unknown format"):
        loads("2 0\n", "adjacency")
