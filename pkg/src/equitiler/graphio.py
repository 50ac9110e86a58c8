"""Graph readers/writers: plain edge lists and DIMACS .col.

Edge list format: first data line "n m", then m lines "u v" with 0-based
endpoints.  DIMACS: "c" comment lines, one "p edge n m" line, then "e u v"
lines with 1-based endpoints.  Both readers reject loops, duplicate edges
(either orientation) and out-of-range endpoints, reporting the offending
line number.
"""

from __future__ import annotations

from typing import Optional

from .graphs import Graph

__all__ = ["GraphParseError", "parse_edgelist", "parse_dimacs", "write_edgelist", "write_dimacs", "loads", "dumps"]


class GraphParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


def _add_checked(g: Graph, u: int, v: int, line_no: int) -> None:
    if u == v:
        raise GraphParseError(line_no, f"loop at vertex {u}")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphParseError(line_no, f"endpoint out of range: ({u},{v}) with n={g.n}")
    if g.has_edge(u, v):
        raise GraphParseError(line_no, f"duplicate edge ({u},{v})")
    g.adj[u] |= 1 << v
    g.adj[v] |= 1 << u


def parse_edgelist(text: str) -> Graph:
    g: Optional[Graph] = None
    m_expected = 0
    m_seen = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if g is None:
            if len(fields) != 2:
                raise GraphParseError(line_no, "expected header 'n m'")
            try:
                n, m_expected = int(fields[0]), int(fields[1])
            except ValueError:
                raise GraphParseError(line_no, "expected integer header 'n m'") from None
            if n < 0 or m_expected < 0:
                raise GraphParseError(line_no, "negative header values")
            g = Graph.empty(n)
            continue
        if len(fields) != 2:
            raise GraphParseError(line_no, f"expected edge 'u v', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphParseError(line_no, f"non-integer endpoint in {line!r}") from None
        m_seen += 1
        if m_seen > m_expected:
            raise GraphParseError(line_no, f"more than the declared {m_expected} edges")
        _add_checked(g, u, v, line_no)
    if g is None:
        raise GraphParseError(0, "empty input")
    if m_seen != m_expected:
        raise GraphParseError(0, f"declared {m_expected} edges but found {m_seen}")
    return g


def parse_dimacs(text: str) -> Graph:
    g: Optional[Graph] = None
    m_expected = 0
    m_seen = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if g is not None:
                raise GraphParseError(line_no, "second problem line")
            if len(fields) != 4 or fields[1] != "edge":
                raise GraphParseError(line_no, "expected 'p edge n m'")
            try:
                n, m_expected = int(fields[2]), int(fields[3])
            except ValueError:
                raise GraphParseError(line_no, "non-integer problem line") from None
            if n < 0 or m_expected < 0:
                raise GraphParseError(line_no, "negative problem line values")
            g = Graph.empty(n)
        elif fields[0] == "e":
            if g is None:
                raise GraphParseError(line_no, "edge before problem line")
            if len(fields) != 3:
                raise GraphParseError(line_no, "expected 'e u v'")
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphParseError(line_no, f"non-integer endpoint in {line!r}") from None
            m_seen += 1
            if m_seen > m_expected:
                raise GraphParseError(line_no, f"more than the declared {m_expected} edges")
            _add_checked(g, u - 1, v - 1, line_no)
        else:
            raise GraphParseError(line_no, f"unknown line type {fields[0]!r}")
    if g is None:
        raise GraphParseError(0, "missing problem line")
    if m_seen != m_expected:
        raise GraphParseError(0, f"declared {m_expected} edges but found {m_seen}")
    return g


def write_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count()}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.edge_count()}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def loads(text: str, fmt: str = "edgelist") -> Graph:
    if fmt == "edgelist":
        return parse_edgelist(text)
    if fmt == "dimacs":
        return parse_dimacs(text)
    raise ValueError(f"unknown format {fmt!r}")


def dumps(g: Graph, fmt: str = "edgelist") -> str:
    if fmt == "edgelist":
        return write_edgelist(g)
    if fmt == "dimacs":
        return write_dimacs(g)
    raise ValueError(f"unknown format {fmt!r}")
