"""Undirected simple graphs on vertex sets {0..n-1}, stored as bitset adjacency rows.

Rows are plain Python ints, so all the hot set algebra (intersection, union,
complement, popcount) is single machine-word-per-64-vertices work.  Every
operation that has to break a tie does so toward the lowest vertex index; that
convention is relied on throughout the package to keep outputs reproducible.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

__all__ = [
    "Graph",
    "VertexSet",
    "OreStats",
    "as_fraction",
    "iter_bits",
    "mask_of",
    "sigma",
    "complement",
    "ore_edge_bound",
    "gamma_independent",
    "induced_edge_count",
    "low_degree_set",
    "find_clique_of_size",
    "max_clique",
    "max_independent_set",
    "connected_components",
]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def as_fraction(x) -> Fraction:
    """Coerce int/str/Fraction/float to an exact Fraction.

    Floats go through their decimal repr, so as_fraction(0.3) == Fraction(3, 10)
    rather than the binary expansion.  Decision thresholds in this package are
    always compared exactly.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


class VertexSet:
    """Immutable vertex subset backed by one bitmask."""

    __slots__ = ("bits", "_size")

    def __init__(self, bits: int | Iterable[int] = 0):
        if not isinstance(bits, int):
            bits = mask_of(bits)
        if bits < 0:
            raise ValueError("negative bitmask")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "_size", bits.bit_count())

    def __setattr__(self, *a):  # pragma: no cover - guard
        raise AttributeError("VertexSet is immutable")

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self.bits >> v) & 1 == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and other.bits == self.bits

    def __hash__(self) -> int:
        return hash(("VertexSet", self.bits))

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & other.bits)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits | other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits & ~other.bits)

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.bits ^ other.bits)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.bits & other.bits == 0

    def issubset(self, other: "VertexSet") -> bool:
        return self.bits & ~other.bits == 0

    def members(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def __repr__(self) -> str:
        return f"VertexSet({list(iter_bits(self.bits))})"


class Graph:
    """Simple undirected graph; `adj[v]` is the neighbor bitmask of v."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, adj: List[int]):
        self.n = n
        self.adj = adj

    @staticmethod
    def empty(n: int) -> "Graph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        return Graph(n, [0] * n)

    @staticmethod
    def complete(n: int) -> "Graph":
        full = (1 << n) - 1
        return Graph(n, [full ^ (1 << v) for v in range(n)])

    @staticmethod
    def from_edges(n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        g = Graph.empty(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
        if (self.adj[u] >> v) & 1:
            raise ValueError(f"duplicate edge ({u},{v})")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def copy(self) -> "Graph":
        return Graph(self.n, list(self.adj))

    def has_edge(self, u: int, v: int) -> bool:
        return (self.adj[u] >> v) & 1 == 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> List[int]:
        return [a.bit_count() for a in self.adj]

    def degree_in(self, v: int, mask: int) -> int:
        return (self.adj[v] & mask).bit_count()

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def edges(self) -> Iterator[Tuple[int, int]]:
        for u in range(self.n):
            higher = self.adj[u] >> (u + 1)
            for j in iter_bits(higher):
                yield (u, u + 1 + j)

    def is_clique(self, mask: int) -> bool:
        for v in iter_bits(mask):
            rest = mask & ~(1 << v)
            if rest & ~self.adj[v]:
                return False
        return True

    def is_independent(self, mask: int) -> bool:
        for v in iter_bits(mask):
            if self.adj[v] & mask:
                return False
        return True

    def common_neighbors(self, mask: int) -> int:
        """Bitmask of vertices adjacent to every vertex of `mask`; V for mask=0."""
        out = self.full_mask
        for v in iter_bits(mask):
            out &= self.adj[v]
        return out & ~mask if mask else out

    def induced(self, mask: int) -> Tuple["Graph", List[int]]:
        """Induced subgraph plus the old labels of its (reindexed) vertices."""
        verts = list(iter_bits(mask))
        pos = {v: i for i, v in enumerate(verts)}
        sub = Graph.empty(len(verts))
        for i, v in enumerate(verts):
            row = 0
            for w in iter_bits(self.adj[v] & mask):
                row |= 1 << pos[w]
            sub.adj[i] = row
        return sub, verts

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image graph under v -> perm[v]."""
        out = Graph.empty(self.n)
        for u, v in self.edges():
            out.add_edge(perm[u], perm[v])
        return out

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"n={self.n};".encode())
        for u, v in self.edges():
            h.update(f"{u},{v};".encode())
        return h.hexdigest()

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and other.n == self.n and other.adj == self.adj

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count()})"


@dataclass(frozen=True)
class OreStats:
    """Degree-sum floor over non-adjacent pairs, plus degree extremes.

    `sigma` is math.inf exactly when the graph is complete (no non-adjacent
    pair exists); `witness` is then None, otherwise the lexicographically
    smallest minimizing pair.
    """

    sigma: float | int
    witness: Optional[Tuple[int, int]]
    min_degree: int
    max_degree: int

    @property
    def is_complete(self) -> bool:
        return self.witness is None


def sigma(g: Graph) -> OreStats:
    degs = g.degrees()
    best: float | int = math.inf
    wit: Optional[Tuple[int, int]] = None
    for u in range(g.n):
        nonadj = ~g.adj[u] & (g.full_mask >> (u + 1) << (u + 1))
        for v in iter_bits(nonadj):
            s = degs[u] + degs[v]
            if s < best:
                best = s
                wit = (u, v)
    if g.n == 0:
        return OreStats(math.inf, None, 0, 0)
    return OreStats(best, wit, min(degs), max(degs))


def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, [~g.adj[v] & full & ~(1 << v) for v in range(g.n)])


def ore_edge_bound(g: Graph, k: int) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Whether every edge xy has d(x)+d(y) <= 2k, plus the worst edge.

    The returned edge maximizes the degree sum (lexicographically smallest on
    ties); None iff the graph has no edges.
    """
    degs = g.degrees()
    worst: Optional[Tuple[int, int]] = None
    worst_sum = -1
    for u, v in g.edges():
        s = degs[u] + degs[v]
        if s > worst_sum:
            worst_sum = s
            worst = (u, v)
    return worst_sum <= 2 * k, worst


def induced_edge_count(g: Graph, mask: int) -> int:
    total = 0
    for v in iter_bits(mask):
        total += (g.adj[v] & mask).bit_count()
    return total // 2


def gamma_independent(g: Graph, vertices: VertexSet | int, gamma) -> bool:
    """True iff the set induces at most gamma * n^2 edges (exact comparison)."""
    mask = vertices.bits if isinstance(vertices, VertexSet) else vertices
    gam = as_fraction(gamma)
    return induced_edge_count(g, mask) <= gam * g.n * g.n


def low_degree_set(g: Graph, threshold) -> VertexSet:
    """Vertices of degree strictly below `threshold` (exact rational compare)."""
    t = as_fraction(threshold)
    bits = 0
    for v in range(g.n):
        if g.degree(v) < t:
            bits |= 1 << v
    return VertexSet(bits)


def find_clique_of_size(
    g: Graph, r: int, inside: VertexSet | int | None = None
) -> Optional[VertexSet]:
    """Lexicographically first r-clique inside `inside` (default: all of V).

    Backtracking over candidate masks; each chosen vertex restricts candidates
    to its higher-index neighbors, so every clique is visited once, smallest
    vertex tuple first.
    """
    if r < 0:
        raise ValueError("clique size must be nonnegative")
    if inside is None:
        allowed = g.full_mask
    elif isinstance(inside, VertexSet):
        allowed = inside.bits
    else:
        allowed = inside
    if r == 0:
        return VertexSet(0)

    found: List[int] = []

    def extend(chosen: int, count: int, cand: int) -> bool:
        if count == r:
            found.append(chosen)
            return True
        if count + cand.bit_count() < r:
            return False
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            nxt = rest & g.adj[v]
            if count + 1 + nxt.bit_count() >= r:
                if extend(chosen | low, count + 1, nxt):
                    return True
            if count + rest.bit_count() < r:
                return False
        return False

    if extend(0, 0, allowed):
        return VertexSet(found[0])
    return None


def max_clique(g: Graph, inside: int | None = None) -> VertexSet:
    """Maximum clique via greedy-coloring branch and bound.

    Deterministic: candidate vertices are expanded in ascending index order
    and the first optimum found is kept.
    """
    allowed = g.full_mask if inside is None else inside
    best_mask = 0
    best_size = 0

    def color_bound(cand: int) -> Tuple[List[int], List[int]]:
        # Greedy clique cover of cand; vertex order + bound per vertex.
        order: List[int] = []
        bounds: List[int] = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~g.adj[v]
                avail ^= low
                rest ^= low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def expand(chosen: int, size: int, cand: int) -> None:
        nonlocal best_mask, best_size
        order, bounds = color_bound(cand)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] <= best_size:
                return
            v = order[i]
            cand &= ~(1 << v)
            new_chosen = chosen | (1 << v)
            new_cand = cand & g.adj[v]
            if size + 1 > best_size:
                best_size = size + 1
                best_mask = new_chosen
            if new_cand:
                expand(new_chosen, size + 1, new_cand)

    expand(0, 0, allowed)
    return VertexSet(best_mask)


def max_independent_set(g: Graph, inside: int | None = None) -> VertexSet:
    return max_clique(complement(g), inside)


def connected_components(g: Graph) -> List[VertexSet]:
    """Components in ascending order of their smallest vertex."""
    seen = 0
    comps: List[VertexSet] = []
    for v in range(g.n):
        if (seen >> v) & 1:
            continue
        frontier = 1 << v
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            for u in iter_bits(frontier):
                nxt |= g.adj[u]
            frontier = nxt & ~comp
        comps.append(VertexSet(comp))
        seen |= comp
    return comps
