"""Extremal families that block clique factors, their recognizers, and the
clique/biclique obstructions that block equitable colorings.

The two factor-blocking shapes on n = r*m vertices:

  * near-independent: an independent set of m + 1 vertices (every r-clique
    uses at most one of them, and there are only m cliques);
  * odd-split: r - 2 independent m-sets joined to everything else, plus a
    clique pair K_s, K_{2m - s} with s odd, no edges between the pair, both
    joined to all the m-sets.  Every r-clique must take exactly two vertices
    from the clique pair and from the same side, so one side keeps odd parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .graphs import Graph, VertexSet, iter_bits, max_independent_set

__all__ = [
    "Ex1Witness",
    "Ex2Witness",
    "CliqueObstruction",
    "BicliqueObstruction",
    "ExtremalWitness",
    "ColoringObstruction",
    "build_ex1_like",
    "build_ex2",
    "build_obstruction",
    "independent_set_of_size",
    "recognize_extremal",
    "find_biclique",
]


@dataclass(frozen=True)
class Ex1Witness:
    """Independent set one larger than the clique count of any factor."""

    independent_set: VertexSet

    def verify(self, g: Graph, r: int) -> bool:
        return (
            g.n % r == 0
            and len(self.independent_set) == g.n // r + 1
            and g.is_independent(self.independent_set.bits)
        )


@dataclass(frozen=True)
class Ex2Witness:
    """The odd-split shape; s = |b0| is odd so no factor balances the pair."""

    a_parts: Tuple[VertexSet, ...]
    b0: VertexSet
    b1: VertexSet

    @property
    def s(self) -> int:
        return len(self.b0)

    def verify(self, g: Graph, r: int) -> bool:
        n = g.n
        if n % r != 0 or len(self.a_parts) != r - 2:
            return False
        m = n // r
        s = len(self.b0)
        if s % 2 == 0 or not (1 <= s <= m) or len(self.b1) != 2 * m - s:
            return False
        masks = [p.bits for p in self.a_parts] + [self.b0.bits, self.b1.bits]
        union = 0
        for mk in masks:
            if union & mk:
                return False
            union |= mk
        if union != g.full_mask:
            return False
        if any(len(p) != m for p in self.a_parts):
            return False
        return g == _ex2_graph(n, [p.bits for p in self.a_parts], self.b0.bits, self.b1.bits)


ExtremalWitness = Union[Ex1Witness, Ex2Witness]


@dataclass(frozen=True)
class CliqueObstruction:
    """K_{k+1} subgraph: one more mutually-adjacent vertex than colors."""

    vertices: VertexSet

    def verify(self, g: Graph, k: int) -> bool:
        return len(self.vertices) == k + 1 and g.is_clique(self.vertices.bits)


@dataclass(frozen=True)
class BicliqueObstruction:
    """K_{m, 2k-m} subgraph with m odd; cross edges only are required."""

    side_a: VertexSet
    side_b: VertexSet

    @property
    def m(self) -> int:
        return min(len(self.side_a), len(self.side_b))

    def verify(self, g: Graph, k: int) -> bool:
        a, b = self.side_a, self.side_b
        if len(a) > len(b):
            a, b = b, a
        if len(a) % 2 == 0 or len(a) + len(b) != 2 * k or not a.isdisjoint(b):
            return False
        for v in iter_bits(a.bits):
            if b.bits & ~g.adj[v]:
                return False
        return True


ColoringObstruction = Union[CliqueObstruction, BicliqueObstruction]


def _ex2_graph(n: int, a_masks: List[int], b0: int, b1: int) -> Graph:
    full = (1 << n) - 1
    adj = [0] * n
    for mk in a_masks:
        for v in iter_bits(mk):
            adj[v] = full & ~mk
    for v in iter_bits(b0):
        adj[v] = (full & ~b1) & ~(1 << v)
    for v in iter_bits(b1):
        adj[v] = (full & ~b0) & ~(1 << v)
    return Graph(n, adj)


def build_ex2(n: int, r: int, s: int) -> Graph:
    """The odd-split extremal graph; vertices 0..s-1 are the small clique side,
    s..2n/r-1 the large side, then the r-2 independent parts."""
    if r < 3:
        raise ValueError("need r >= 3")
    if n % r != 0:
        raise ValueError(f"r={r} must divide n={n}")
    m = n // r
    if s % 2 == 0 or not (1 <= s <= m):
        raise ValueError(f"s={s} must be odd with 1 <= s <= {m}")
    b0 = (1 << s) - 1
    b1 = ((1 << (2 * m)) - 1) ^ b0
    a_masks = []
    for i in range(r - 2):
        lo = 2 * m + i * m
        a_masks.append(((1 << m) - 1) << lo)
    return _ex2_graph(n, a_masks, b0, b1)


def ex2_witness(n: int, r: int, s: int) -> Ex2Witness:
    """Witness matching build_ex2's labeling."""
    m = n // r
    b0 = VertexSet((1 << s) - 1)
    b1 = VertexSet(((1 << (2 * m)) - 1) ^ b0.bits)
    parts = tuple(VertexSet(((1 << m) - 1) << (2 * m + i * m)) for i in range(r - 2))
    return Ex2Witness(parts, b0, b1)


def build_ex1_like(n: int, r: int) -> Graph:
    """Independent set of n/r + 1 low vertices joined to a clique on the rest."""
    if r < 2:
        raise ValueError("need r >= 2")
    if n % r != 0:
        raise ValueError(f"r={r} must divide n={n}")
    size = n // r + 1
    if size > n:
        raise ValueError("independent part larger than the graph")
    full = (1 << n) - 1
    imask = (1 << size) - 1
    adj = [0] * n
    for v in range(n):
        if v < size:
            adj[v] = full & ~imask
        else:
            adj[v] = full & ~(1 << v)
    return Graph(n, adj)


def build_obstruction(k: int, m: Optional[int] = None) -> Graph:
    """K_{k+1} when m is None, otherwise the biclique K_{m, 2k-m} (m odd)."""
    if k < 1:
        raise ValueError("need k >= 1")
    if m is None:
        return Graph.complete(k + 1)
    if m % 2 == 0 or not (1 <= m <= k):
        raise ValueError(f"m={m} must be odd with 1 <= m <= {k}")
    n = 2 * k
    a = (1 << m) - 1
    b = ((1 << n) - 1) ^ a
    adj = [0] * n
    for v in range(n):
        adj[v] = b if v < m else a
    return Graph(n, adj)


def _recognize_ex2(g: Graph, r: int) -> Optional[Ex2Witness]:
    n = g.n
    if r < 3 or n == 0 or n % r != 0:
        return None
    m = n // r
    # In the complement the shape splits into r-2 clique components of size m
    # and one complete-bipartite component on the clique pair.
    from .graphs import complement, connected_components

    co = complement(g)
    comps = connected_components(co)
    if len(comps) != r - 1:
        return None
    a_parts: List[VertexSet] = []
    b_comp: Optional[VertexSet] = None
    for c in comps:
        if len(c) == m:
            a_parts.append(c)
        elif len(c) == 2 * m and b_comp is None:
            b_comp = c
        else:
            return None
    if b_comp is None or len(a_parts) != r - 2:
        return None
    low = b_comp.bits & -b_comp.bits
    u = low.bit_length() - 1
    side0 = b_comp.bits & ~co.adj[u]
    side1 = b_comp.bits & co.adj[u]
    if side0.bit_count() % 2 == 0 or side1.bit_count() % 2 == 0:
        return None
    if side0.bit_count() > side1.bit_count():
        side0, side1 = side1, side0
    s = side0.bit_count()
    if not (1 <= s <= m):
        return None
    w = Ex2Witness(tuple(a_parts), VertexSet(side0), VertexSet(side1))
    return w if w.verify(g, r) else None


def _independent_heuristic(g: Graph, target: int) -> Optional[VertexSet]:
    # Greedy by ascending degree with one round of plateau swaps.
    order = sorted(range(g.n), key=lambda v: (g.degree(v), v))
    chosen = 0
    for v in order:
        if not (g.adj[v] & chosen):
            chosen |= 1 << v
    if chosen.bit_count() >= target:
        return VertexSet(chosen)
    for v in order:
        if (chosen >> v) & 1:
            continue
        conflicts = g.adj[v] & chosen
        if conflicts.bit_count() == 1:
            w = conflicts.bit_length() - 1
            trial = (chosen & ~conflicts) | (1 << v)
            # accept only if the swap frees room for an extra vertex
            for u in order:
                if not ((trial >> u) & 1) and not (g.adj[u] & trial):
                    trial |= 1 << u
            if trial.bit_count() > chosen.bit_count():
                chosen = trial
        if chosen.bit_count() >= target:
            return VertexSet(chosen)
    return None


def independent_set_of_size(g: Graph, size: int) -> Optional[VertexSet]:
    """An independent set of exactly `size` vertices, or None.

    Exact branch and bound up to 64 vertices, greedy with plateau swaps
    beyond; a None answer is only conclusive in the exact regime.  When a
    larger set is found it is trimmed to its `size` lowest members.
    """
    if size <= 0:
        return VertexSet(0)
    found = max_independent_set(g) if g.n <= 64 else _independent_heuristic(g, size)
    if found is None or len(found) < size:
        return None
    bits = 0
    for v in iter_bits(found.bits):
        if bits.bit_count() == size:
            break
        bits |= 1 << v
    return VertexSet(bits)


def recognize_extremal(g: Graph, r: int) -> Optional[ExtremalWitness]:
    """Exact odd-split match, else an n/r + 1 independent set when one exists.

    The independent-set search is exact branch and bound up to 64 vertices and
    greedy beyond that, so a None answer is only conclusive at small n.
    """
    if g.n % r != 0 or r < 2:
        return None
    w2 = _recognize_ex2(g, r) if r >= 3 else None
    if w2 is not None:
        return w2
    cand = independent_set_of_size(g, g.n // r + 1)
    if cand is not None:
        return Ex1Witness(cand)
    return None


def find_biclique(g: Graph, a: int, b: int) -> Optional[Tuple[VertexSet, VertexSet]]:
    """Lexicographically first K_{a,b} subgraph (cross edges only), or None."""
    if a < 1 or b < 1 or a + b > g.n:
        return None
    swapped = a > b
    if swapped:
        a, b = b, a
    n = g.n

    def rec(start: int, chosen: int, count: int, common: int) -> Optional[Tuple[int, int]]:
        if count == a:
            pool = common & ~chosen
            if pool.bit_count() < b:
                return None
            side_b = 0
            for v in iter_bits(pool):
                side_b |= 1 << v
                if side_b.bit_count() == b:
                    break
            return chosen, side_b
        for v in range(start, n):
            if n - v < a - count:
                return None
            new_common = common & g.adj[v]
            new_chosen = chosen | (1 << v)
            if (new_common & ~new_chosen).bit_count() < b:
                continue
            hit = rec(v + 1, new_chosen, count + 1, new_common)
            if hit is not None:
                return hit
        return None

    hit = rec(0, 0, 0, g.full_mask)
    if hit is None:
        return None
    sa, sb = hit
    if swapped:
        sa, sb = sb, sa
    return VertexSet(sa), VertexSet(sb)
