"""Exhaustive exact deciders for clique factors, equitable colorings, and
layered clique partitions.

These are the reference implementations: small-case complete searches with
sound pruning, no heuristics that could change answers.  Branching always
expands the lowest-index uncovered vertex and enumerates candidate cliques in
lexicographic order, so returned witnesses are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .graphs import Graph, VertexSet, find_clique_of_size, iter_bits

__all__ = [
    "Tiling",
    "Coloring",
    "LayeredFactor",
    "kr_factor_exact",
    "equitable_coloring_exact",
    "count_absorbers_exact",
    "is_absorber_set",
    "layered_factor_exact",
]


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint r-cliques; a factor when they cover all of V."""

    r: int
    cliques: Tuple[VertexSet, ...]

    @property
    def covered(self) -> VertexSet:
        bits = 0
        for c in self.cliques:
            bits |= c.bits
        return VertexSet(bits)

    def verify(self, g: Graph, require_factor: bool = True) -> bool:
        seen = 0
        for c in self.cliques:
            if len(c) != self.r:
                return False
            if seen & c.bits:
                return False
            if not g.is_clique(c.bits):
                return False
            seen |= c.bits
        if require_factor and seen != g.full_mask:
            return False
        return True


@dataclass(frozen=True)
class Coloring:
    """Color classes as a vertex partition; equitable when sizes differ by <= 1."""

    classes: Tuple[VertexSet, ...]

    @property
    def k(self) -> int:
        return len(self.classes)

    def verify(self, g: Graph, equitable: bool = True) -> bool:
        seen = 0
        for cls in self.classes:
            if seen & cls.bits:
                return False
            seen |= cls.bits
            if not g.is_independent(cls.bits):
                return False
        if seen != g.full_mask:
            return False
        if equitable:
            sizes = [len(c) for c in self.classes]
            if sizes and max(sizes) - min(sizes) > 1:
                return False
        return True


@dataclass(frozen=True)
class LayeredFactor:
    """Partition of V into cliques, bucketed by clique size s = r, r-1, ..., 1.

    `profile()` is (count of K_r pieces, ..., count of K_1 pieces); the exact
    solver maximizes it lexicographically.
    """

    r: int
    layers: Dict[int, Tuple[VertexSet, ...]]

    def profile(self) -> Tuple[int, ...]:
        return tuple(len(self.layers.get(s, ())) for s in range(self.r, 0, -1))

    def verify(self, g: Graph) -> bool:
        seen = 0
        for s, pieces in self.layers.items():
            for p in pieces:
                if len(p) != s or (seen & p.bits) or not g.is_clique(p.bits):
                    return False
                seen |= p.bits
        return seen == g.full_mask


def _cliques_with_lowest(g: Graph, mask: int, size: int) -> Iterator[int]:
    """Lex-ordered cliques of `size` inside mask that contain mask's lowest bit."""
    low = mask & -mask
    v = low.bit_length() - 1
    if size == 1:
        yield low
        return

    def gen(chosen: int, count: int, cand: int) -> Iterator[int]:
        if count == size:
            yield chosen
            return
        rest = cand
        while rest:
            b = rest & -rest
            u = b.bit_length() - 1
            rest ^= b
            if count + 1 + (rest & g.adj[u]).bit_count() >= size:
                yield from gen(chosen | b, count + 1, rest & g.adj[u])
            if count + rest.bit_count() < size:
                return

    yield from gen(low, 1, g.adj[v] & mask & ~low)


def _residual_infeasible(g: Graph, mask: int, r: int) -> bool:
    """Sound pruning for factor search on the uncovered set `mask`.

    (a) some uncovered vertex has fewer than r-1 uncovered neighbors;
    (b) a greedy independent set (min residual degree first) exceeds
        |mask| / r, while any factor can host at most one independent
        vertex per clique.
    """
    degs: Dict[int, int] = {}
    for v in iter_bits(mask):
        d = (g.adj[v] & mask).bit_count()
        if d < r - 1:
            return True
        degs[v] = d
    quota = mask.bit_count() // r
    picked = 0
    rest = mask
    while rest:
        best_v = -1
        best_d = 1 << 30
        for v in iter_bits(rest):
            d = (g.adj[v] & rest).bit_count()
            if d < best_d:
                best_d = d
                best_v = v
        picked += 1
        if picked > quota:
            return True
        rest &= ~(g.adj[best_v] | (1 << best_v))
    return False


def kr_factor_exact(g: Graph, r: int) -> Optional[Tiling]:
    """Exact K_r-factor: a partition of V into r-cliques, or None.

    Requires r >= 1 and r | n.  Complete backtracking; prunes keep the
    obstructed instances in this package's test families cheap, but the
    worst case is exponential, so callers gate on an exact-size cap.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if g.n % r != 0:
        raise ValueError(f"r={r} does not divide n={g.n}")
    if r == 1:
        return Tiling(1, tuple(VertexSet(1 << v) for v in range(g.n)))

    pieces: List[int] = []

    def search(mask: int) -> bool:
        if mask == 0:
            return True
        if _residual_infeasible(g, mask, r):
            return False
        for c in _cliques_with_lowest(g, mask, r):
            pieces.append(c)
            if search(mask & ~c):
                return True
            pieces.pop()
        return False

    if search(g.full_mask):
        return Tiling(r, tuple(VertexSet(c) for c in pieces))
    return None


def _class_profile(n: int, k: int) -> List[int]:
    big = n % k
    q = n // k
    return [q + 1] * big + [q] * (k - big)


def equitable_coloring_exact(g: Graph, k: int) -> Optional[Coloring]:
    """Exact equitable k-coloring (proper, class sizes within 1), or None.

    Greedy attempt first, then complete backtracking over a static
    degree-descending vertex order with capacity and empty-class symmetry
    pruning.  A (k+1)-clique short-circuits to None.
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = g.n
    if n == 0:
        return Coloring(tuple(VertexSet(0) for _ in range(k)))
    if k >= n:
        classes = [VertexSet(1 << v) for v in range(n)]
        classes += [VertexSet(0)] * (k - n)
        return Coloring(tuple(classes))
    if find_clique_of_size(g, k + 1) is not None:
        return None

    caps = _class_profile(n, k)
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))

    def result_from(assign: List[int]) -> Coloring:
        bits = [0] * k
        for v, c in enumerate(assign):
            bits[c] |= 1 << v
        return Coloring(tuple(VertexSet(b) for b in bits))

    # Greedy: largest remaining capacity first, feasibility by neighbor masks.
    class_bits = [0] * k
    counts = [0] * k
    assign = [-1] * n
    ok = True
    for v in order:
        best = -1
        for c in range(k):
            if counts[c] >= caps[c] or (class_bits[c] & g.adj[v]):
                continue
            if best == -1 or caps[c] - counts[c] > caps[best] - counts[best]:
                best = c
        if best == -1:
            ok = False
            break
        assign[v] = best
        class_bits[best] |= 1 << v
        counts[best] += 1
    if ok:
        return result_from(assign)

    class_bits = [0] * k
    counts = [0] * k
    assign = [-1] * n

    def place(idx: int) -> bool:
        if idx == n:
            return True
        v = order[idx]
        seen_empty_cap = set()
        for c in range(k):
            if counts[c] >= caps[c]:
                continue
            if counts[c] == 0:
                if caps[c] in seen_empty_cap:
                    continue
                seen_empty_cap.add(caps[c])
            if class_bits[c] & g.adj[v]:
                continue
            class_bits[c] |= 1 << v
            counts[c] += 1
            assign[v] = c
            if place(idx + 1):
                return True
            class_bits[c] &= ~(1 << v)
            counts[c] -= 1
            assign[v] = -1
        return False

    if place(0):
        return result_from(assign)
    return None


def is_absorber_set(g: Graph, s_bits: int, q_bits: int, r: int) -> bool:
    """Whether S absorbs Q: both G[S] and G[S u Q] have K_r-factors."""
    if s_bits & q_bits:
        return False
    sub, _ = g.induced(s_bits)
    if kr_factor_exact(sub, r) is None:
        return False
    sub2, _ = g.induced(s_bits | q_bits)
    return kr_factor_exact(sub2, r) is not None


def count_absorbers_exact(
    g: Graph, q: VertexSet, r: int, cap: int = 64
) -> Tuple[int, Optional[Tuple[VertexSet, ...]]]:
    """Count all r^2-sets disjoint from Q that absorb Q.

    Returns (count, witnesses) with the witness list only when count <= cap.
    Full enumeration over C(n - |Q|, r^2) subsets; intended for small n.
    """
    if len(q) != r:
        raise ValueError(f"|Q|={len(q)} but r={r}")
    size = r * r
    pool = [v for v in range(g.n) if v not in q]
    if len(pool) < size:
        return 0, ()
    from itertools import combinations

    count = 0
    found: List[VertexSet] = []
    for combo in combinations(pool, size):
        s_bits = 0
        for v in combo:
            s_bits |= 1 << v
        if is_absorber_set(g, s_bits, q.bits, r):
            count += 1
            if count <= cap:
                found.append(VertexSet(s_bits))
    return count, (tuple(found) if count <= cap else None)


def layered_factor_exact(g: Graph, r: int, cap: int = 16) -> LayeredFactor:
    """Partition V into cliques of size <= r, maximizing the size profile.

    The profile (#K_r, #K_{r-1}, ..., #K_1) is maximized lexicographically;
    memoized search over uncovered-set masks, so n is capped (default 16).
    """
    if r < 1:
        raise ValueError("r must be positive")
    if g.n > cap:
        raise ValueError(f"n={g.n} exceeds the exact layered cap {cap}")

    zero = (0,) * r
    memo: Dict[int, Tuple[int, ...]] = {0: zero}
    choice: Dict[int, Tuple[int, int]] = {}

    def bump(profile: Tuple[int, ...], piece_size: int) -> Tuple[int, ...]:
        i = r - piece_size
        return profile[:i] + (profile[i] + 1,) + profile[i + 1 :]

    def solve(mask: int) -> Tuple[int, ...]:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        best: Optional[Tuple[int, ...]] = None
        best_piece = (0, 0)
        for size in range(min(r, mask.bit_count()), 0, -1):
            for c in _cliques_with_lowest(g, mask, size):
                prof = bump(solve(mask & ~c), size)
                if best is None or prof > best:
                    best = prof
                    best_piece = (size, c)
        assert best is not None
        memo[mask] = best
        choice[mask] = best_piece
        return best

    solve(g.full_mask)
    layers: Dict[int, List[VertexSet]] = {}
    mask = g.full_mask
    while mask:
        size, c = choice[mask]
        layers.setdefault(size, []).append(VertexSet(c))
        mask &= ~c
    return LayeredFactor(r, {s: tuple(ps) for s, ps in layers.items()})
