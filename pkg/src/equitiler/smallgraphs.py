"""Exhaustive small-graph enumeration: all labeled graphs, and canonical
representatives of connected unlabeled graphs.

Canonical form of an n-vertex graph is the minimum, over all n! relabelings,
of its edge-indicator mask (pairs in lexicographic order).  The minimum is
taken with one vectorized pass over a precomputed permutation table; float64
holds the masks exactly (n <= 8 means masks < 2^28), which keeps the scan in
BLAS.  Connected graphs are generated levelwise: every connected graph on
n + 1 vertices arises from a connected n-vertex graph by attaching a new
vertex to a nonempty neighborhood, because some non-cutvertex can be deleted.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .graphs import Graph

__all__ = [
    "pair_slots",
    "labeled_graph_count",
    "graph_from_pair_mask",
    "iter_labeled_graphs",
    "iter_labeled_graphs_inplace",
    "canonical_form",
    "connected_graphs",
    "CONNECTED_GRAPH_COUNTS",
]

# Connected unlabeled graphs per vertex count; used as a self-check after
# enumeration (OEIS A001349).
CONNECTED_GRAPH_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}

MAX_CANONICAL_N = 8


@lru_cache(maxsize=None)
def pair_slots(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def labeled_graph_count(n: int) -> int:
    return 1 << (n * (n - 1) // 2)


def graph_from_pair_mask(n: int, mask: int) -> Graph:
    g = Graph.empty(n)
    slots = pair_slots(n)
    m = mask
    while m:
        low = m & -m
        i, j = slots[low.bit_length() - 1]
        g.adj[i] |= 1 << j
        g.adj[j] |= 1 << i
        m ^= low
    return g


def iter_labeled_graphs(n: int) -> Iterator[Graph]:
    for mask in range(labeled_graph_count(n)):
        yield graph_from_pair_mask(n, mask)


def iter_labeled_graphs_inplace(n: int) -> Iterator[Tuple[int, Graph]]:
    """Yield (mask, graph) over all labeled graphs, mutating one shared Graph.

    Gray-code order flips a single edge per step, so the whole sweep costs
    O(1) per graph.  Callers must not keep references across iterations.
    """
    slots = pair_slots(n)
    g = Graph.empty(n)
    total = labeled_graph_count(n)
    prev_gray = 0
    yield 0, g
    for i in range(1, total):
        gray = i ^ (i >> 1)
        changed = (gray ^ prev_gray).bit_length() - 1
        u, v = slots[changed]
        g.adj[u] ^= 1 << v
        g.adj[v] ^= 1 << u
        prev_gray = gray
        yield gray, g


@lru_cache(maxsize=None)
def _perm_pow_table(n: int) -> np.ndarray:
    """Row per permutation: 2**(slot the pair lands on), per source slot."""
    slots = pair_slots(n)
    index = {(i, j): s for s, (i, j) in enumerate(slots)}
    perms = list(itertools.permutations(range(n)))
    table = np.empty((len(perms), len(slots)), dtype=np.float64)
    for pi, perm in enumerate(perms):
        for s, (i, j) in enumerate(slots):
            a, b = perm[i], perm[j]
            if a > b:
                a, b = b, a
            table[pi, s] = float(1 << index[(a, b)])
    return table


def _mask_to_vec(n: int, mask: int) -> np.ndarray:
    m = n * (n - 1) // 2
    vec = np.zeros(m, dtype=np.float64)
    for s in range(m):
        if (mask >> s) & 1:
            vec[s] = 1.0
    return vec


def canonical_form(n: int, mask: int) -> int:
    """Minimum edge mask over all relabelings."""
    if n > MAX_CANONICAL_N:
        raise ValueError(f"canonical forms supported up to n={MAX_CANONICAL_N}")
    if n < 2:
        return 0
    table = _perm_pow_table(n)
    values = table @ _mask_to_vec(n, mask)
    return int(values.min())


def _canonical_batch(n: int, masks: List[int]) -> List[int]:
    table = _perm_pow_table(n)
    m = n * (n - 1) // 2
    out: List[int] = []
    chunk = 512
    for lo in range(0, len(masks), chunk):
        batch = masks[lo : lo + chunk]
        x = np.zeros((len(batch), m), dtype=np.float64)
        for row, mask in enumerate(batch):
            mm = mask
            while mm:
                low = mm & -mm
                x[row, low.bit_length() - 1] = 1.0
                mm ^= low
        values = x @ table.T
        out.extend(int(v) for v in values.min(axis=1))
    return out


@lru_cache(maxsize=None)
def connected_graphs(n: int) -> Tuple[int, ...]:
    """Canonical pair masks of all connected graphs on n vertices."""
    if n > MAX_CANONICAL_N:
        raise ValueError(f"enumeration supported up to n={MAX_CANONICAL_N}")
    if n < 1:
        raise ValueError("need n >= 1")
    if n == 1:
        return (0,)
    parents = connected_graphs(n - 1)
    slots = pair_slots(n)
    index = {(i, j): s for s, (i, j) in enumerate(slots)}
    old_slots = pair_slots(n - 1)
    candidates: List[int] = []
    for pmask in parents:
        base = 0
        mm = pmask
        while mm:
            low = mm & -mm
            i, j = old_slots[low.bit_length() - 1]
            base |= 1 << index[(i, j)]
            mm ^= low
        for nbhd in range(1, 1 << (n - 1)):
            child = base
            bb = nbhd
            while bb:
                low = bb & -bb
                v = low.bit_length() - 1
                child |= 1 << index[(v, n - 1)]
                bb ^= low
            candidates.append(child)
    canon = _canonical_batch(n, candidates)
    reps = tuple(sorted(set(canon)))
    expected = CONNECTED_GRAPH_COUNTS.get(n)
    if expected is not None and len(reps) != expected:
        raise RuntimeError(
            f"enumeration self-check failed at n={n}: got {len(reps)}, expected {expected}"
        )
    return reps
