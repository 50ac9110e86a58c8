"""Seeded instance families for the CLI and the sweeps.

Every family is a pure function of its parameters: the same seed yields the
same graph, byte for byte, so generated corpora can be regenerated instead of
stored.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .errors import PreconditionError
from .extremal import build_ex1_like, build_ex2, build_obstruction
from .graphs import Graph, as_fraction, sigma

FAMILIES = ("ex1", "ex2", "kclique", "biclique", "random-ore", "random-gnp")


def random_gnp(n: int, p, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p), sampled pair by pair in (u, v) order."""
    if n < 0:
        raise PreconditionError(f"need n >= 0, got {n}")
    prob = float(p)
    if not 0.0 <= prob <= 1.0:
        raise PreconditionError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    adj = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < prob:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return Graph(n, adj)


def random_ore(n: int, r: int, alpha, seed: int = 0) -> Graph:
    """Random graph meeting the degree-sum floor 2(1 - 1/r - alpha)n.

    Starts from G(n, 1 - 1/r) and repairs upward: as long as some non-adjacent
    pair has degree sum below the floor, the worst such pair gains an edge.
    Each repair strictly grows the edge set, so the loop ends at the complete
    graph in the worst case (where the floor holds vacuously).
    """
    if r < 2:
        raise PreconditionError(f"need r >= 2, got {r}")
    a = as_fraction(alpha)
    if a < 0:
        raise PreconditionError(f"need alpha >= 0, got {alpha}")
    g = random_gnp(n, 1.0 - 1.0 / r, seed)
    floor = 2 * (1 - Fraction(1, r) - a) * n
    while True:
        stats = sigma(g)
        if stats.sigma >= floor or stats.witness is None:
            return g
        u, v = stats.witness
        adj = list(g.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        g = Graph(g.n, adj)


def _require(family: str, **params) -> None:
    missing = [name for name, value in params.items() if value is None]
    if missing:
        raise PreconditionError(f"family {family!r} needs {', '.join(missing)}")


def generate(
    family: str,
    *,
    n: Optional[int] = None,
    r: Optional[int] = None,
    s: Optional[int] = None,
    k: Optional[int] = None,
    m: Optional[int] = None,
    p=None,
    alpha=None,
    seed: int = 0,
) -> Graph:
    """Build one instance of a named family; see FAMILIES for the names."""
    if family == "ex1":
        _require(family, n=n, r=r)
        return build_ex1_like(n, r)
    if family == "ex2":
        _require(family, n=n, r=r, s=s)
        return build_ex2(n, r, s)
    if family == "kclique":
        _require(family, k=k)
        return build_obstruction(k)
    if family == "biclique":
        _require(family, k=k, m=m)
        return build_obstruction(k, m)
    if family == "random-ore":
        _require(family, n=n, r=r, alpha=alpha)
        return random_ore(n, r, alpha, seed)
    if family == "random-gnp":
        _require(family, n=n, p=p)
        return random_gnp(n, p, seed)
    raise PreconditionError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
