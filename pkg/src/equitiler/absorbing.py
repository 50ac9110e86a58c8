"""Randomized absorption machinery for the dense, unstructured regime.

The route has four stages.  `build_absorbing_set` assembles a small set M
out of disjoint verified absorbers (plus cliques covering the low-degree
clique, when there is one).  `almost_cover` tiles the rest of the graph
greedily and improves the tiling with local augmentation moves until only
a small remainder is uncovered.  `absorb` then folds that remainder into
M, one r-set per stored absorber.  Everything an absorber promises is
checked by the exact oracle at storage time, and the final assembly is
re-verified piece by piece, so a returned factor is always genuine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .constants import ConstantsConfig, default_constants
from .errors import InternalContradiction, PreconditionError
from .graphs import (
    Graph,
    VertexSet,
    find_clique_of_size,
    iter_bits,
    low_degree_set,
    sigma,
)
from .matching import maximum_matching
from .oracle import LayeredFactor, Tiling, is_absorber_set, kr_factor_exact
from .partition import _sparse_set

__all__ = [
    "AbsorberFamily",
    "AbsorbingSet",
    "AbsorptionFailure",
    "AugmentationMove",
    "absorb",
    "absorbing_from_json",
    "absorbing_to_json",
    "almost_cover",
    "build_absorbing_set",
    "enumerate_absorbers",
    "find_augmentation",
    "layered_greedy",
]


class AbsorptionFailure(RuntimeError):
    """An uncovered r-set found no unused absorber; the set M needs a rebuild."""


@dataclass(frozen=True)
class AbsorberFamily:
    """Verified absorbers for one target r-set.

    Each member S satisfies: S is disjoint from q, |S| = r*r, and both
    G[S] and G[S u q] admit K_r-factors.
    """

    q: VertexSet
    members: Tuple[VertexSet, ...]

    def validate(self, g: Graph, r: int) -> List[str]:
        out = []
        for i, s in enumerate(self.members):
            if len(s) != r * r:
                out.append(f"member {i} has {len(s)} vertices, wants {r * r}")
            elif not is_absorber_set(g, s.bits, self.q.bits, r):
                out.append(f"member {i} fails a factor check")
        return out


@dataclass(frozen=True)
class AugmentationMove:
    """One local rearrangement of a layered tiling.

    `source` grows by one vertex at the expense of `helpers`; the
    `replacements` re-tile source u helpers exactly.  Helpers are listed
    relay piece first, donor last.
    """

    source: VertexSet
    helpers: Tuple[VertexSet, ...]
    replacements: Tuple[VertexSet, ...]

    def check(self, g: Graph) -> bool:
        before = self.source.bits
        for h in self.helpers:
            if before & h.bits:
                return False
            before |= h.bits
        after = 0
        for c in self.replacements:
            if (after & c.bits) or not g.is_clique(c.bits):
                return False
            after |= c.bits
        sizes = {len(c) for c in self.replacements}
        return after == before and len(self.source) + 1 in sizes


@dataclass(frozen=True)
class AbsorbingSet:
    """Disjoint absorbers plus fixed cliques, with stored self-factors.

    `family[i]` is covered exactly by the cliques in `factors[i]`; the
    `fixed` cliques mop up the low-degree clique when it was small enough
    to need protecting.  The whole of M factors constructively, so the
    only oracle work left at absorb time is one small check per r-set.
    """

    r: int
    epsilon: Fraction
    family: Tuple[VertexSet, ...]
    factors: Tuple[Tuple[VertexSet, ...], ...]
    fixed: Tuple[VertexSet, ...]

    @property
    def m(self) -> VertexSet:
        bits = 0
        for s in self.family:
            bits |= s.bits
        for c in self.fixed:
            bits |= c.bits
        return VertexSet(bits)

    def family_for(self, g: Graph, q: VertexSet) -> AbsorberFamily:
        """The stored absorbers that work for this particular r-set."""
        hits = tuple(
            s
            for s in self.family
            if not (s.bits & q.bits) and is_absorber_set(g, s.bits, q.bits, self.r)
        )
        return AbsorberFamily(q, hits)

    def validate(self, g: Graph) -> List[str]:
        out = []
        seen = 0
        for i, s in enumerate(self.family):
            if len(s) != self.r * self.r:
                out.append(f"absorber {i} has the wrong size")
            if s.bits & seen:
                out.append(f"absorber {i} overlaps an earlier piece")
            seen |= s.bits
            covered = 0
            for c in self.factors[i]:
                if len(c) != self.r or not g.is_clique(c.bits):
                    out.append(f"stored factor of absorber {i} is broken")
                    break
                covered |= c.bits
            if covered != s.bits:
                out.append(f"stored factor of absorber {i} misses vertices")
        for j, c in enumerate(self.fixed):
            if len(c) != self.r or not g.is_clique(c.bits):
                out.append(f"fixed clique {j} is not a K_{self.r}")
            if c.bits & seen:
                out.append(f"fixed clique {j} overlaps an earlier piece")
            seen |= c.bits
        return out


def _sigma_gate(g: Graph, r: int, alpha: Fraction) -> None:
    need = 2 * (1 - Fraction(1, r) - alpha) * g.n
    st = sigma(g)
    if not st.sigma >= need:
        raise PreconditionError(
            f"degree-sum floor {st.sigma} at pair {st.witness} is below {need}"
        )


def _random_clique(
    g: Graph, rng: random.Random, pool: int, size: int
) -> Optional[int]:
    """Greedy clique on a shuffled order; None when the order yields nothing."""
    if size == 0:
        return 0
    order = list(iter_bits(pool))
    rng.shuffle(order)
    chosen = 0
    count = 0
    for v in order:
        if chosen & ~g.adj[v]:
            continue
        chosen |= 1 << v
        count += 1
        if count == size:
            return chosen
    return None


def enumerate_absorbers(
    g: Graph,
    q: VertexSet,
    r: int,
    budget: int,
    cfg: Optional[ConstantsConfig] = None,
    seed: int = 0,
    exclude: int = 0,
) -> AbsorberFamily:
    """Sample up to `budget` verified absorbers for the r-set q.

    Each candidate is built from a base K_r plus, for every pair of a base
    vertex and a q-vertex, a bridge (r-1)-set lying in their common
    neighborhood, itself a clique; that shape makes both factor checks
    pass by construction, and the oracle confirms them anyway.  The base
    is taken inside the low-degree clique when that clique is large, and
    away from it otherwise; bridges always avoid it.
    """
    if len(q) != r:
        raise PreconditionError(f"target has {len(q)} vertices, wants r={r}")
    if cfg is None:
        cfg = default_constants(max(r, 2))
    n = g.n
    slow = low_degree_set(g, (1 - Fraction(1, r) - cfg.alpha) * n)
    exploit_clique = len(slow) > cfg.xi * n
    base_pool = slow.bits if exploit_clique else g.full_mask & ~slow.bits
    base_pool &= ~q.bits & ~exclude
    bridge_pool = g.full_mask & ~slow.bits & ~exclude

    rng = random.Random(seed * 1000003 + q.bits % (1 << 61))
    found: List[VertexSet] = []
    seen = set()
    qs = sorted(q.members())
    for k in range(max(budget * 40, 200)):
        if len(found) >= budget:
            break
        # The bias is a sampling aid, not a correctness condition, so odd
        # rounds fall back to the whole graph.
        if k % 2 == 0:
            bpool, bridge_home = base_pool, bridge_pool
        else:
            bpool = g.full_mask & ~q.bits & ~exclude
            bridge_home = g.full_mask & ~exclude
        base = _random_clique(g, rng, bpool, r)
        if base is None:
            continue
        bases = list(iter_bits(base))
        rng.shuffle(bases)
        used = base | q.bits
        bridges = []
        for u, qv in zip(bases, qs):
            pool = g.adj[u] & g.adj[qv] & bridge_home & ~used
            x = _random_clique(g, rng, pool, r - 1)
            if x is None:
                break
            bridges.append(x)
            used |= x
        if len(bridges) < r:
            continue
        bits = base
        for x in bridges:
            bits |= x
        if bits in seen:
            continue
        seen.add(bits)
        if is_absorber_set(g, bits, q.bits, r):
            found.append(VertexSet(bits))
    return AbsorberFamily(q, tuple(found))


def _factor_of(g: Graph, bits: int, r: int) -> Optional[Tuple[VertexSet, ...]]:
    sub, labels = g.induced(bits)
    t = kr_factor_exact(sub, r)
    if t is None:
        return None
    out = []
    for c in t.cliques:
        m = 0
        for v in iter_bits(c.bits):
            m |= 1 << labels[v]
        out.append(VertexSet(m))
    return tuple(out)


def build_absorbing_set(
    g: Graph,
    r: int,
    cfg: Optional[ConstantsConfig] = None,
    seed: int = 0,
) -> Optional[AbsorbingSet]:
    """Select disjoint verified absorbers into a set M of at most 2*xi*n vertices.

    Returns None when a sparse n/r-set turns up (the instance belongs to
    the structured route) or when the sampling budget runs out before
    enough disjoint absorbers are found.  The degree-sum floor is checked
    outright.
    """
    if r < 2:
        raise PreconditionError("need r >= 2")
    if cfg is None:
        cfg = default_constants(r)
    n = g.n
    _sigma_gate(g, r, cfg.alpha)
    if n >= r:
        sp = _sparse_set(g, g.full_mask, n // r, cfg.gamma, n)
        if sp is not None:
            return None

    slow = low_degree_set(g, (1 - Fraction(1, r) - cfg.alpha) * n)
    exploit_clique = len(slow) > cfg.xi * n
    cap = int(2 * cfg.xi * n)
    reserve = 0 if exploit_clique or not slow else len(slow) + (r - 1) * (r - 1)
    fam_cap = max(0, cap - reserve) // (r * r)
    needed = max(1, int(cfg.epsilon * n) // r)
    if fam_cap < needed:
        return None
    fam_target = min(fam_cap, needed + 2)
    probe_pool = g.full_mask if exploit_clique else g.full_mask & ~slow.bits

    for attempt in range(10):
        rng = random.Random(0xAB50 + seed * 1000003 + attempt)
        picked: List[VertexSet] = []
        taken = 0
        for _ in range(8 * fam_target + 8):
            if len(picked) >= fam_target:
                break
            pool = list(iter_bits(probe_pool & ~taken))
            if len(pool) < r:
                break
            probe = VertexSet(rng.sample(pool, r))
            fam = enumerate_absorbers(
                g, probe, r, budget=4, cfg=cfg,
                seed=rng.randrange(1 << 30), exclude=taken,
            )
            for s in fam.members:
                if not (s.bits & taken):
                    picked.append(s)
                    taken |= s.bits
                    break
        if len(picked) < needed:
            continue

        factors = []
        for s in picked:
            f = _factor_of(g, s.bits, r)
            if f is None:
                raise InternalContradiction("verified absorber lost its factor")
            factors.append(f)

        fixed: List[VertexSet] = []
        if reserve:
            if not g.is_clique(slow.bits):
                raise InternalContradiction(
                    "low-degree set is not a clique despite the degree-sum floor"
                )
            left = sorted(slow.members())
            while len(left) >= r:
                fixed.append(VertexSet(left[:r]))
                left = left[r:]
            ok = True
            for w in left:
                inside = g.adj[w] & ~slow.bits & ~taken
                for c in fixed:
                    inside &= ~c.bits
                comp = find_clique_of_size(g, r - 1, inside)
                if comp is None:
                    ok = False
                    break
                fixed.append(VertexSet(comp.bits | (1 << w)))
            if not ok:
                continue

        out = AbsorbingSet(r, cfg.epsilon, tuple(picked), tuple(factors), tuple(fixed))
        if len(out.m) <= cap:
            return out
    return None


def absorb(g: Graph, aset: AbsorbingSet, leftover: VertexSet) -> Tiling:
    """Fold a small leftover set into M, returning a factor of M u leftover.

    Leftover r-sets are matched to distinct stored absorbers; an
    unmatched r-set raises AbsorptionFailure, signalling that M should be
    rebuilt with a fresh seed.
    """
    r = aset.r
    m = aset.m
    if leftover.bits & m.bits:
        raise PreconditionError("leftover intersects the absorbing set")
    if (len(m) + len(leftover)) % r:
        raise PreconditionError("total size is not a multiple of r")
    if not len(leftover) <= aset.epsilon * g.n:
        raise PreconditionError(
            f"leftover of {len(leftover)} exceeds the {aset.epsilon} * n allowance"
        )

    rest = sorted(leftover.members())
    chunks = [VertexSet(rest[i : i + r]) for i in range(0, len(rest), r)]
    fam = aset.family
    aux = Graph.empty(len(chunks) + len(fam))
    for i, ch in enumerate(chunks):
        for j, s in enumerate(fam):
            if is_absorber_set(g, s.bits, ch.bits, r):
                aux.add_edge(i, len(chunks) + j)
    mm = maximum_matching(aux)
    assigned: Dict[int, int] = {}
    for u, v in mm.pairs:
        i, j = (u, v - len(chunks)) if u < len(chunks) else (v, u - len(chunks))
        assigned[i] = j
    if len(assigned) < len(chunks):
        missing = next(i for i in range(len(chunks)) if i not in assigned)
        raise AbsorptionFailure(
            f"no unused absorber accepts the r-set {sorted(chunks[missing].members())}"
        )

    pieces: List[VertexSet] = list(aset.fixed)
    for j, s in enumerate(fam):
        if j not in assigned.values():
            pieces.extend(aset.factors[j])
    for i, j in assigned.items():
        f = _factor_of(g, fam[j].bits | chunks[i].bits, r)
        if f is None:
            raise InternalContradiction("matched absorber lost its joint factor")
        pieces.extend(f)

    covered = 0
    for c in pieces:
        if len(c) != r or (covered & c.bits) or not g.is_clique(c.bits):
            raise InternalContradiction("assembled absorption is not a clique tiling")
        covered |= c.bits
    if covered != (m.bits | leftover.bits):
        raise InternalContradiction("assembled absorption misses vertices")
    return Tiling(r, tuple(pieces))


def find_augmentation(
    g: Graph, pieces: Sequence[VertexSet]
) -> Optional[AugmentationMove]:
    """First profile-improving move on a list of disjoint clique pieces.

    Two families, tried for the largest deficient piece first.  Promote:
    a donor no bigger than the target gives up a vertex adjacent to all
    of it.  Relay: a helper piece swaps one of its vertices into the
    target and takes a replacement from the donor.  Either way the
    target grows by one and the donor shrinks by one, which raises the
    size profile lexicographically.
    """
    order = sorted(range(len(pieces)), key=lambda i: (-len(pieces[i]), i))
    r = max((len(p) for p in pieces), default=0)
    for ti in order:
        target = pieces[ti]
        t = len(target)
        if t >= r:
            continue
        cn_t = g.common_neighbors(target.bits)
        for di in order:
            donor = pieces[di]
            if di == ti or len(donor) > t:
                continue
            grab = donor.bits & cn_t
            if grab:
                v = grab & -grab
                repl = [VertexSet(target.bits | v)]
                if donor.bits ^ v:
                    repl.append(VertexSet(donor.bits ^ v))
                return AugmentationMove(target, (donor,), tuple(repl))
        for hi in order:
            helper = pieces[hi]
            if hi == ti or len(helper) < 2:
                continue
            for u in iter_bits(helper.bits & cn_t):
                rest_h = helper.bits ^ (1 << u)
                cn_h = g.common_neighbors(rest_h)
                for di in order:
                    donor = pieces[di]
                    if di in (ti, hi) or len(donor) > t:
                        continue
                    grab = donor.bits & cn_h
                    if not grab:
                        continue
                    w = grab & -grab
                    repl = [
                        VertexSet(target.bits | (1 << u)),
                        VertexSet(rest_h | w),
                    ]
                    if donor.bits ^ w:
                        repl.append(VertexSet(donor.bits ^ w))
                    return AugmentationMove(target, (helper, donor), tuple(repl))
    return None


def _profile(pieces: Sequence[VertexSet], r: int) -> Tuple[int, ...]:
    out = [0] * r
    for p in pieces:
        out[r - len(p)] += 1
    return tuple(out)


def layered_greedy(g: Graph, r: int) -> LayeredFactor:
    """Greedy size-descending clique extraction plus augmentation moves.

    The greedy pass is maximal per layer but not maximum; the move loop
    then pushes vertices upward until no move applies.  Every applied
    move is checked and must improve the profile without losing K_r
    copies.
    """
    if r < 1:
        raise PreconditionError("need r >= 1")
    pieces: List[VertexSet] = []
    mask = g.full_mask
    for size in range(r, 0, -1):
        while True:
            c = find_clique_of_size(g, size, mask)
            if c is None or len(c) == 0:
                break
            pieces.append(c)
            mask &= ~c.bits

    for _ in range(g.n * r + 10):
        move = find_augmentation(g, pieces)
        if move is None:
            break
        if not move.check(g):
            raise InternalContradiction(f"bad augmentation move {move}")
        old = _profile(pieces, r)
        gone = {move.source.bits} | {h.bits for h in move.helpers}
        pieces = [p for p in pieces if p.bits not in gone]
        pieces.extend(move.replacements)
        new = _profile(pieces, r)
        if not (new > old and new[0] >= old[0]):
            raise InternalContradiction(f"move did not improve the profile: {old} -> {new}")
    else:
        raise InternalContradiction("augmentation loop failed to stabilize")

    layers: Dict[int, List[VertexSet]] = {}
    for p in sorted(pieces, key=lambda c: c.bits):
        layers.setdefault(len(p), []).append(p)
    return LayeredFactor(r, {s: tuple(ps) for s, ps in layers.items()})


def almost_cover(
    g: Graph, r: int, cfg: Optional[ConstantsConfig] = None
) -> Tuple[Tiling, VertexSet]:
    """K_r-tiling covering all but a small remainder, plus that remainder.

    The degree-sum floor is mandatory.  The no-sparse-set hypothesis is
    re-checked; when the search proves it (small n, zero edge budget) the
    mu * n bound on the remainder is enforced, otherwise the remainder is
    simply reported and the caller decides.
    """
    if r < 2:
        raise PreconditionError("need r >= 2")
    if cfg is None:
        cfg = default_constants(r)
    n = g.n
    _sigma_gate(g, r, cfg.alpha)
    sparse = None
    if n >= r:
        sparse = _sparse_set(g, g.full_mask, n // r, cfg.gamma, n)
    exact_check = n <= 64 and cfg.gamma * n * n < 1

    lf = layered_greedy(g, r)
    tiling = Tiling(r, lf.layers.get(r, ()))
    uncovered = VertexSet(g.full_mask & ~tiling.covered.bits)
    if sparse is None and exact_check and len(uncovered) > cfg.mu * n:
        raise InternalContradiction(
            f"{len(uncovered)} uncovered vertices exceed the mu * n target"
        )
    return tiling, uncovered


def absorbing_to_json(aset: AbsorbingSet) -> Dict[str, object]:
    return {
        "r": aset.r,
        "epsilon": f"{aset.epsilon.numerator}/{aset.epsilon.denominator}",
        "family": [sorted(s.members()) for s in aset.family],
        "factors": [
            [sorted(c.members()) for c in f] for f in aset.factors
        ],
        "fixed": [sorted(c.members()) for c in aset.fixed],
    }


def absorbing_from_json(doc: Dict[str, object]) -> AbsorbingSet:
    try:
        r = int(doc["r"])
        eps = Fraction(str(doc["epsilon"]))
        family = tuple(VertexSet(map(int, row)) for row in doc["family"])
        factors = tuple(
            tuple(VertexSet(map(int, c)) for c in f) for f in doc["factors"]
        )
        fixed = tuple(VertexSet(map(int, row)) for row in doc["fixed"])
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed absorbing-set document: {exc}") from exc
    if len(family) != len(factors):
        raise PreconditionError("family and factors differ in length")
    aset = AbsorbingSet(r, eps, family, factors, fixed)
    seen = 0
    for s in family:
        if len(s) != r * r or (s.bits & seen):
            raise PreconditionError("family members must be disjoint r^2-sets")
        seen |= s.bits
    for f, s in zip(factors, family):
        covered = 0
        for c in f:
            if len(c) != r or (c.bits & covered) or (c.bits & ~s.bits):
                raise PreconditionError("stored factor does not tile its absorber")
            covered |= c.bits
        if covered != s.bits:
            raise PreconditionError("stored factor does not tile its absorber")
    for c in fixed:
        if len(c) != r or (c.bits & seen):
            raise PreconditionError("fixed cliques must be disjoint r-sets")
        seen |= c.bits
    return aset
