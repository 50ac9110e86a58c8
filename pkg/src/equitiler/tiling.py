"""Seed cliques and the tiling built on top of them.

The extremal route covers a graph with r-cliques in two stages.  First a thin
layer of *seeds*: tiny cliques (or pairs of cliques) whose common neighborhood
stays fat toward every block of the partition, planted so that every vertex
with an unusual degree pattern sits inside one.  Each seed then grows into one
or two full r-cliques through its common neighborhood.  What remains is
block-respecting and dense, so the leftover block can be tiled by small
cliques, contracted to single vertices, and finished as a balanced
multipartite factor.

Slack is tracked as an exact rational per seed: the largest margin by which
its neighborhood inequalities hold.  Desk-sized instances certify with modest
slack; the asymptotic constants only enter as relaxable size gates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import InternalContradiction, PreconditionError
from .graphs import Graph, VertexSet, find_clique_of_size, iter_bits
from .matching import maximum_matching
from .oracle import Tiling
from .partition import GoodPartition, RsPartition, classify

__all__ = [
    "SingleBase",
    "DoubleBase",
    "Base",
    "BaseSet",
    "Ex2Signal",
    "ExtensionFailure",
    "ContractedInstance",
    "base_slack",
    "is_base",
    "cover_exceptional",
    "cover_nonexcellent",
    "extend_base",
    "strip_tiling",
    "contract_residual",
    "multipartite_factor",
    "parity_repair",
    "tiling_to_json",
    "tiling_from_json",
]


# ---------------------------------------------------------------------------
# seed types


@dataclass(frozen=True)
class SingleBase:
    """One clique kept well connected to every block it does not overfill."""

    clique: VertexSet
    slack: Fraction

    @property
    def cliques(self) -> Tuple[VertexSet, ...]:
        return (self.clique,)

    @property
    def vertices(self) -> VertexSet:
        return self.clique


@dataclass(frozen=True)
class DoubleBase:
    """Two disjoint cliques that each overfill one block by a single vertex.

    `heavy_left` and `heavy_right` name the overfilled blocks, as a part index
    or None for the leftover block; they must differ.  Growing the pair trades
    the surplus between the two blocks, which is what makes these seeds useful
    when a lone clique cannot keep its quota.
    """

    left: VertexSet
    right: VertexSet
    heavy_left: Optional[int]
    heavy_right: Optional[int]
    slack: Fraction

    @property
    def cliques(self) -> Tuple[VertexSet, ...]:
        return (self.left, self.right)

    @property
    def vertices(self) -> VertexSet:
        return self.left | self.right


Base = Union[SingleBase, DoubleBase]


@dataclass(frozen=True)
class BaseSet:
    """Vertex-disjoint seeds plus the obligation set they absorb.

    `covered` records which vertices the set was built to take care of; it is
    always a subset of the seed vertices.
    """

    bases: Tuple[Base, ...]
    covered: VertexSet

    def vertices(self) -> VertexSet:
        bits = 0
        for b in self.bases:
            bits |= b.vertices.bits
        return VertexSet(bits)

    def validate(self, g: Graph, q: GoodPartition) -> List[str]:
        """Re-check disjointness and every seed's margin; returns violations."""
        out = []
        seen = 0
        for k, b in enumerate(self.bases):
            vb = b.vertices.bits
            if seen & vb:
                out.append(f"seed {k} overlaps an earlier seed")
            seen |= vb
            if not is_base(g, q, b):
                out.append(f"seed {k} fails its margin check")
        if self.covered.bits & ~seen:
            out.append("covered vertices escape the seeds")
        return out


@dataclass(frozen=True)
class Ex2Signal:
    """Construction gave out in a way that points at the odd-split shape."""

    reason: str


class ExtensionFailure(InternalContradiction):
    """A completion step ran out of candidates.

    `block` names where: a part index, or None for the leftover block.
    """

    def __init__(self, message: str, block: Optional[int] = None):
        super().__init__(message)
        self.block = block


# ---------------------------------------------------------------------------
# context helpers


def _context(g: Graph, q: GoodPartition) -> Tuple[RsPartition, int, int, int]:
    p = q.partition
    p.check(g.n)
    if not p.parts:
        raise PreconditionError("need at least one peeled part")
    n = g.n
    r = n // len(p.parts[0])
    return p, n, r, p.s


def _blocks(p: RsPartition, r: int) -> List[Tuple[Optional[int], int, int]]:
    """(key, mask, quota) per block; quota is the per-clique share."""
    out: List[Tuple[Optional[int], int, int]] = [
        (i, part.bits, 1) for i, part in enumerate(p.parts)
    ]
    out.append((None, p.b.bits, r - p.s))
    return out


def _block_mask(p: RsPartition, key: Optional[int]) -> int:
    return p.b.bits if key is None else p.parts[key].bits


# ---------------------------------------------------------------------------
# seed margins


# distinct from None, which names the leftover block
_ABSENT = object()


def _caps(g: Graph, n: int, r: int, mask: int, blocks, relax) -> Optional[Fraction]:
    """Largest margin the neighborhood inequalities allow for one clique.

    `relax` marks the block whose bound is loosened by one extra quota step
    (the partner's overfilled block in a pair seed); pass _ABSENT for lone
    seeds.  None means the occupancy caps themselves fail.
    """
    m = n // r
    common = g.common_neighbors(mask)
    best: Optional[Fraction] = None
    for key, bmask, quota in blocks:
        cnt = (mask & bmask).bit_count()
        if cnt > quota:
            return None
        steps = cnt + (2 if relax is not _ABSENT and key == relax else 1)
        lhs = (common & bmask).bit_count()
        cap = Fraction(lhs - bmask.bit_count() + steps * m, n)
        if best is None or cap < best:
            best = cap
    return best


def base_slack(g: Graph, q: GoodPartition, b: Base) -> Optional[Fraction]:
    """Exact largest slack at which `b` qualifies, or None if it never does."""
    p, n, r, _ = _context(g, q)
    blocks = _blocks(p, r)
    if isinstance(b, SingleBase):
        if not g.is_clique(b.clique.bits):
            return None
        return _caps(g, n, r, b.clique.bits, blocks, relax=_ABSENT)
    if b.heavy_left == b.heavy_right:
        return None
    if b.left.bits & b.right.bits:
        return None
    best: Optional[Fraction] = None
    for mask, heavy, other in (
        (b.left.bits, b.heavy_left, b.heavy_right),
        (b.right.bits, b.heavy_right, b.heavy_left),
    ):
        if not g.is_clique(mask):
            return None
        # the named block must be overfilled by exactly one vertex
        for key, bmask, quota in blocks:
            cnt = (mask & bmask).bit_count()
            if key == heavy:
                if cnt != quota + 1:
                    return None
            elif cnt > quota:
                return None
        shifted = [
            (key, bmask, quota + 1 if key == heavy else quota)
            for key, bmask, quota in blocks
        ]
        cap = _caps(g, n, r, mask, shifted, relax=other)
        if cap is None:
            return None
        if best is None or cap < best:
            best = cap
    return best


def is_base(g: Graph, q: GoodPartition, b: Base) -> bool:
    """Exact check of the seed inequalities at the slack stamped on `b`."""
    sl = base_slack(g, q, b)
    return sl is not None and 0 < b.slack <= sl


# ---------------------------------------------------------------------------
# covering the thin-degree vertices


class _Degenerate(Exception):
    """Internal bail-out that turns into an Ex2Signal."""


def _companions(
    g: Graph,
    q: GoodPartition,
    part_index: int,
    need: int,
    thin,
    crowded,
    ve: int,
    rescue_all: int,
    used: int,
) -> Tuple[List[int], int]:
    """Small cliques with exactly two vertices in the given part.

    Crowded rows go first: one that is also thin toward another part spends
    its own rescue edge and closes into a triangle, any other pairs with a
    calm neighbor in its part.  If the crowded rows run out, plain edges
    between calm rows fill the remainder.
    """
    p = q.partition
    pmask = p.parts[part_index].bits
    low = q.low_degree.bits
    bad_here = crowded.bad[part_index].bits
    out: List[int] = []
    for x in iter_bits(bad_here & ~used):
        if len(out) == need:
            break
        xm = 1 << x
        built = 0
        for j in range(p.s):
            if j == part_index:
                continue
            if not (thin.exceptional[j].bits & ~low) & xm:
                continue
            y = q.rescue[j].partner(x)
            if y is None or (1 << y) & used:
                continue
            zc = (
                g.common_neighbors(xm | (1 << y))
                & pmask
                & ve
                & ~bad_here
                & ~used
                & ~rescue_all
            )
            if zc:
                z = (zc & -zc).bit_length() - 1
                built = xm | (1 << y) | (1 << z)
            break
        if not built:
            zc = g.adj[x] & pmask & ve & ~bad_here & ~used & ~rescue_all
            if zc:
                z = (zc & -zc).bit_length() - 1
                built = xm | (1 << z)
        if built:
            out.append(built)
            used |= built
    # plain edges between calm rows
    allowed = pmask & ~bad_here & ~used & ~rescue_all
    for u in iter_bits(allowed):
        if len(out) == need:
            break
        vc = g.adj[u] & allowed & ~((1 << (u + 1)) - 1)
        if vc:
            v = (vc & -vc).bit_length() - 1
            built = (1 << u) | (1 << v)
            out.append(built)
            used |= built
            allowed &= ~built
    if len(out) < need:
        raise _Degenerate(
            f"part {part_index}: not enough companion edges for its thin rows"
        )
    return out, used


def cover_exceptional(g: Graph, q: GoodPartition) -> Union[BaseSet, Ex2Signal]:
    """Seed set absorbing every vertex thin toward some part.

    Low-degree thin vertices are packed into small cliques completed inside
    the leftover block, each paired with a companion to form a pair seed.
    The remaining thin vertices keep their rescue edges as lone seeds.  Any
    structural failure returns a signal instead of raising: an instance this
    tangled is handled by the odd-split recognizers instead.
    """
    p, n, r, s = _context(g, q)
    cfg = q.constants
    thin = classify(g, p, cfg.beta / 2)
    crowded = classify(g, p, 2 * cfg.beta)
    ve = q.classification.excellent_everywhere().bits
    low = q.low_degree.bits
    bmask = p.b.bits
    rescue_all = 0
    for mt in q.rescue:
        rescue_all |= mt.covered.bits

    obligations = 0
    for i in range(s):
        obligations |= thin.exceptional[i].bits

    try:
        bases: List[Base] = []
        used = 0
        chunk = r - s + 1
        for i in range(s):
            exc = thin.exceptional[i].bits
            exs = exc & low
            exl = exc & ~low
            if exl & ~q.rescue[i].covered.bits:
                raise _Degenerate(f"part {i}: a thin vertex has no rescue edge")
            if not exs:
                continue
            if r == s:
                raise _Degenerate(
                    f"part {i}: thin low-degree vertex with no leftover block"
                )
            if not g.is_clique(exs):
                raise _Degenerate(f"part {i}: low-degree thin set is not a clique")
            verts = sorted(iter_bits(exs))
            groups: List[int] = []
            for lo in range(0, len(verts), chunk):
                gmask = 0
                for v in verts[lo : lo + chunk]:
                    gmask |= 1 << v
                groups.append(gmask)
            packed: List[int] = []
            for gmask in groups:
                short = chunk - gmask.bit_count()
                if short:
                    cand = g.common_neighbors(gmask) & bmask & ve & ~used
                    sub = find_clique_of_size(g, short, inside=cand)
                    if sub is None:
                        raise _Degenerate(
                            f"part {i}: cannot complete a thin clique in the leftover block"
                        )
                    gmask |= sub.bits
                packed.append(gmask)
                used |= gmask
            comps, used = _companions(
                g, q, i, len(packed), thin, crowded, ve, rescue_all, used
            )
            for gmask, cmask in zip(packed, comps):
                db = DoubleBase(
                    left=VertexSet(gmask),
                    right=VertexSet(cmask),
                    heavy_left=None,
                    heavy_right=i,
                    slack=Fraction(0),
                )
                sl = base_slack(g, q, db)
                if sl is None or sl <= 0:
                    raise _Degenerate(
                        f"part {i}: thin-clique pairing fails the margin check"
                    )
                bases.append(DoubleBase(db.left, db.right, None, i, sl))
                used |= gmask | cmask
        # surviving rescue edges stand alone
        for j in range(s):
            exc = thin.exceptional[j].bits & ~low
            for u, v in q.rescue[j].pairs:
                em = (1 << u) | (1 << v)
                if not em & exc:
                    continue  # spare edge of the matching, no obligation on it
                if em & used:
                    if exc & em & ~used:
                        raise _Degenerate(
                            f"part {j}: a rescue edge lost its thin endpoint"
                        )
                    continue
                sb = SingleBase(VertexSet(em), Fraction(0))
                sl = base_slack(g, q, sb)
                if sl is None or sl <= 0:
                    raise _Degenerate(f"part {j}: rescue edge fails the margin check")
                bases.append(SingleBase(VertexSet(em), sl))
                used |= em
        if obligations & ~used:
            raise _Degenerate("a thin vertex was left uncovered")
    except _Degenerate as exc:
        return Ex2Signal(str(exc))
    return BaseSet(tuple(bases), VertexSet(obligations))


# ---------------------------------------------------------------------------
# covering the remaining non-excellent vertices


def cover_nonexcellent(g: Graph, q: GoodPartition, u: VertexSet) -> BaseSet:
    """Seeds for vertices that are neither excellent everywhere nor thin.

    `u` holds vertices already spoken for; targets inside `u` count as
    covered by the caller.  Unlike the thin cover this stage has no signal
    path: a good partition guarantees the constructions here, so running out
    of candidates raises InternalContradiction.
    """
    p, n, r, s = _context(g, q)
    cfg = q.constants
    if len(u) ** 4 > (4 * r) ** 4 * cfg.alpha * n**4:
        raise PreconditionError("avoid set too large for the cover")
    thin = classify(g, p, cfg.beta / 2)
    vex = 0
    for i in range(s):
        vex |= thin.exceptional[i].bits
    ve = q.classification.excellent_everywhere().bits
    full = g.full_mask
    targets = full & ~ve & ~vex & ~u.bits
    bmask = p.b.bits
    deg_cap = n - 2 * cfg.beta_prime * n

    bases: List[Base] = []
    used = 0
    for v in iter_bits(targets):
        if (1 << v) & used:
            continue
        avoid = u.bits | used
        if s == r:
            sb = SingleBase(VertexSet(1 << v), Fraction(0))
            sl = base_slack(g, q, sb)
            if sl is None or sl <= 0:
                raise InternalContradiction(
                    f"vertex {v}: lone seed fails though every block is a part"
                )
            bases.append(SingleBase(sb.clique, sl))
            used |= 1 << v
            continue
        i = p.part_of(v)
        if i is not None:
            w = None
            for c in iter_bits(g.adj[v] & p.parts[i].bits & ve & ~avoid):
                if g.degree(c) <= deg_cap:
                    w = c
                    break
            if w is None:
                raise ExtensionFailure(
                    f"vertex {v}: no calm partner inside its part", block=i
                )
            pair = (1 << v) | (1 << w)
            cand = bmask & ve & ~avoid & ~pair
            sub = find_clique_of_size(g, r - s + 1, inside=cand)
            if sub is None:
                raise ExtensionFailure(
                    f"vertex {v}: leftover block holds no clique for its seed",
                    block=None,
                )
            db = DoubleBase(VertexSet(pair), sub, i, None, Fraction(0))
            sl = base_slack(g, q, db)
            if sl is None or sl <= 0:
                raise InternalContradiction(
                    f"vertex {v}: pair seed fails the margin check"
                )
            bases.append(DoubleBase(db.left, db.right, i, None, sl))
            used |= pair | sub.bits
        else:
            cand = g.adj[v] & bmask & ve & ~avoid
            sub = find_clique_of_size(g, r - s - 1, inside=cand)
            if sub is None:
                raise ExtensionFailure(
                    f"vertex {v}: leftover block too thin around it", block=None
                )
            cm = (1 << v) | sub.bits
            sb = SingleBase(VertexSet(cm), Fraction(0))
            sl = base_slack(g, q, sb)
            if sl is None or sl <= 0:
                raise InternalContradiction(
                    f"vertex {v}: leftover seed fails the margin check"
                )
            bases.append(SingleBase(VertexSet(cm), sl))
            used |= cm
    return BaseSet(tuple(bases), VertexSet(targets))


# ---------------------------------------------------------------------------
# growing a seed into full cliques


def _units(
    q: GoodPartition, r: int, h: Base
) -> List[Tuple[int, Dict[Optional[int], int]]]:
    """Per clique of the seed: (core mask, vertices still needed per block)."""
    p = q.partition
    blocks = _blocks(p, r)
    out: List[Tuple[int, Dict[Optional[int], int]]] = []
    if isinstance(h, SingleBase):
        plan = ((h.clique.bits, _ABSENT, _ABSENT),)
    else:
        plan = (
            (h.left.bits, h.heavy_left, h.heavy_right),
            (h.right.bits, h.heavy_right, h.heavy_left),
        )
    for mask, heavy, other in plan:
        need: Dict[Optional[int], int] = {}
        for key, bmask, quota in blocks:
            target = quota
            if heavy is not _ABSENT and key == heavy:
                target = quota + 1
            elif other is not _ABSENT and key == other:
                target = quota - 1
            have = (mask & bmask).bit_count()
            if have > target:
                raise ExtensionFailure(
                    "seed already exceeds the block share its twin must give up",
                    block=key,
                )
            if target > have:
                need[key] = target - have
        out.append((mask, need))
    return out


def _grow(
    g: Graph,
    p: RsPartition,
    ve: int,
    core: int,
    need: Dict[Optional[int], int],
    forbid: int,
    b_pick: Optional[int] = None,
) -> Tuple[Optional[int], Optional[int]]:
    """Complete one clique through its common neighborhood.

    Leftover-block vertices come first as one clique, then parts in order of
    scarcest candidate pool.  Returns (clique, None) or (None, stuck block).
    """
    cur = core
    nb = need.get(None, 0)
    if nb:
        if b_pick is not None:
            cur |= b_pick
        else:
            cand = g.common_neighbors(cur) & p.b.bits & ve & ~forbid
            sub = find_clique_of_size(g, nb, inside=cand)
            if sub is None:
                return None, None
            cur |= sub.bits
    pending = [k for k, c in need.items() if k is not None for _ in range(c)]
    while pending:
        best_key = None
        best_cand = 0
        best_count = 0
        for k in set(pending):
            cand = g.common_neighbors(cur) & p.parts[k].bits & ve & ~forbid
            cnt = cand.bit_count()
            if cnt == 0:
                return None, k
            if best_key is None or cnt < best_count or (cnt == best_count and k < best_key):
                best_key, best_cand, best_count = k, cand, cnt
        pick = (best_cand & -best_cand).bit_length() - 1
        cur |= 1 << pick
        pending.remove(best_key)
    return cur, None


def extend_base(g: Graph, q: GoodPartition, h: Base, w: VertexSet) -> Tiling:
    """Grow a seed into one or two full r-cliques avoiding `w`.

    The result keeps exact block balance: each grown clique takes its block
    share, with the pair seed trading one vertex between its two overfilled
    blocks.  Raises ExtensionFailure naming the block that ran dry.
    """
    p, n, r, s = _context(g, q)
    cfg = q.constants
    floor = min(cfg.beta / 5, h.slack)
    sl = base_slack(g, q, h)
    if sl is None or h.slack <= 0 or sl < floor:
        raise PreconditionError("extension needs a seed with positive margin")
    if len(w) ** 4 > (5 * r) ** 4 * cfg.alpha * n**4:
        raise PreconditionError("avoid set too large for the extension")
    if w.bits & h.vertices.bits:
        raise PreconditionError("avoid set touches the seed")
    ve = q.classification.excellent_everywhere().bits
    units = _units(q, r, h)
    forbid = w.bits
    for mask, _ in units:
        forbid |= mask
    grown: List[int] = []
    for mask, need in units:
        got, stuck = _grow(g, p, ve, mask, need, forbid)
        if got is None:
            where = "leftover block" if stuck is None else f"part {stuck}"
            raise ExtensionFailure(f"no candidates left in the {where}", block=stuck)
        grown.append(got)
        forbid |= got
    cliques = tuple(VertexSet(c) for c in grown)
    t = Tiling(r, cliques)
    if not t.verify(g, require_factor=False):
        raise InternalContradiction("grown cliques failed re-verification")
    count = len(cliques)
    for key, bmask, quota in _blocks(p, r):
        got_here = sum((c.bits & bmask).bit_count() for c in cliques)
        if got_here != count * quota:
            raise InternalContradiction("grown cliques break block balance")
    return t


def _iter_cliques(g: Graph, inside: int, size: int, cap: int) -> Iterator[int]:
    """Lexicographic clique enumeration, at most `cap` results."""
    if size == 0:
        yield 0
        return
    emitted = 0

    def walk(cand: int, cur: int, k: int) -> Iterator[int]:
        nonlocal emitted
        if k == 0:
            yield cur
            return
        m = cand
        while m and emitted < cap:
            v = (m & -m).bit_length() - 1
            bit = 1 << v
            m &= m - 1
            yield from walk(m & g.adj[v], cur | bit, k - 1)

    for res in walk(inside, 0, size):
        emitted += 1
        yield res
        if emitted >= cap:
            return


def _extensions(
    g: Graph, q: GoodPartition, h: Base, wmask: int, cap: int
) -> Iterator[Tuple[VertexSet, ...]]:
    """All ways to grow `h` that differ in their leftover-block choices."""
    p, n, r, s = _context(g, q)
    ve = q.classification.excellent_everywhere().bits
    try:
        units = _units(q, r, h)
    except ExtensionFailure:
        return
    base_forbid = wmask
    for mask, _ in units:
        base_forbid |= mask

    def complete(idx: int, forbid: int, acc: List[int]) -> Iterator[Tuple[VertexSet, ...]]:
        if idx == len(units):
            yield tuple(VertexSet(c) for c in acc)
            return
        mask, need = units[idx]
        nb = need.get(None, 0)
        pool = g.common_neighbors(mask) & p.b.bits & ve & ~forbid
        for bsub in _iter_cliques(g, pool, nb, cap):
            got, _ = _grow(g, p, ve, mask, need, forbid, b_pick=bsub)
            if got is None:
                continue
            yield from complete(idx + 1, forbid | got, acc + [got])

    yield from complete(0, base_forbid, [])


# ---------------------------------------------------------------------------
# residual contraction


def strip_tiling(p: RsPartition, t: Tiling) -> RsPartition:
    """The partition with every tiled vertex removed."""
    cov = t.covered
    return RsPartition(tuple(a - cov for a in p.parts), p.b - cov)


@dataclass(frozen=True)
class ContractedInstance:
    """Quotient graph after tiling the leftover block with small cliques.

    Vertices: surviving part vertices first in ascending original order, then
    one vertex per tiled clique in tiling order.  `originals[v]` maps a new
    vertex back to the original set it stands for.  Part vertices keep their
    cross-part adjacency; a contracted vertex sees exactly the common
    neighborhood of its clique; contracted vertices never see each other.
    """

    graph: Graph
    parts: Tuple[VertexSet, ...]
    originals: Tuple[VertexSet, ...]

    def expand(self, t: Tiling) -> Tiling:
        cliques = []
        sizes = set()
        for c in t.cliques:
            bits = 0
            for v in c:
                bits |= self.originals[v].bits
            cliques.append(VertexSet(bits))
            sizes.add(len(cliques[-1]))
        if len(sizes) > 1:
            raise InternalContradiction("expanded cliques have mixed sizes")
        rr = sizes.pop() if sizes else 0
        return Tiling(rr, tuple(cliques))


def contract_residual(
    g: Graph, p: RsPartition, ts: Tiling
) -> ContractedInstance:
    """Collapse each clique of `ts` (a tiling of the leftover block) to a point.

    The parts of `p` survive unchanged; the leftover block must be covered by
    `ts` exactly, one clique share at a time.
    """
    if not p.parts:
        raise PreconditionError("need at least one part to contract against")
    sizes = {len(a) for a in p.parts}
    if len(sizes) != 1 or 0 in sizes:
        raise PreconditionError("parts must share one nonzero size")
    seen = 0
    for a in p.parts:
        if seen & a.bits:
            raise PreconditionError("partition blocks overlap")
        seen |= a.bits
    if seen & p.b.bits:
        raise PreconditionError("partition blocks overlap")
    if not ts.verify(g, require_factor=False):
        raise PreconditionError("tiling is not a set of disjoint cliques")
    if ts.covered != p.b:
        raise PreconditionError("tiling is not a factor of the leftover block")

    part_verts = sorted(iter_bits(seen))
    new_id = {v: i for i, v in enumerate(part_verts)}
    t0 = len(part_verts)
    originals: List[VertexSet] = [VertexSet(1 << v) for v in part_verts]
    originals.extend(ts.cliques)
    nn = t0 + len(ts.cliques)

    part_key = {}
    for i, a in enumerate(p.parts):
        for v in iter_bits(a.bits):
            part_key[v] = i

    gg = Graph.empty(nn)
    for ai, u in enumerate(part_verts):
        for v in iter_bits(g.adj[u] & seen & ~((1 << (u + 1)) - 1)):
            if part_key[u] != part_key[v]:
                gg.add_edge(ai, new_id[v])
    for j, cl in enumerate(ts.cliques):
        commons = g.common_neighbors(cl.bits)
        for u in iter_bits(commons & seen):
            gg.add_edge(new_id[u], t0 + j)

    new_parts = [
        VertexSet(sum(1 << new_id[v] for v in iter_bits(a.bits))) for a in p.parts
    ]
    new_parts.append(VertexSet(((1 << nn) - 1) ^ ((1 << t0) - 1)))
    return ContractedInstance(gg, tuple(new_parts), tuple(originals))


# ---------------------------------------------------------------------------
# balanced multipartite factor


def multipartite_factor(
    parts: Sequence[VertexSet], gstar: Graph, retries: int = 20
) -> Optional[Tiling]:
    """Factor a balanced multipartite graph into cliques, one vertex per part.

    Layer by layer: partial cliques meet the next part through a bipartite
    matching.  The first pass is deterministic; when a layer matching comes
    up short the whole build restarts with seeded shuffles.  Above the
    cross-degree threshold of (1 - 1/2k) of a part the first pass always
    lands; below it the routine stays best-effort and may return None.
    """
    k = len(parts)
    if k == 0:
        raise PreconditionError("need at least one part")
    sizes = {len(a) for a in parts}
    if len(sizes) != 1:
        raise PreconditionError("parts must be balanced")
    seen = 0
    for a in parts:
        if seen & a.bits:
            raise PreconditionError("parts overlap")
        seen |= a.bits
    if seen != gstar.full_mask:
        raise PreconditionError("parts must cover the graph")
    m = sizes.pop()
    if m == 0:
        return Tiling(k, ())

    order0 = list(range(k))
    members = [sorted(iter_bits(a.bits)) for a in parts]
    for attempt in range(max(1, retries)):
        if attempt == 0:
            order = order0
            layout = [list(ms) for ms in members]
        else:
            rng = random.Random(0xC1A0 + attempt)
            order = order0[:]
            rng.shuffle(order)
            layout = []
            for ms in members:
                row = list(ms)
                rng.shuffle(row)
                layout.append(row)
        cliques = [1 << v for v in layout[order[0]]]
        ok = True
        for layer in order[1:]:
            verts = layout[layer]
            aux = Graph.empty(2 * m)
            for ci, cm in enumerate(cliques):
                for vi, v in enumerate(verts):
                    if cm & ~gstar.adj[v] == 0:
                        aux.add_edge(ci, m + vi)
            mm = maximum_matching(aux)
            if len(mm.pairs) < m:
                ok = False
                break
            for a, b in mm.pairs:
                cliques[a] |= 1 << verts[b - m]
        if not ok:
            continue
        t = Tiling(k, tuple(VertexSet(c) for c in cliques))
        if not t.verify(gstar, require_factor=True):
            continue
        balanced = all(
            (c.bits & a.bits).bit_count() == 1 for c in t.cliques for a in parts
        )
        if balanced:
            return t
    return None


# ---------------------------------------------------------------------------
# parity repair


def _pm_exists(g: Graph, mask: int) -> bool:
    if mask.bit_count() % 2:
        return False
    if mask == 0:
        return True
    sub, _ = g.induced(mask)
    return 2 * len(maximum_matching(sub).pairs) == sub.n


def _attribute(bases: BaseSet, tiling: Tiling) -> List[Tuple[Base, Tuple[int, ...]]]:
    """Match each seed to the tiling cliques that grew out of it."""
    out = []
    for h in bases.bases:
        idxs = []
        ok = True
        for comp in h.cliques:
            hit = None
            for j, cl in enumerate(tiling.cliques):
                if comp.issubset(cl) and j not in idxs:
                    hit = j
                    break
            if hit is None:
                ok = False
                break
            idxs.append(hit)
        if ok:
            out.append((h, tuple(idxs)))
    return out


def parity_repair(
    g: Graph,
    q: GoodPartition,
    bases: BaseSet,
    tiling: Tiling,
    budget: int = 600,
) -> Union[Tiling, Ex2Signal]:
    """Adjust the tiling until the leftover block admits a perfect matching.

    Only meaningful when the leftover block tiles by pairs.  The search walks
    a bounded move set: regrow a seed with different leftover-block choices,
    rebuild a pair seed around a different small clique, or plant a fresh
    pair seed on an edge inside a part.  Each candidate tiling is re-verified
    in full before it is accepted; running out of moves returns the odd-split
    signal, which is a legitimate outcome rather than an error.
    """
    p, n, r, s = _context(g, q)
    if r - s != 2:
        raise PreconditionError("repair applies only when the leftover tiles by pairs")
    bmask = p.b.bits
    if _pm_exists(g, bmask & ~tiling.covered.bits):
        return tiling
    cfg = q.constants
    ve = q.classification.excellent_everywhere().bits
    thin = classify(g, p, cfg.beta / 2)
    obligations = g.full_mask & ~ve
    for i in range(s):
        obligations |= thin.exceptional[i].bits

    def acceptable(t2: Tiling) -> bool:
        if not t2.verify(g, require_factor=False):
            return False
        cov = t2.covered.bits
        if obligations & ~cov:
            return False
        resid = bmask & ~cov
        if resid.bit_count() % (r - s):
            return False
        psizes = {(a.bits & ~cov).bit_count() for a in p.parts}
        if len(psizes) > 1:
            return False
        return _pm_exists(g, resid)

    def candidates() -> Iterator[Tiling]:
        attributed = _attribute(bases, tiling)
        # regrow a seed with different leftover-block choices
        for h, idxs in attributed:
            keep = tuple(c for j, c in enumerate(tiling.cliques) if j not in idxs)
            wmask = 0
            for c in keep:
                wmask |= c.bits
            old = frozenset(tiling.cliques[j] for j in idxs)
            for ext in islice(_extensions(g, q, h, wmask, cap=12), 40):
                if frozenset(ext) == old:
                    continue
                yield Tiling(r, keep + ext)
        # rebuild a pair seed around a different leftover-block clique
        for h, idxs in attributed:
            if not isinstance(h, DoubleBase):
                continue
            keep = tuple(c for j, c in enumerate(tiling.cliques) if j not in idxs)
            wmask = 0
            for c in keep:
                wmask |= c.bits
            for side in (0, 1):
                cm = h.cliques[side].bits
                if not cm & bmask:
                    continue
                fixed = cm & bases.covered.bits
                free = cm.bit_count() - fixed.bit_count()
                other = h.cliques[1 - side].bits
                pool = (
                    (g.common_neighbors(fixed) if fixed else bmask)
                    & bmask
                    & ve
                    & ~wmask
                    & ~other
                )
                for alt in islice(_iter_cliques(g, pool, free, 24), 24):
                    nm = fixed | alt
                    if nm == cm or not g.is_clique(nm):
                        continue
                    if side == 0:
                        h2 = DoubleBase(
                            VertexSet(nm), h.right, h.heavy_left, h.heavy_right, Fraction(0)
                        )
                    else:
                        h2 = DoubleBase(
                            h.left, VertexSet(nm), h.heavy_left, h.heavy_right, Fraction(0)
                        )
                    sl = base_slack(g, q, h2)
                    if sl is None or sl <= 0:
                        continue
                    h2 = DoubleBase(h2.left, h2.right, h2.heavy_left, h2.heavy_right, sl)
                    for ext in islice(_extensions(g, q, h2, wmask, cap=12), 12):
                        yield Tiling(r, keep + ext)
        # plant a fresh pair seed on an edge inside a part
        tcov = tiling.covered.bits
        for i, part in enumerate(p.parts):
            free_part = part.bits & ~tcov
            for uv in _iter_cliques(g, free_part, 2, 64):
                wc = g.common_neighbors(uv) & bmask & ve & ~tcov
                for wv in islice(iter_bits(wc), 8):
                    left = uv | (1 << wv)
                    pool = bmask & ve & ~tcov & ~left
                    for alt in islice(_iter_cliques(g, pool, r - s + 1, 24), 24):
                        h2 = DoubleBase(
                            VertexSet(left), VertexSet(alt), i, None, Fraction(0)
                        )
                        sl = base_slack(g, q, h2)
                        if sl is None or sl <= 0:
                            continue
                        h2 = DoubleBase(h2.left, h2.right, i, None, sl)
                        try:
                            ext = extend_base(g, q, h2, VertexSet(tcov))
                        except (ExtensionFailure, PreconditionError):
                            continue
                        yield Tiling(r, tiling.cliques + ext.cliques)

    tried = 0
    for cand in candidates():
        tried += 1
        if tried > budget:
            break
        if acceptable(cand):
            return cand
    return Ex2Signal("no reachable tiling leaves a matchable leftover block")


# ---------------------------------------------------------------------------
# serialization


def tiling_to_json(t: Tiling) -> List[List[int]]:
    """Plain nested lists, each clique sorted; the verify command reads this."""
    return [sorted(c.members()) for c in t.cliques]


def tiling_from_json(data, r: Optional[int] = None) -> Tiling:
    if not isinstance(data, list):
        raise PreconditionError("tiling document must be a list of cliques")
    cliques: List[VertexSet] = []
    sizes = set()
    for row in data:
        if not isinstance(row, list) or not all(
            isinstance(v, int) and v >= 0 for v in row
        ):
            raise PreconditionError("each clique must be a list of vertex ids")
        vs = VertexSet(row)
        if len(vs) != len(row):
            raise PreconditionError("clique repeats a vertex")
        cliques.append(vs)
        sizes.add(len(vs))
    if len(sizes) > 1:
        raise PreconditionError("cliques must share one size")
    inferred = sizes.pop() if sizes else 0
    if r is not None and cliques and r != inferred:
        raise PreconditionError(f"clique size {inferred} does not match r={r}")
    return Tiling(r if r is not None else inferred, tuple(cliques))
