"""Sparse-part partitions: peel them off a graph, then refine to a good one.

The extremal pipeline wants V(G) split into parts A_1..A_s of size n/r,
each inducing very few edges, plus a leftover block B with no sparse
n/r-subset.  `peel_partition` extracts such parts greedily.  Vertices are
then graded per part by exact rational degree thresholds (bad inside a
part, exceptional or excellent toward it), and `refine_to_good` swaps
misplaced vertices between parts until the partition passes the checks in
`validate_good`.  Everything runs on bitmasks with Fraction thresholds,
so results are reproducible and never depend on float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .constants import ConstantsConfig, default_constants
from .errors import InternalContradiction, PreconditionError
from .extremal import Ex1Witness, independent_set_of_size
from .graphs import (
    Graph,
    VertexSet,
    as_fraction,
    induced_edge_count,
    iter_bits,
    low_degree_set,
    max_independent_set,
)
from .matching import Matching, covering_matching, maximum_matching

__all__ = [
    "RsPartition",
    "VertexClassification",
    "GoodPartition",
    "RefineStep",
    "RefinementTrace",
    "slack_threshold",
    "peel_partition",
    "classify",
    "refine_to_good",
    "validate_good",
]


def slack_threshold(n: int, r: int) -> Fraction:
    """Degree bound (1 - 1/r)n - 1; vertices strictly below it form S."""
    return Fraction(r - 1, r) * n - 1


@dataclass(frozen=True)
class RsPartition:
    """Parts A_1..A_s of equal size n/r plus the leftover block B."""

    parts: Tuple[VertexSet, ...]
    b: VertexSet

    @property
    def s(self) -> int:
        return len(self.parts)

    @property
    def cover(self) -> VertexSet:
        out = self.b
        for p in self.parts:
            out = out | p
        return out

    def part_of(self, v: int) -> Optional[int]:
        """Index of the part holding v, or None when v sits in B."""
        for i, p in enumerate(self.parts):
            if v in p:
                return i
        if v in self.b:
            return None
        raise ValueError(f"vertex {v} not covered by the partition")

    def check(self, n: int) -> None:
        seen = 0
        for p in list(self.parts) + [self.b]:
            if seen & p.bits:
                raise PreconditionError("partition blocks overlap")
            seen |= p.bits
        if seen != (1 << n) - 1:
            raise PreconditionError("partition does not cover the vertex set")
        if self.parts:
            size = len(self.parts[0])
            if size == 0 or any(len(p) != size for p in self.parts):
                raise PreconditionError("parts must share one nonzero size")
            if n % size != 0:
                raise PreconditionError(f"part size {size} must divide n={n}")


@dataclass(frozen=True)
class VertexClassification:
    """Per-part vertex grades at one threshold delta.

    For x in A_i, `bad` collects d(x, A_i) >= delta*n.  For x outside A_i,
    `exceptional` collects d(x, A_i) <= delta*n and `excellent` collects
    d(x, A_i) >= |A_i| - delta*n; `nonexcellent` is everything outside
    A_i that is not excellent.  The B-facing grades use d(x, B) the same
    way.  `low_degree` is the set S of globally thin vertices; the S/L
    refinements come from `in_low` / `off_low`.
    """

    partition: RsPartition
    delta: Fraction
    low_degree: VertexSet
    bad: Tuple[VertexSet, ...]
    exceptional: Tuple[VertexSet, ...]
    excellent: Tuple[VertexSet, ...]
    nonexcellent: Tuple[VertexSet, ...]
    excellent_b: VertexSet
    nonexcellent_b: VertexSet

    def in_low(self, vs: VertexSet) -> VertexSet:
        return vs & self.low_degree

    def off_low(self, vs: VertexSet) -> VertexSet:
        return vs - self.low_degree

    def excellent_everywhere(self) -> VertexSet:
        """Vertices excellent toward every block they do not belong to."""
        out = self.excellent_b | self.partition.b
        for i, part in enumerate(self.partition.parts):
            out = out & (self.excellent[i] | part)
        return out


def classify(g: Graph, p: RsPartition, delta) -> VertexClassification:
    """Grade every vertex against every block at the given threshold."""
    p.check(g.n)
    d = as_fraction(delta)
    n = g.n
    lo = d * n
    slack = (
        low_degree_set(g, slack_threshold(n, n // len(p.parts[0])))
        if p.parts
        else low_degree_set(g, slack_threshold(n, 1) if n else 0)
    )
    bad: List[VertexSet] = []
    exc: List[VertexSet] = []
    exl: List[VertexSet] = []
    nex: List[VertexSet] = []
    full = g.full_mask
    for part in p.parts:
        m = part.bits
        hi = len(part) - lo
        b_bits = x_bits = e_bits = 0
        for v in iter_bits(m):
            if (g.adj[v] & m).bit_count() >= lo:
                b_bits |= 1 << v
        for v in iter_bits(full & ~m):
            dv = (g.adj[v] & m).bit_count()
            if dv <= lo:
                x_bits |= 1 << v
            if dv >= hi:
                e_bits |= 1 << v
        bad.append(VertexSet(b_bits))
        exc.append(VertexSet(x_bits))
        exl.append(VertexSet(e_bits))
        nex.append(VertexSet(full & ~m & ~e_bits))
    bm = p.b.bits
    hi_b = len(p.b) - lo
    eb = 0
    for v in iter_bits(full & ~bm):
        if (g.adj[v] & bm).bit_count() >= hi_b:
            eb |= 1 << v
    out = VertexClassification(
        partition=p,
        delta=d,
        low_degree=slack,
        bad=tuple(bad),
        exceptional=tuple(exc),
        excellent=tuple(exl),
        nonexcellent=tuple(nex),
        excellent_b=VertexSet(eb),
        nonexcellent_b=VertexSet(full & ~bm & ~eb),
    )
    _check_thin_spread(g, out)
    return out


def _check_thin_spread(g: Graph, cls: VertexClassification) -> None:
    # Pigeonhole sanity: d(v) > (1 - 2/r + 2*delta)n forces d(v, A_i) <= delta*n
    # for at most one part.  A breach means the grade sets were computed wrong.
    p = cls.partition
    if not p.parts:
        return
    n = g.n
    r = n // len(p.parts[0])
    bound = Fraction(r - 2, r) * n + 2 * cls.delta * n
    counts = [0] * n
    for x in cls.exceptional:
        for v in iter_bits(x.bits):
            counts[v] += 1
    for v in range(n):
        if counts[v] >= 2 and g.degree(v) > bound:
            raise InternalContradiction(
                f"vertex {v} grades thin toward {counts[v]} parts at degree {g.degree(v)}"
            )


def _greedy_independent(g: Graph, universe: int, size: int) -> Optional[VertexSet]:
    order = sorted(
        iter_bits(universe), key=lambda v: ((g.adj[v] & universe).bit_count(), v)
    )
    chosen = 0
    for v in order:
        if not (g.adj[v] & chosen):
            chosen |= 1 << v
            if chosen.bit_count() == size:
                return VertexSet(chosen)
    return None


def _sparse_set(
    g: Graph, universe: int, size: int, budget, order: int
) -> Optional[VertexSet]:
    """A size-subset of `universe` inducing at most budget * order^2 edges.

    Exact when zero edges are allowed and n <= 64 (independent-set branch
    and bound); otherwise a bounded deterministic search, so None is
    "not found", not a nonexistence proof.
    """
    if universe.bit_count() < size or size <= 0:
        return None if size > 0 else VertexSet(0)
    limit = as_fraction(budget) * order * order
    if g.n <= 64:
        found = max_independent_set(g, inside=universe)
    else:
        found = _greedy_independent(g, universe, size)
    if found is not None and len(found) >= size:
        bits = 0
        for v in iter_bits(found.bits):
            if bits.bit_count() == size:
                break
            bits |= 1 << v
        return VertexSet(bits)
    if limit < 1:
        return None
    # Hill climb from two deterministic starts, ejecting the most crowded
    # member for the best replacement until the edge budget is met.
    starts = [
        sorted(iter_bits(universe), key=lambda v: ((g.adj[v] & universe).bit_count(), v)),
        sorted(iter_bits(universe)),
    ]
    for order_list in starts:
        cur = 0
        for v in order_list[:size]:
            cur |= 1 << v
        for _ in range(200):
            edges = induced_edge_count(g, cur)
            if edges <= limit:
                return VertexSet(cur)
            worst = max(iter_bits(cur), key=lambda v: ((g.adj[v] & cur).bit_count(), v))
            rest = cur & ~(1 << worst)
            drop = (g.adj[worst] & cur).bit_count()
            best_v, best_gain = -1, 0
            for o in iter_bits(universe & ~cur):
                gain = drop - (g.adj[o] & rest).bit_count()
                if gain > best_gain:
                    best_v, best_gain = o, gain
            if best_v < 0:
                break
            cur = rest | (1 << best_v)
        if induced_edge_count(g, cur) <= limit:
            return VertexSet(cur)
    return None


def peel_partition(
    g: Graph, r: int, cfg: Optional[ConstantsConfig] = None
) -> Tuple[RsPartition, int]:
    """Extract sparse parts of size n/r one by one until the search fails.

    The first part must avoid the thin set S entirely; later parts are
    searched inside the remaining graph, also off S, with the edge budget
    scaled to the residual order.  s = 0 (no parts, B = V) signals that no
    sufficiently sparse part exists as far as the bounded search can tell.
    """
    n = g.n
    if r < 2 or n == 0 or n % r != 0:
        raise PreconditionError(f"need r >= 2 dividing n, got r={r}, n={n}")
    if cfg is None:
        cfg = default_constants(r)
    size = n // r
    full = g.full_mask
    slack = low_degree_set(g, slack_threshold(n, r))
    parts: List[VertexSet] = []
    # Seed: a gamma-sparse part, S excluded up front so no swap step is
    # needed afterwards.  If even gamma_1 fails there is nothing to peel.
    first = _sparse_set(g, full & ~slack.bits, size, cfg.gamma, n)
    if first is None:
        first = _sparse_set(g, full & ~slack.bits, size, cfg.gamma_i(1), n)
    if first is None:
        return RsPartition((), VertexSet(full)), 0
    parts.append(first)
    remaining = full & ~first.bits & ~slack.bits
    while len(parts) < r:
        i = len(parts) + 1
        order = n - len(parts) * size
        nxt = _sparse_set(g, remaining, size, cfg.gamma_i(i), order)
        if nxt is None:
            break
        parts.append(nxt)
        remaining &= ~nxt.bits
    used = 0
    for p in parts:
        used |= p.bits
    out = RsPartition(tuple(parts), VertexSet(full & ~used))
    out.check(n)
    return out, out.s


@dataclass(frozen=True)
class RefineStep:
    """One exchange round: who was thin toward part k, who was crowded in it."""

    k: int
    thin: VertexSet
    crowded: VertexSet
    swapped: int
    surplus: int
    pairs: Tuple[Tuple[int, int], ...]
    stage_vertices: VertexSet
    matching: Optional[Matching]


@dataclass(frozen=True)
class RefinementTrace:
    steps: Tuple[RefineStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def total_moves(self) -> int:
        return sum(s.swapped + s.surplus for s in self.steps)


@dataclass(frozen=True)
class GoodPartition:
    """A refined partition with its grades, rescue matchings and constants.

    `classification` is taken at delta = 2 * beta_prime, the threshold the
    tiling stage reads.  `rescue[i]` matches every off-S vertex that is
    thin toward A_i at beta/2 into A_i; the matchings are pairwise
    disjoint.  `validate_good` re-derives every condition from scratch.
    """

    partition: RsPartition
    classification: VertexClassification
    rescue: Tuple[Matching, ...]
    constants: ConstantsConfig

    @property
    def s(self) -> int:
        return self.partition.s

    @property
    def low_degree(self) -> VertexSet:
        return self.classification.low_degree

    def to_json(self) -> Dict[str, object]:
        return {
            "parts": [sorted(p.members()) for p in self.partition.parts],
            "b": sorted(self.partition.b.members()),
            "low_degree": sorted(self.low_degree.members()),
            "rescue": [sorted(m.pairs) for m in self.rescue],
            "classification_delta": f"{self.classification.delta.numerator}"
            f"/{self.classification.delta.denominator}",
            "constants": self.constants.to_json(),
        }


def _part_masks(p: RsPartition) -> Tuple[List[int], int]:
    return [x.bits for x in p.parts], p.b.bits


def _assemble(parts: List[int], b: int) -> RsPartition:
    return RsPartition(tuple(VertexSet(x) for x in parts), VertexSet(b))


def _move(parts: List[int], b: int, v: int, dest: Optional[int]) -> int:
    """Detach v from its current block and attach it to `dest` (None = B)."""
    bit = 1 << v
    for i in range(len(parts)):
        parts[i] &= ~bit
    b &= ~bit
    if dest is None:
        b |= bit
    else:
        parts[dest] |= bit
    return b


def refine_to_good(
    g: Graph, p: RsPartition, cfg: Optional[ConstantsConfig] = None
) -> Tuple[Union[GoodPartition, Ex1Witness], RefinementTrace]:
    """Exchange loop turning a peeled partition into a good one.

    Round k grades vertices at delta = beta + (k-1)*alpha, swaps thin
    off-S outsiders into A_k against crowded insiders (lowest index
    first), and when thin vertices are left over, matches the enlarged
    stage graph so each surviving edge straddles A_k.  The other exit is
    an independent set of n/r + 1 vertices, which already rules every
    clique factor out.  Failing both raises InternalContradiction: at this
    n the configured constants cannot honour the guarantees, and callers
    should fall back to an exact method.
    """
    n = g.n
    p.check(n)
    s = p.s
    if s < 1:
        raise PreconditionError("refinement needs at least one peeled part")
    size = len(p.parts[0])
    r = n // size
    if cfg is None:
        cfg = default_constants(r)
    if cfg.s != s:
        cfg = cfg.for_s(s)
    target = size + 1
    escape = independent_set_of_size(g, target)
    if escape is not None:
        return Ex1Witness(escape), RefinementTrace(())
    parts, b = _part_masks(p)
    steps: List[RefineStep] = []
    for k in range(s):
        delta = cfg.beta + k * cfg.alpha
        cls = classify(g, _assemble(parts, b), delta)
        thin = cls.off_low(cls.exceptional[k])
        crowded = cls.bad[k]
        xs = sorted(thin.members())
        ys = sorted(crowded.members())
        t = min(len(xs), len(ys))
        pairs = []
        cur = _assemble(parts, b)
        origins = {x: cur.part_of(x) for x in xs}
        for x, y in zip(xs[:t], ys[:t]):
            b = _move(parts, b, x, k)
            b = _move(parts, b, y, origins[x])
            pairs.append((x, y))
        surplus = len(xs) - t
        matching = None
        stage_mask = 0
        if surplus > 0:
            leftovers = xs[t:]
            stage_mask = parts[k]
            for x in leftovers:
                stage_mask |= 1 << x
            matching = _stage_matching(
                g, stage_mask, leftovers, surplus, target, steps, k
            )
            if isinstance(matching, Ex1Witness):
                return matching, RefinementTrace(tuple(steps))
            b = _apply_straddle(g, parts, b, k, matching, leftovers, origins)
        steps.append(
            RefineStep(
                k=k + 1,
                thin=thin,
                crowded=crowded,
                swapped=t,
                surplus=surplus,
                pairs=tuple(pairs),
                stage_vertices=VertexSet(stage_mask),
                matching=matching,
            )
        )
        if any(m.bit_count() != size for m in parts):
            raise InternalContradiction("exchange round changed a part size")
    trace = RefinementTrace(tuple(steps))
    final = _assemble(parts, b)
    rescue = _rescue_matchings(g, final, cfg, trace)
    good = GoodPartition(
        partition=final,
        classification=classify(g, final, 2 * cfg.beta_prime),
        rescue=rescue,
        constants=cfg,
    )
    report = validate_good(g, good)
    if report:
        raise InternalContradiction(
            "refinement stalled: " + "; ".join(report) + _trace_note(trace)
        )
    return good, trace


def _trace_note(trace: RefinementTrace) -> str:
    bits = [
        f"round {s.k}: thin={len(s.thin)} crowded={len(s.crowded)} "
        f"swapped={s.swapped} surplus={s.surplus}"
        for s in trace.steps
    ]
    return " [" + "; ".join(bits) + "]" if bits else ""


def _stage_matching(
    g: Graph,
    stage_mask: int,
    leftovers: List[int],
    surplus: int,
    target: int,
    steps: List[RefineStep],
    k: int,
):
    """Matching of `surplus` edges in the stage graph, or the Ex1 escape."""
    h, labels = g.induced(stage_mask)
    pos = {v: i for i, v in enumerate(labels)}
    local_x = VertexSet(v for v in (pos[x] for x in leftovers))
    m = covering_matching(h, local_x, surplus)
    if m is None:
        mm = maximum_matching(h)
        if mm.size >= surplus:
            picked = sorted(
                mm.pairs,
                key=lambda e: (-((e[0] in local_x) + (e[1] in local_x)), e),
            )[:surplus]
            m = Matching(tuple(picked))
        else:
            inside = max_independent_set(h) if h.n <= 64 else None
            if inside is not None and len(inside) >= target:
                bits = 0
                for v in iter_bits(inside.bits):
                    if bits.bit_count() == target:
                        break
                    bits |= 1 << labels[v]
                return Ex1Witness(VertexSet(bits))
            raise InternalContradiction(
                f"stage graph at round {k + 1} has matching number {mm.size} "
                f"< {surplus} and no escape set"
            )
    return Matching(tuple((labels[u], labels[v]) for u, v in m.pairs))


def _apply_straddle(
    g: Graph,
    parts: List[int],
    b: int,
    k: int,
    matching: Matching,
    leftovers: List[int],
    origins: Dict[int, Optional[int]],
) -> int:
    """Re-home vertices so every matching edge has one endpoint in part k.

    Per edge one endpoint is marked excluded (staying outside A_k); all
    other stage vertices are pulled in.  Every pulled-in leftover vacates
    its origin slot, and the excluded A_k members fill those slots one for
    one, so all block sizes are preserved.
    """
    left_bits = 0
    for x in leftovers:
        left_bits |= 1 << x
    excluded = []
    for u, v in matching.pairs:
        u_left = bool((left_bits >> u) & 1)
        v_left = bool((left_bits >> v) & 1)
        if u_left == v_left:
            excluded.append(max(u, v))
        else:
            excluded.append(u if u_left else v)
    ex_mask = 0
    for v in excluded:
        ex_mask |= 1 << v
    pulled = [x for x in leftovers if not ((ex_mask >> x) & 1)]
    evicted = [v for v in excluded if (parts[k] >> v) & 1]
    if len(pulled) != len(evicted):
        raise InternalContradiction(
            f"straddle bookkeeping off balance: {len(pulled)} in, {len(evicted)} out"
        )
    for x in pulled:
        b = _move(parts, b, x, k)
    for w, x in zip(sorted(evicted), pulled):
        b = _move(parts, b, w, origins[x])
    for u, v in matching.pairs:
        if ((parts[k] >> u) & 1) + ((parts[k] >> v) & 1) != 1:
            raise InternalContradiction(f"edge {u},{v} does not straddle part {k + 1}")
    return b


def _rescue_matchings(
    g: Graph, p: RsPartition, cfg: ConstantsConfig, trace: RefinementTrace
) -> Tuple[Matching, ...]:
    """Disjoint matchings sending each beta/2-thin off-S vertex into its part."""
    cls = classify(g, p, cfg.beta / 2)
    used = 0
    out: List[Matching] = []
    for i, part in enumerate(p.parts):
        need = cls.off_low(cls.exceptional[i])
        if used & need.bits:
            raise InternalContradiction(
                f"thin vertex shared between parts blocks disjoint rescue"
                f" matchings{_trace_note(trace)}"
            )
        if len(need) == 0:
            out.append(Matching(()))
            continue
        side = part.bits & ~used
        locals_ = sorted(need.members()) + sorted(iter_bits(side))
        pos = {v: i for i, v in enumerate(locals_)}
        aux = Graph.empty(len(locals_))
        for x in need.members():
            for y in iter_bits(g.adj[x] & side):
                aux.add_edge(pos[x], pos[y])
        m = covering_matching(aux, VertexSet(range(len(need))), len(need))
        if m is None:
            raise InternalContradiction(
                f"no rescue matching into part {i + 1} for {len(need)} thin "
                f"vertices{_trace_note(trace)}"
            )
        pairs = tuple((locals_[u], locals_[v]) for u, v in m.pairs)
        out.append(Matching(pairs))
        for u, v in pairs:
            used |= (1 << u) | (1 << v)
    return tuple(out)


def _within_root_budget(count: int, budget: Fraction, scale: int) -> bool:
    # count <= sqrt(budget) * scale, squared to stay in integer arithmetic.
    return count * count <= budget * scale * scale


def validate_good(g: Graph, q: GoodPartition) -> List[str]:
    """Re-derive every good-partition condition; returns violated clauses."""
    cfg = q.constants
    p = q.partition
    n = g.n
    report: List[str] = []
    try:
        p.check(n)
    except PreconditionError as exc:
        return [f"(shape) {exc}"]
    if not p.parts:
        return ["(shape) no parts to validate"]
    size = len(p.parts[0])
    slack = low_degree_set(g, slack_threshold(n, n // size))
    if not slack.issubset(p.b):
        report.append("(S) low-degree vertices stray outside the leftover block")
    for i, part in enumerate(p.parts):
        e = induced_edge_count(g, part.bits)
        if not (e * e <= cfg.alpha * n ** 4):
            report.append(f"(A1) part {i + 1} induces {e} edges")
    if len(p.b) >= 2 * size:
        found = _sparse_set(
            g, p.b.bits, size, cfg.zeta * cfg.zeta / 4, len(p.b)
        )
        if found is not None:
            report.append("(A2) leftover block still holds a sparse part")
    cls_b = classify(g, p, 2 * cfg.beta)
    cls_ne = classify(g, p, 2 * cfg.beta_prime)
    cls_half = classify(g, p, cfg.beta / 2)
    for i in range(p.s):
        if not _within_root_budget(len(cls_b.bad[i]), cfg.alpha, n):
            report.append(f"(A3) part {i + 1} has {len(cls_b.bad[i])} crowded vertices")
        if not _within_root_budget(len(cls_ne.nonexcellent[i]), cfg.alpha, n):
            report.append(
                f"(A3) part {i + 1} has {len(cls_ne.nonexcellent[i])} non-excellent vertices"
            )
    if len(q.rescue) != p.s:
        report.append(f"(A4) expected {p.s} rescue matchings, got {len(q.rescue)}")
        return report
    seen = 0
    for i, part in enumerate(p.parts):
        need = cls_half.off_low(cls_half.exceptional[i])
        crowded = cls_b.bad[i]
        if len(crowded) > 0 and len(need) > 0:
            report.append(f"(A4) part {i + 1} keeps both crowded and thin vertices")
        m = q.rescue[i]
        if not m.verify(g):
            report.append(f"(A4) rescue matching {i + 1} is not a matching of G")
            continue
        cov = m.covered
        if seen & cov.bits:
            report.append(f"(A4) rescue matching {i + 1} overlaps an earlier one")
        seen |= cov.bits
        if not need.issubset(cov):
            report.append(f"(A4) rescue matching {i + 1} misses thin vertices")
        for u, v in m.pairs:
            ends = {u, v}
            if not (ends & set(need.members()) and ends & set(part.members())):
                report.append(
                    f"(A4) edge {u},{v} of rescue matching {i + 1} leaves its lane"
                )
                break
    return report
