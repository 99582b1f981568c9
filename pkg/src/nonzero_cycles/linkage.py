"""Linkage combinatorics over an ordered terminal row.

Paths are abstracted as intervals (left < right positions in a fixed
terminal order).  A linkage is pure when all pairs relate the same way:
in series, nested, or crossing.  Richer checks (cleanliness) also look at
the carried graph walks and their group values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from . import groups
from .graphs import LabeledGraph, Walk, walk_value

SERIES = "series"
NESTED = "nested"
CROSSING = "crossing"


class LinkageError(ValueError):
    """Raised when linkage hypotheses are violated."""


@dataclass(frozen=True)
class LinkPath:
    """A path with endpoints at terminal positions left < right; the walk
    (when present) is traversed from the left endpoint to the right one."""

    left: int
    right: int
    walk: Optional[Walk] = None

    def __post_init__(self):
        if self.left >= self.right:
            raise LinkageError("endpoints must satisfy left < right")

    @property
    def interval(self) -> Tuple[int, int]:
        return (self.left, self.right)


def classify_pair(p: LinkPath, q: LinkPath) -> str:
    """Relation of two paths with four distinct endpoint positions."""
    a, b = sorted((p.interval, q.interval))
    if len({p.left, p.right, q.left, q.right}) != 4:
        raise LinkageError("paths share a terminal position")
    if a[1] < b[0]:
        return SERIES
    if b[1] < a[1]:
        return NESTED
    return CROSSING


def linkage_type(paths: Sequence[LinkPath]) -> Optional[str]:
    """The common pairwise relation, or None when the family is mixed.
    Families of size < 2 are vacuously pure of every type; they report
    SERIES as canonical."""
    kinds = {
        classify_pair(paths[i], paths[j])
        for i in range(len(paths))
        for j in range(i + 1, len(paths))
    }
    if not kinds:
        return SERIES
    if len(kinds) == 1:
        return next(iter(kinds))
    return None


def is_pure(paths: Sequence[LinkPath]) -> bool:
    return linkage_type(paths) is not None


def _check_linkage(paths: Sequence[LinkPath]) -> None:
    ends: List[int] = []
    for p in paths:
        ends.extend(p.interval)
    if len(set(ends)) != len(ends):
        raise LinkageError("linkage paths must have pairwise distinct endpoints")


# ---------------------------------------------------------------------------
# extracting a pure sublinkage (needs size >= t^3)


def extract_pure(paths: Sequence[LinkPath], t: int) -> Tuple[str, List[LinkPath]]:
    """From >= t^3 paths extract a pure sublinkage of size t.

    Strategy: greedy interval scheduling finds t pairwise disjoint
    intervals (series) if they exist; otherwise some point is stabbed by
    more than t^2 intervals and a longest monotone subsequence of their
    right endpoints (ordered by left endpoint) is crossing or nested.
    Crossing wins ties.
    """
    _check_linkage(paths)
    if t < 1:
        raise LinkageError("t must be positive")
    if len(paths) < t**3:
        raise LinkageError(f"need at least t^3 = {t**3} paths, got {len(paths)}")
    by_right = sorted(paths, key=lambda p: (p.right, p.left))
    chosen: List[LinkPath] = []
    frontier = None
    for p in by_right:
        if frontier is None or p.left > frontier:
            chosen.append(p)
            frontier = p.right
    if len(chosen) >= t:
        return SERIES, chosen[:t]
    # a point of maximum overlap is stabbed by more than t^2 intervals
    points = sorted({x for p in paths for x in p.interval})
    stabbed: List[LinkPath] = []
    for x in points:
        here = [p for p in paths if p.left <= x <= p.right]
        if len(here) > len(stabbed):
            stabbed = here
    if len(stabbed) <= t * t:  # pragma: no cover - impossible given sizes
        raise LinkageError("overlap bound violated")
    stabbed.sort(key=lambda p: p.left)
    rights = [p.right for p in stabbed]
    inc = _longest_monotone(rights, increasing=True)
    dec = _longest_monotone(rights, increasing=False)
    if len(inc) >= t:
        return CROSSING, [stabbed[i] for i in inc[:t]]
    if len(dec) >= t:
        return NESTED, [stabbed[i] for i in dec[:t]]
    raise LinkageError("monotone subsequence bound violated")  # pragma: no cover


def _longest_monotone(xs: Sequence[int], increasing: bool) -> List[int]:
    """Indices of one longest strictly monotone subsequence (first in
    lexicographic order among the longest)."""
    n = len(xs)
    best_len = [1] * n
    prev = [-1] * n
    for i in range(n):
        for j in range(i):
            ok = xs[j] < xs[i] if increasing else xs[j] > xs[i]
            if ok and best_len[j] + 1 > best_len[i]:
                best_len[i] = best_len[j] + 1
                prev[i] = j
    if not xs:
        return []
    end = max(range(n), key=lambda i: (best_len[i], -i))
    out = []
    while end != -1:
        out.append(end)
        end = prev[end]
    return list(reversed(out))


# ---------------------------------------------------------------------------
# separating two pure linkages


def separate_linkages(ps: Sequence[LinkPath], qs: Sequence[LinkPath], t: int) -> Tuple[List[LinkPath], List[LinkPath]]:
    """Given pure linkages of size 4t each whose union is a linkage of size
    8t, select size-t sublinkages whose endpoint intervals separate: hulls
    disjoint when both inputs are in series; the series family's hull clear
    of the other's endpoint runs when exactly one is; and all four endpoint
    runs pairwise disjoint when neither is."""
    if len(ps) != 4 * t or len(qs) != 4 * t:
        raise LinkageError("both linkages must have size exactly 4t")
    _check_linkage(list(ps) + list(qs))
    tp, tq = linkage_type(ps), linkage_type(qs)
    if tp is None or tq is None:
        raise LinkageError("input linkages must be pure")
    ps = sorted(ps, key=lambda p: p.left)
    qs = sorted(qs, key=lambda q: q.left)
    if tp == SERIES:
        return _separate_first_series(ps, qs, t, linkage_type(qs))
    if tq == SERIES:
        q_sel, p_sel = _separate_first_series(qs, ps, t, linkage_type(ps))
        return p_sel, q_sel
    return _separate_blocks(ps, qs, t)


def _separate_first_series(ps, qs, t, other_type) -> Tuple[List[LinkPath], List[LinkPath]]:
    """Case analysis with `ps` in series (both families sorted by left
    endpoint; a series family is then totally ordered)."""
    if qs[3 * t - 1].left > ps[t - 1].right:
        return list(ps[:t]), list(qs[3 * t :])
    if other_type == SERIES:
        return list(ps[t : 2 * t]), list(qs[:t])
    anchor = ps[2 * t - 1].right
    if sum(1 for q in qs if q.right > anchor) >= 3 * t:
        return list(ps[t : 2 * t]), list(qs[t : 2 * t])
    q_sel = sorted((q for q in qs if q.right < anchor), key=lambda q: q.right)[:t]
    return list(ps[2 * t : 3 * t]), q_sel


def _endpoint_runs(block: Sequence[LinkPath]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    lefts = [p.left for p in block]
    rights = [p.right for p in block]
    return (min(lefts), max(lefts)), (min(rights), max(rights))


def _intervals_disjoint(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    return a[1] < b[0] or b[1] < a[0]


def _separate_blocks(ps: Sequence[LinkPath], qs: Sequence[LinkPath], t: int) -> Tuple[List[LinkPath], List[LinkPath]]:
    """Neither family in series: split each (ordered by left endpoints)
    into four consecutive blocks of t paths.  The interval graph on the
    sixteen endpoint-run intervals is a bipartite interval graph, hence a
    forest with at most 15 edges, so among the 16 block pairs (a, b) some
    pair has fully disjoint runs; take the lexicographically first."""
    p_blocks = [list(ps[i * t : (i + 1) * t]) for i in range(4)]
    q_blocks = [list(qs[i * t : (i + 1) * t]) for i in range(4)]
    for pb in p_blocks:
        pl, pr = _endpoint_runs(pb)
        for qb in q_blocks:
            ql, qr = _endpoint_runs(qb)
            if all(
                _intervals_disjoint(x, y)
                for x in (pl, pr)
                for y in (ql, qr)
            ):
                return pb, qb
    raise LinkageError("no separable block pair found")  # pragma: no cover


def satisfies_separation_clause(p_sel, q_sel, tp: str, tq: str) -> bool:
    """The disjointness outcome matching the input type combination."""
    pl, pr = _endpoint_runs(p_sel)
    ql, qr = _endpoint_runs(q_sel)
    p_hull = (pl[0], pr[1])
    q_hull = (ql[0], qr[1])
    if tp == SERIES and tq == SERIES:
        return _intervals_disjoint(p_hull, q_hull)
    if tp == SERIES:
        return _intervals_disjoint(p_hull, ql) and _intervals_disjoint(p_hull, qr)
    if tq == SERIES:
        return _intervals_disjoint(q_hull, pl) and _intervals_disjoint(q_hull, pr)
    runs = [pl, pr, ql, qr]
    return all(
        _intervals_disjoint(runs[i], runs[j])
        for i in range(4)
        for j in range(i + 1, 4)
    )


def _interleaved(first: Sequence[LinkPath], second: Sequence[LinkPath]) -> bool:
    """All left ends of `first`, then all left ends of `second`, then all
    right ends of `first`, then all right ends of `second`."""
    fl = max(p.left for p in first)
    sl_min = min(p.left for p in second)
    sl_max = max(p.left for p in second)
    fr_min = min(p.right for p in first)
    fr_max = max(p.right for p in first)
    sr_min = min(p.right for p in second)
    return fl < sl_min and sl_max < fr_min and fr_max < sr_min


def satisfies_interval_clause(ps: Sequence[LinkPath], qs: Sequence[LinkPath]) -> bool:
    """Interval condition for a pair of linkages: either the interval of ps
    lies entirely before the interval of qs, or the left endpoint runs and
    right endpoint runs strictly interleave and neither family is in
    series."""
    ip = (min(p.left for p in ps), max(p.right for p in ps))
    iq = (min(q.left for q in qs), max(q.right for q in qs))
    if ip[1] < iq[0]:
        return True
    if _interleaved(ps, qs):
        return linkage_type(ps) != SERIES and linkage_type(qs) != SERIES
    return False


# ---------------------------------------------------------------------------
# cleanliness


@dataclass(frozen=True)
class CleanContext:
    """Separation context: positions index the ordered terminal row, and
    `interior_forbidden` holds the vertices the paths may touch only at
    their endpoints."""

    positions: Tuple[int, ...]  # terminal position -> vertex id
    interior_forbidden: frozenset


def check_clean(paths: Sequence[LinkPath], graph: LabeledGraph, ctx: CleanContext, coordinate: int):
    """Clean = pure + internally avoids the forbidden side + every path
    nonzero in the coordinate + equal values when crossing or nested.
    Returns (ok, violations)."""
    violations: List[str] = []
    kind = linkage_type(paths)
    if kind is None:
        violations.append("not pure")
    values = []
    for idx, p in enumerate(paths):
        if p.walk is None:
            violations.append(f"path {idx} carries no walk")
            continue
        p.walk.validate(graph)
        if not p.walk.is_path():
            violations.append(f"path {idx} revisits a vertex")
        expected = (ctx.positions[p.left], ctx.positions[p.right])
        if (p.walk.start, p.walk.end) != expected:
            violations.append(f"path {idx} does not join terminals {expected}")
        if any(v in ctx.interior_forbidden for v in p.walk.vertices[1:-1]):
            violations.append(f"path {idx} passes through the forbidden side")
        val = walk_value(graph, p.walk)
        if graph.descriptor.kind == groups.KIND_DIRECT_SUM:
            val = groups.project(val, coordinate)
        values.append(val)
        if groups.is_zero(val):
            violations.append(f"path {idx} has zero value in coordinate {coordinate}")
    if kind in (CROSSING, NESTED) and len({v for v in values}) > 1:
        violations.append("crossing/nested paths must share one value")
    return (not violations), violations


def check_clean_pair(ps, qs, graph: LabeledGraph, ctx: CleanContext):
    """A clean pair: ps clean in coordinate 0, qs clean in coordinate 1,
    equal sizes, disjoint walks, and the interval clause holds."""
    violations: List[str] = []
    ok_p, vp = check_clean(ps, graph, ctx, 0)
    ok_q, vq = check_clean(qs, graph, ctx, 1)
    violations += [f"first: {v}" for v in vp]
    violations += [f"second: {v}" for v in vq]
    if len(ps) != len(qs):
        violations.append("families must have equal size")
    used = set()
    for fam, name in ((ps, "first"), (qs, "second")):
        for idx, p in enumerate(fam):
            if p.walk is None:
                continue
            vs = set(p.walk.vertices)
            if used & vs:
                violations.append(f"{name} path {idx} meets another path")
            used |= vs
    if not satisfies_interval_clause(ps, qs):
        violations.append("interval clause fails")
    return (not violations), violations
