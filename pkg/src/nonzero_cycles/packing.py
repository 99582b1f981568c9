"""Exact packing and covering of nonzero cycles and nonzero A-paths.

All solvers enumerate candidate cycles/paths explicitly and then run a
deterministic branch-and-bound; ties break lexicographically on sorted
edge-id tuples.  Intended for desk-scale instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import groups
from .cycles import ClassifiedCycle, enumerate_cycles
from .graphs import Cycle, LabeledGraph, Walk, walk_value


@dataclass(frozen=True)
class PackCoverReport:
    """Exact packing number, half-integral packing number, and transversal
    number for the doubly-nonzero cycles of a graph, with witnesses."""

    nu: int
    nu_half: int
    tau: int
    packing: Tuple[FrozenSet[int], ...]
    half_packing: Tuple[FrozenSet[int], ...]
    transversal: FrozenSet[int]


def _canonical(cands: Sequence[ClassifiedCycle]) -> List[ClassifiedCycle]:
    return sorted(cands, key=lambda c: c.canonical_key())


def _max_disjoint(items: List[Tuple[FrozenSet[int], FrozenSet[int]]], max_use: int) -> List[int]:
    """Max selection of (vertex_set, edge_set) items with every vertex used
    at most `max_use` times and pairwise-distinct edge sets; returns indices
    of the first optimum in lexicographic branch order."""
    n = len(items)
    best: List[int] = []

    usage: Dict[int, int] = {}

    def feasible(i: int) -> bool:
        return all(usage.get(v, 0) < max_use for v in items[i][0])

    def search(start: int, chosen: List[int]):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        if start >= n or len(chosen) + (n - start) <= len(best):
            return
        for i in range(start, n):
            if len(chosen) + (n - i) <= len(best):
                break
            if feasible(i):
                for v in items[i][0]:
                    usage[v] = usage.get(v, 0) + 1
                chosen.append(i)
                search(i + 1, chosen)
                chosen.pop()
                for v in items[i][0]:
                    usage[v] -= 1

    search(0, [])
    return best


def _min_hitting_set(sets: List[FrozenSet[int]]) -> FrozenSet[int]:
    """Exact minimum vertex set meeting every set; deterministic."""
    if not sets:
        return frozenset()
    # greedy upper bound
    remaining = list(sets)
    greedy: set = set()
    while remaining:
        counts: Dict[int, int] = {}
        for s in remaining:
            for v in s:
                counts[v] = counts.get(v, 0) + 1
        v = min(counts, key=lambda x: (-counts[x], x))
        greedy.add(v)
        remaining = [s for s in remaining if v not in s]
    best: Optional[frozenset] = frozenset(greedy)

    def search(uncovered: List[FrozenSet[int]], chosen: set):
        nonlocal best
        if not uncovered:
            if best is None or len(chosen) < len(best):
                best = frozenset(chosen)
            return
        # lower bound: disjoint uncovered sets each need a separate vertex
        lb = 0
        used: set = set()
        for s in uncovered:
            if not (s & used):
                lb += 1
                used |= s
        if best is not None and len(chosen) + lb >= len(best):
            return
        pivot = min(uncovered, key=lambda s: (len(s), tuple(sorted(s))))
        for v in sorted(pivot):
            rest = [s for s in uncovered if v not in s]
            chosen.add(v)
            search(rest, chosen)
            chosen.discard(v)

    search(list(sets), set())
    return best if best is not None else frozenset()


def pack_and_cover(graph: LabeledGraph, limit: Optional[int] = None) -> PackCoverReport:
    """Exact nu, nu_half and tau over the doubly-nonzero cycles."""
    cycles = [c for c in _canonical(enumerate_cycles(graph, limit)) if c.doubly_nonzero]
    items = [(c.rep.vertex_set(), c.edges) for c in cycles]
    pack_idx = _max_disjoint(items, max_use=1)
    half_idx = _max_disjoint(items, max_use=2)
    transversal = _min_hitting_set([c.rep.vertex_set() for c in cycles])
    return PackCoverReport(
        nu=len(pack_idx),
        nu_half=len(half_idx),
        tau=len(transversal),
        packing=tuple(cycles[i].edges for i in pack_idx),
        half_packing=tuple(cycles[i].edges for i in half_idx),
        transversal=transversal,
    )


def verify_transversal(graph: LabeledGraph, transversal, limit: Optional[int] = None) -> bool:
    """Re-check a transversal by deleting it and looking for survivors."""
    rest = graph.without_vertices(transversal)
    return not any(c.doubly_nonzero for c in enumerate_cycles(rest, limit))


def verify_packing(graph: LabeledGraph, edge_sets: Sequence[FrozenSet[int]], max_use: int = 1) -> bool:
    """Check the members are doubly-nonzero cycles respecting vertex usage."""
    from .graphs import cycle_from_edges
    from .cycles import classify

    usage: Dict[int, int] = {}
    seen = set()
    for es in edge_sets:
        key = frozenset(es)
        if key in seen:
            return False
        seen.add(key)
        try:
            cyc = cycle_from_edges(graph, es)
        except Exception:
            return False
        if not classify(graph, cyc).doubly_nonzero:
            return False
        for v in cyc.vertex_set():
            usage[v] = usage.get(v, 0) + 1
            if usage[v] > max_use:
                return False
    return True


# ---------------------------------------------------------------------------
# nonzero A-paths


@dataclass(frozen=True)
class APathReport:
    nu: int
    tau: int
    packing: Tuple[Walk, ...]
    cover: FrozenSet[int]
    duality_ok: bool  # tau <= 2 * nu


def enumerate_nonzero_a_paths(graph: LabeledGraph, terminals, limit: Optional[int] = None) -> List[Walk]:
    """All nonzero-valued paths with both (distinct) ends in `terminals`
    and no internal vertex there."""
    ceiling = limit if limit is not None else 10**6
    a_set = set(terminals)
    if not a_set <= graph.vertices:
        raise ValueError("terminals must be vertices of the graph")
    found: Dict[Tuple[FrozenSet[int], FrozenSet[int]], Walk] = {}
    for start in sorted(a_set):
        stack = [(start, (start,), (), {start})]
        while stack:
            v, verts, eids, used = stack.pop()
            for eid in graph.incident(v):
                e = graph.edge(eid)
                if e.tail == e.head or (eids and eid == eids[-1]) or eid in eids:
                    continue
                w = graph.other_end(eid, v)
                if w in used:
                    continue
                walk = Walk(verts + (w,), eids + (eid,))
                if w in a_set:
                    if w > start:
                        key = (walk.edge_set(), frozenset((start, w)))
                        if key not in found:
                            if len(found) >= ceiling:
                                from .cycles import EnumerationLimitError

                                raise EnumerationLimitError("too many A-paths")
                            found[key] = walk
                    continue
                stack.append((w, walk.vertices, walk.edges, used | {w}))
    hot = [w for w in found.values() if not groups.is_zero(walk_value(graph, w))]
    hot.sort(key=lambda w: (len(w.edges), tuple(sorted(w.edges))))
    return hot


def a_path_pack_and_cover(graph: LabeledGraph, terminals, limit: Optional[int] = None) -> APathReport:
    paths = enumerate_nonzero_a_paths(graph, terminals, limit)
    items = [(frozenset(w.vertices), w.edge_set()) for w in paths]
    pack_idx = _max_disjoint(items, max_use=1)
    cover = _min_hitting_set([frozenset(w.vertices) for w in paths])
    nu, tau = len(pack_idx), len(cover)
    return APathReport(
        nu=nu,
        tau=tau,
        packing=tuple(paths[i] for i in pack_idx),
        cover=cover,
        duality_ok=tau <= 2 * nu,
    )
