"""Cycle enumeration and value classification.

A cycle is identified with its edge set; representatives store one rooted
traversal.  For direct-sum labels each coordinate is classified separately,
for a single group both coordinates coincide.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from . import groups
from .graphs import Cycle, LabeledGraph, walk_value

DEFAULT_LIMIT = 10**6
LIMIT_ENV_VAR = "NONZERO_CYCLES_LIMIT"


class EnumerationLimitError(RuntimeError):
    """Raised when cycle enumeration exceeds the configured ceiling."""


def enumeration_limit(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(LIMIT_ENV_VAR)
    return int(raw) if raw else DEFAULT_LIMIT


@dataclass(frozen=True)
class ClassifiedCycle:
    """One cycle with its zero/nonzero status per label coordinate."""

    edges: FrozenSet[int]
    rep: Cycle
    zero: Tuple[bool, bool]

    @property
    def doubly_nonzero(self) -> bool:
        return not self.zero[0] and not self.zero[1]

    def nonzero_in(self, i: int) -> bool:
        return not self.zero[i]

    def canonical_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self.edges), tuple(sorted(self.edges)))


def coordinate_values(graph: LabeledGraph, walk) -> Tuple[groups.GroupElement, groups.GroupElement]:
    """Value of a walk in each coordinate (duplicated for single groups)."""
    val = walk_value(graph, walk)
    if graph.descriptor.kind == groups.KIND_DIRECT_SUM:
        return groups.project(val, 0), groups.project(val, 1)
    return val, val


def classify(graph: LabeledGraph, cycle: Cycle) -> ClassifiedCycle:
    v1, v2 = coordinate_values(graph, cycle)
    return ClassifiedCycle(cycle.edge_set(), cycle, (groups.is_zero(v1), groups.is_zero(v2)))


def enumerate_cycles(graph: LabeledGraph, limit: Optional[int] = None) -> List[ClassifiedCycle]:
    """All simple cycles (as edge sets) with classified representatives,
    sorted by (length, sorted edge ids).  Raises EnumerationLimitError when
    more than `limit` cycles exist."""
    ceiling = enumeration_limit(limit)
    found: Dict[FrozenSet[int], Cycle] = {}

    def record(verts: Tuple[int, ...], eids: Tuple[int, ...]):
        key = frozenset(eids)
        if key not in found:
            if len(found) >= ceiling:
                raise EnumerationLimitError(
                    f"more than {ceiling} cycles; raise {LIMIT_ENV_VAR} to continue"
                )
            found[key] = Cycle(verts, eids)

    order = {v: i for i, v in enumerate(sorted(graph.vertices))}
    for root in sorted(graph.vertices):
        for eid in graph.incident(root):
            e = graph.edge(eid)
            if e.tail == e.head:
                if e.tail == root:
                    record((root, root), (eid,))
        # DFS over paths from root using only vertices ordered after root
        stack = [(root, [root], [], {root})]
        while stack:
            v, verts, eids, used = stack.pop()
            for eid in graph.incident(v):
                e = graph.edge(eid)
                if e.tail == e.head or (eids and eid == eids[-1]):
                    continue
                w = e.head if v == e.tail else e.tail
                if w == root:
                    if len(eids) >= 1 and eid not in eids:
                        record(tuple(verts) + (root,), tuple(eids) + (eid,))
                    continue
                if w in used or order[w] < order[root]:
                    continue
                stack.append((w, verts + [w], eids + [eid], used | {w}))
    cycles = [classify(graph, c) for c in found.values()]
    cycles.sort(key=lambda c: c.canonical_key())
    return cycles


def nonzero_cycles(graph: LabeledGraph, limit: Optional[int] = None) -> List[ClassifiedCycle]:
    return [c for c in enumerate_cycles(graph, limit) if c.doubly_nonzero]


def zero_edge_set(graph: LabeledGraph, i: int, cycles: Optional[List[ClassifiedCycle]] = None) -> FrozenSet[int]:
    """Edges lying on at least one cycle whose coordinate-i value is zero."""
    if cycles is None:
        cycles = enumerate_cycles(graph)
    out: set = set()
    for c in cycles:
        if c.zero[i]:
            out |= c.edges
    return frozenset(out)


@dataclass(frozen=True)
class RobustnessWitness:
    coordinate: int
    first: Cycle
    second: Cycle
    root: int


def rooted_coordinate_values(graph: LabeledGraph, cycle: Cycle, root: int, i: int):
    """Values of the cycle in coordinate i over both traversal directions."""
    rooted = cycle.rooted_at(root)
    vals = set()
    for c in (rooted, rooted.reversed()):
        vals.add(coordinate_values(graph, c)[i])
    return vals


def is_robust(graph: LabeledGraph, limit: Optional[int] = None):
    """Check the no-two-confusable-cycles condition in every coordinate.

    Two distinct cycles are confusable in coordinate i when they are both
    nonzero there, every shared edge lies on some zero cycle of that
    coordinate, they share at least one edge, and from some common start
    vertex they can be traversed with equal values.  Returns (True, None)
    or (False, witness).
    """
    cycles = enumerate_cycles(graph, limit)
    coords = 2 if graph.descriptor.kind == groups.KIND_DIRECT_SUM else 1
    for i in range(coords):
        zi = zero_edge_set(graph, i, cycles)
        hot = [c for c in cycles if c.nonzero_in(i)]
        abelian = _coordinate_abelian(graph.descriptor, i)
        vals = {}
        if abelian:
            for c in hot:
                v = coordinate_values(graph, c.rep)[i]
                vals[c.edges] = {v, groups.inv(v)}
        for a in range(len(hot)):
            for b in range(a + 1, len(hot)):
                c1, c2 = hot[a], hot[b]
                shared = c1.edges & c2.edges
                if not shared or not shared <= zi:
                    continue
                common = c1.rep.vertex_set() & c2.rep.vertex_set()
                if not common:
                    continue
                if abelian:
                    if vals[c1.edges] & vals[c2.edges]:
                        root = min(common)
                        return False, RobustnessWitness(i, c1.rep.rooted_at(root), c2.rep.rooted_at(root), root)
                else:
                    for root in sorted(common):
                        v1 = rooted_coordinate_values(graph, c1.rep, root, i)
                        v2 = rooted_coordinate_values(graph, c2.rep, root, i)
                        if v1 & v2:
                            return False, RobustnessWitness(i, c1.rep.rooted_at(root), c2.rep.rooted_at(root), root)
    return True, None


def _coordinate_abelian(desc: groups.GroupDescriptor, i: int) -> bool:
    if desc.kind == groups.KIND_DIRECT_SUM:
        return desc.parts[i].is_abelian
    return desc.is_abelian
