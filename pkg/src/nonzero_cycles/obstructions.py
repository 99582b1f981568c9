"""Escher walls and doubly-labeled wall obstructions.

Both constructions attach labeled two-edge paths to the top (and, for
Escher walls, bottom) row of a null-labeled wall.  Exact packing and
covering numbers of such instances are computed structurally: every
nonzero cycle must traverse whole attachment paths, the wall itself
contributes nothing to cycle values, and the attachment endpoints all lie
on the outer face of the wall, so disjoint routings exist exactly for
families of pairwise non-crossing endpoint chords.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import groups, packing
from .cycles import coordinate_values
from .graphs import Cycle, Edge, LabeledGraph, Walk, walk_value
from .walls import Wall, WallFormatError, _elementary, elementary_wall


class ObstructionFormatError(ValueError):
    """The requested instance violates a construction precondition."""


class VerificationUndecidedError(RuntimeError):
    """The chord router could not settle a feasible-looking routing."""


LINKAGE_TYPES = ("series", "nested", "crossing")


# ---------------------------------------------------------------------------
# instances: a wall plus labeled attachment paths


@dataclass(frozen=True)
class Attachment:
    """A two-edge path glued to the wall, ordered along the boundary."""

    name: str
    kind: str  # "P" (first coordinate) or "Q" (second)
    walk: Walk  # from the boundary-earlier end to the later one
    value: groups.GroupElement  # walk value of `walk`
    left_pos: int  # boundary positions of the two wall ends
    right_pos: int

    @property
    def left(self) -> int:
        return self.walk.start

    @property
    def right(self) -> int:
        return self.walk.end

    @property
    def interior(self) -> Tuple[int, ...]:
        return self.walk.vertices[1:-1]


@dataclass(frozen=True)
class WallInstance:
    graph: LabeledGraph
    wall: Wall
    attachments: Tuple[Attachment, ...]


def _boundary_positions(wall: Wall) -> Dict[int, int]:
    return {v: i for i, v in enumerate(wall.boundary.vertices[:-1])}


def _row_slots(wall: Wall, row_index: int) -> List[int]:
    """The nail of each brick along the given outer row, left to right."""
    row = set(wall.horizontal[row_index].vertices)
    nails = set(wall.nails)
    slots = []
    row_bricks = [b for b in wall.bricks if set(b.vertices) & row]
    row_bricks.sort(key=lambda b: min(wall.coords[v][0] for v in b.vertex_set()))
    for brick in row_bricks:
        cand = sorted(brick.vertex_set() & row & nails, key=lambda v: wall.coords[v])
        if len(cand) != 1:
            raise WallFormatError("expected one nail per outer-row brick")
        slots.append(cand[0])
    return slots


def _attach(
    wall: Wall,
    ends: Sequence[Tuple[str, str, int, int, groups.GroupElement]],
) -> WallInstance:
    """Glue a two-edge path (a, m, b) with the given value for each
    (name, kind, a, b, value) request; the value sits on the first edge."""
    desc = wall.graph.descriptor
    ident = groups.identity(desc)
    edges = list(wall.graph.edges.values())
    next_eid = max(wall.graph.edge_ids(), default=-1) + 1
    next_vid = max(wall.graph.vertices) + 1
    verts = set(wall.graph.vertices)
    raw = []
    for name, kind, a, b, value in ends:
        m = next_vid
        next_vid += 1
        verts.add(m)
        edges.append(Edge(next_eid, a, m, value))
        edges.append(Edge(next_eid + 1, m, b, ident))
        raw.append((name, kind, Walk((a, m, b), (next_eid, next_eid + 1))))
        next_eid += 2
    graph = LabeledGraph(desc, verts, edges)
    pos = _boundary_positions(wall)
    atts = []
    for name, kind, walk in raw:
        if pos[walk.start] > pos[walk.end]:
            walk = walk.reversed()
        atts.append(
            Attachment(
                name=name,
                kind=kind,
                walk=walk,
                value=walk_value(graph, walk),
                left_pos=pos[walk.start],
                right_pos=pos[walk.end],
            )
        )
    atts.sort(key=lambda a: a.left_pos)
    return WallInstance(graph=graph, wall=wall, attachments=tuple(atts))


# ---------------------------------------------------------------------------
# Escher walls


def escher_instance(h: int) -> WallInstance:
    """A bipartite h-wall plus h disjoint parity-breaking paths, the i-th
    joining the i-th top brick to the (h−i+1)-th bottom brick."""
    if h < 1:
        raise ObstructionFormatError("height must be at least 1")
    desc = groups.cyclic(2)
    wall = _elementary(h, desc)
    top = _row_slots(wall, 0)
    bottom = _row_slots(wall, wall.r)
    one = groups.element(desc, 1)
    ends = [
        (f"P{i + 1}", "P", top[i], bottom[h - 1 - i], one) for i in range(h)
    ]
    return _attach(wall, ends)


def escher_wall(h: int) -> LabeledGraph:
    """The Escher wall of height h over the two-element group."""
    return escher_instance(h).graph


# ---------------------------------------------------------------------------
# the doubly-labeled obstruction family


@dataclass(frozen=True)
class ObstructionSpec:
    """Height, the interval types of the two linkages, the two label
    groups, and the per-path values (first-coordinate values for the one
    linkage, second-coordinate for the other)."""

    h: int
    p_type: str
    q_type: str
    gamma1: groups.GroupDescriptor
    gamma2: groups.GroupDescriptor
    p_values: Tuple[groups.GroupElement, ...]
    q_values: Tuple[groups.GroupElement, ...]


def _validate_spec(spec: ObstructionSpec) -> None:
    if spec.h < 1:
        raise ObstructionFormatError("height must be at least 1")
    for t in (spec.p_type, spec.q_type):
        if t not in LINKAGE_TYPES:
            raise ObstructionFormatError(f"unknown linkage type {t!r}")
    if spec.p_type == spec.q_type:
        raise ObstructionFormatError("the two linkages must be of different type")
    for label, values, desc, t in (
        ("first", spec.p_values, spec.gamma1, spec.p_type),
        ("second", spec.q_values, spec.gamma2, spec.q_type),
    ):
        if len(values) != spec.h:
            raise ObstructionFormatError(f"{label}-linkage needs {spec.h} values")
        for v in values:
            if v.descriptor != desc:
                raise ObstructionFormatError(f"{label}-linkage value in wrong group")
            if groups.is_zero(v):
                raise ObstructionFormatError(f"{label}-linkage values must be nonzero")
        if t in ("nested", "crossing") and len(set(values)) > 1:
            raise ObstructionFormatError(
                f"a {t} linkage must carry one common value"
            )


def _interval_block(kind: str, offset: int, h: int) -> List[Tuple[int, int]]:
    """Endpoint slot pairs of one linkage inside a block of 2h slots."""
    if kind == "series":
        return [(offset + 2 * i, offset + 2 * i + 1) for i in range(h)]
    if kind == "nested":
        return [(offset + i, offset + 2 * h - 1 - i) for i in range(h)]
    return [(offset + i, offset + h + i) for i in range(h)]  # crossing


def _interleaved_block(kind: str, left0: int, right0: int, h: int) -> List[Tuple[int, int]]:
    if kind == "nested":
        return [(left0 + i, right0 + h - 1 - i) for i in range(h)]
    return [(left0 + i, right0 + i) for i in range(h)]  # crossing


def _slot_pattern(h: int, p_type: str, q_type: str):
    """0-based top-row slot indices for the 2h + 2h linkage endpoints.

    When either linkage is in series the two interval families can sit on
    disjoint slot ranges (first linkage strictly left of the second);
    otherwise their ranges must interleave: all first-linkage left ends,
    then all second-linkage left ends, then the right ends in the same
    order.
    """
    if "series" in (p_type, q_type):
        return _interval_block(p_type, 0, h), _interval_block(q_type, 2 * h, h)
    return (
        _interleaved_block(p_type, 0, 2 * h, h),
        _interleaved_block(q_type, h, 3 * h, h),
    )


def build_obstruction_instance(spec: ObstructionSpec) -> WallInstance:
    """A null-labeled 4h-wall with two h-linkages attached on the top row:
    one nonzero exactly in the first coordinate, one exactly in the
    second, with endpoint intervals placed by linkage type."""
    _validate_spec(spec)
    desc = groups.direct_sum(spec.gamma1, spec.gamma2)
    wall = elementary_wall(4 * spec.h, desc)
    slots = _row_slots(wall, 0)
    p_pairs, q_pairs = _slot_pattern(spec.h, spec.p_type, spec.q_type)
    ident1 = groups.identity(spec.gamma1)
    ident2 = groups.identity(spec.gamma2)
    ends = []
    for i, (l, r) in enumerate(p_pairs):
        value = groups.element(desc, (spec.p_values[i], ident2))
        ends.append((f"P{i + 1}", "P", slots[l], slots[r], value))
    for i, (l, r) in enumerate(q_pairs):
        value = groups.element(desc, (ident1, spec.q_values[i]))
        ends.append((f"Q{i + 1}", "Q", slots[l], slots[r], value))
    return _attach(wall, ends)


def build_obstruction(spec: ObstructionSpec) -> LabeledGraph:
    return build_obstruction_instance(spec).graph


# ---------------------------------------------------------------------------
# cycle shapes: which attachment subsets can carry a nonzero cycle


@dataclass(frozen=True)
class _Shape:
    """A cyclic visiting order of attachments with orientations, inducing
    one wall chord between consecutive attachment endpoints."""

    sequence: Tuple[Attachment, ...]
    orients: Tuple[int, ...]  # 0 = left-to-right
    chords: Tuple[Tuple[int, int], ...]  # (exit vertex, entry vertex)
    chord_pos: Tuple[Tuple[int, int], ...]  # boundary positions of the same
    value: groups.GroupElement


def _coordinates(value: groups.GroupElement):
    if value.descriptor.kind == groups.KIND_DIRECT_SUM:
        return groups.project(value, 0), groups.project(value, 1)
    return value, value


def _doubly_nonzero(value: groups.GroupElement) -> bool:
    a, b = _coordinates(value)
    return not groups.is_zero(a) and not groups.is_zero(b)


def _shapes(attachments: Sequence[Attachment], desc: groups.GroupDescriptor):
    """All cycle shapes over nonempty attachment subsets, up to rotation
    and reflection; only shapes with doubly nonzero value are yielded."""
    for size in range(1, len(attachments) + 1):
        for subset in itertools.combinations(attachments, size):
            first, rest = subset[0], subset[1:]
            for perm in itertools.permutations(rest):
                seq = (first,) + perm
                for tail in itertools.product((0, 1), repeat=size - 1):
                    orients = (0,) + tail
                    value = groups.identity(desc)
                    for att, o in zip(seq, orients):
                        v = att.value if o == 0 else groups.inv(att.value)
                        value = groups.op(value, v)
                    if not _doubly_nonzero(value):
                        continue
                    chords, chord_pos = [], []
                    for k in range(size):
                        a, oa = seq[k], orients[k]
                        b, ob = seq[(k + 1) % size], orients[(k + 1) % size]
                        exit_v = a.right if oa == 0 else a.left
                        exit_p = a.right_pos if oa == 0 else a.left_pos
                        entry_v = b.left if ob == 0 else b.right
                        entry_p = b.left_pos if ob == 0 else b.right_pos
                        chords.append((exit_v, entry_v))
                        chord_pos.append((exit_p, entry_p))
                    yield _Shape(seq, orients, tuple(chords), tuple(chord_pos), value)


def _chords_cross(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    a1, a2 = sorted(a)
    inside = sum(1 for p in b if a1 < p < a2)
    return inside == 1


def _noncrossing(chord_pos: Sequence[Tuple[int, int]]) -> bool:
    return all(
        not _chords_cross(chord_pos[i], chord_pos[j])
        for i in range(len(chord_pos))
        for j in range(i + 1, len(chord_pos))
    )


# ---------------------------------------------------------------------------
# routing chords as disjoint wall paths


def _bfs_walk(graph: LabeledGraph, s: int, t: int, blocked) -> Optional[Walk]:
    if s in blocked or t in blocked:
        return None
    if s == t:
        return None
    parent: Dict[int, Tuple[int, int]] = {s: (-1, -1)}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        if v == t:
            verts, eids = [t], []
            while verts[-1] != s:
                pv, pe = parent[verts[-1]]
                eids.append(pe)
                verts.append(pv)
            return Walk(tuple(reversed(verts)), tuple(reversed(eids)))
        for eid in graph.incident(v):
            w = graph.other_end(eid, v)
            if w in parent or (w in blocked and w != t):
                continue
            parent[w] = (v, eid)
            queue.append(w)
    return None


def _route_chords(
    graph: LabeledGraph,
    chords: Sequence[Tuple[int, int]],
    forbidden: Iterable[int] = (),
) -> Optional[List[Walk]]:
    """Vertex-disjoint wall paths realizing the chords, or None.  The
    router is greedy per chord, retrying every insertion order."""
    n = len(chords)
    terminals = {v for c in chords for v in c}
    base = set(forbidden)
    orders = itertools.permutations(range(n)) if n <= 4 else [tuple(range(n))]
    for order in orders:
        used = set(base)
        walks: List[Optional[Walk]] = [None] * n
        ok = True
        for idx in order:
            s, t = chords[idx]
            blocked = used | (terminals - {s, t})
            walk = _bfs_walk(graph, s, t, blocked)
            if walk is None:
                ok = False
                break
            walks[idx] = walk
            used |= set(walk.vertices)
        if ok:
            return [w for w in walks if w is not None]
    return None


def _assemble_cycle(graph: LabeledGraph, shape: _Shape, routes: Sequence[Walk]) -> Cycle:
    walk = None
    for k, (att, o) in enumerate(zip(shape.sequence, shape.orients)):
        part = att.walk if o == 0 else att.walk.reversed()
        walk = part if walk is None else walk.concat(part)
        walk = walk.concat(routes[k])
    cycle = Cycle(walk.vertices, walk.edges)
    g1, g2 = coordinate_values(graph, cycle)
    if groups.is_zero(g1) or groups.is_zero(g2):
        raise VerificationUndecidedError("assembled witness lost its value")
    return cycle


# ---------------------------------------------------------------------------
# exact packing and covering on wall instances


def _find_cycle(inst: WallInstance, removed: FrozenSet[int] = frozenset()) -> Optional[Cycle]:
    """A doubly nonzero cycle avoiding `removed`, or None if provably none
    exists.  Raises if a non-crossing candidate resists routing."""
    alive = [
        a
        for a in inst.attachments
        if not (set(a.walk.vertices) & removed)
    ]
    wall_removed = frozenset(v for v in removed if v in inst.wall.graph.vertices)
    routing_failed = False
    for shape in _shapes(alive, inst.graph.descriptor):
        if not _noncrossing(shape.chord_pos):
            continue
        routes = _route_chords(inst.wall.graph, shape.chords, wall_removed)
        if routes is None:
            routing_failed = True
            continue
        return _assemble_cycle(inst.graph, shape, routes)
    if routing_failed:
        raise VerificationUndecidedError(
            "a non-crossing chord system could not be routed"
        )
    return None


def _find_two_disjoint(inst: WallInstance) -> Optional[Tuple[Cycle, Cycle]]:
    """Two vertex-disjoint doubly nonzero cycles, or None if provably
    impossible (every joint chord system crosses)."""
    shapes = list(_shapes(inst.attachments, inst.graph.descriptor))
    routing_failed = False
    for s1, s2 in itertools.combinations(shapes, 2):
        names1 = {a.name for a in s1.sequence}
        if names1 & {a.name for a in s2.sequence}:
            continue
        combined = s1.chord_pos + s2.chord_pos
        if not _noncrossing(combined):
            continue
        routes = _route_chords(inst.wall.graph, s1.chords + s2.chords)
        if routes is None:
            routing_failed = True
            continue
        k = len(s1.chords)
        c1 = _assemble_cycle(inst.graph, s1, routes[:k])
        c2 = _assemble_cycle(inst.graph, s2, routes[k:])
        if c1.vertex_set() & c2.vertex_set():
            raise VerificationUndecidedError("routed witnesses intersect")
        return c1, c2
    if routing_failed:
        raise VerificationUndecidedError(
            "a non-crossing joint chord system could not be routed"
        )
    return None


def _half_integral_family(inst: WallInstance) -> List[Cycle]:
    """A maximum family of distinct witness cycles using each vertex at
    most twice, drawn from the individually routable shapes."""
    cycles: List[Cycle] = []
    seen = set()
    for shape in _shapes(inst.attachments, inst.graph.descriptor):
        if len(cycles) >= 32:
            break
        if not _noncrossing(shape.chord_pos):
            continue
        routes = _route_chords(inst.wall.graph, shape.chords)
        if routes is None:
            continue
        variants = [routes]
        # a second routing avoiding the first one's interior doubles the
        # usable candidates for half-integral packing
        interior = frozenset(
            v for w in routes for v in w.vertices[1:-1]
        )
        alt = _route_chords(inst.wall.graph, shape.chords, interior)
        if alt is not None:
            variants.append(alt)
        for variant in variants:
            cycle = _assemble_cycle(inst.graph, shape, variant)
            if cycle.edge_set() in seen:
                continue
            seen.add(cycle.edge_set())
            cycles.append(cycle)
    items = [(c.vertex_set(), c.edge_set()) for c in cycles]
    chosen = packing._max_disjoint(items, max_use=2)
    return [cycles[i] for i in chosen]


def _structural_cover(inst: WallInstance) -> FrozenSet[int]:
    """A smallest set of attachment interior vertices meeting every
    attachment subset that can carry a doubly nonzero value."""
    name_sets = {
        frozenset(a.name for a in shape.sequence)
        for shape in _shapes(inst.attachments, inst.graph.descriptor)
    }
    if not name_sets:
        return frozenset()
    mid = {a.name: a.interior[0] for a in inst.attachments}
    index = {a.name: i for i, a in enumerate(inst.attachments)}
    hit = packing._min_hitting_set([frozenset(index[n] for n in s) for s in name_sets])
    return frozenset(mid[inst.attachments[i].name] for i in hit)


def _exact_transversal(inst: WallInstance) -> int:
    """Exact minimum transversal of the doubly nonzero cycles: an upper
    bound comes from covering the attachment interiors; it is certified by
    exhibiting a witness cycle avoiding every smaller vertex set."""
    cover = _structural_cover(inst)
    t = len(cover)
    verts = sorted(inst.graph.vertices)
    while t > 0:
        counterexample = None
        for subset in itertools.combinations(verts, t - 1):
            if _find_cycle(inst, frozenset(subset)) is None:
                counterexample = subset
                break
        if counterexample is None:
            return t
        t = len(counterexample)  # the counterexample is itself a cover
    return 0


def verify_instance(inst: WallInstance, h: int) -> dict:
    """Exact ν, ν½ (best witnessed family), and τ for a wall instance,
    checked against the obstruction requirements ν = 1 and τ > h."""
    for e in inst.wall.graph.edges.values():
        if not groups.is_zero(e.label):
            raise ObstructionFormatError("the wall part must be null-labeled")
    one = _find_cycle(inst)
    if one is None:
        nu = 0
    else:
        nu = 2 if _find_two_disjoint(inst) is not None else 1
    nu_half = max(len(_half_integral_family(inst)), nu)
    tau = _exact_transversal(inst) if nu else 0
    return {
        "nu": nu,
        "nu_half": nu_half,
        "tau": tau,
        "nu_ok": nu == 1,
        "tau_ok": tau > h,
        "method": "chords",
    }


# ---------------------------------------------------------------------------
# verifying a bare labeled graph


def _reconstruct(graph: LabeledGraph, h: int) -> Optional[WallInstance]:
    """Recognize a 4h-wall with two-edge attachments on it; None if the
    graph is not of that shape."""
    middles = []
    for v in sorted(graph.vertices):
        if graph.degree(v) != 2:
            continue
        eids = graph.incident(v)
        if any(not groups.is_zero(graph.edge(e).label) for e in eids):
            middles.append(v)
    core = graph.without_vertices(middles)
    try:
        ref = elementary_wall(4 * h, graph.descriptor)
    except WallFormatError:
        return None
    if core != ref.graph:
        return None
    pos = _boundary_positions(ref)
    atts = []
    for i, m in enumerate(middles):
        e1, e2 = graph.incident(m)
        a, b = graph.other_end(e1, m), graph.other_end(e2, m)
        if a not in pos or b not in pos:
            return None
        walk = Walk((a, m, b), (e1, e2))
        if pos[a] > pos[b]:
            walk = walk.reversed()
        value = walk_value(graph, walk)
        g1, g2 = _coordinates(value)
        kind = "P" if not groups.is_zero(g1) else "Q"
        atts.append(
            Attachment(
                name=f"A{i + 1}",
                kind=kind,
                walk=walk,
                value=value,
                left_pos=pos[walk.start],
                right_pos=pos[walk.end],
            )
        )
    atts.sort(key=lambda a: a.left_pos)
    return WallInstance(graph=graph, wall=ref, attachments=tuple(atts))


def verify_obstruction(graph: LabeledGraph, h: int, limit: Optional[int] = None) -> dict:
    """Exact {ν, ν½, τ} report for a desk-scale instance, with pass/fail
    against ν = 1 and τ > h.  Recognized wall-plus-attachment instances
    are solved structurally; anything else falls back to full cycle
    enumeration (subject to the enumeration limit)."""
    inst = _reconstruct(graph, h)
    if inst is not None:
        return verify_instance(inst, h)
    report = packing.pack_and_cover(graph, limit=limit)
    return {
        "nu": report.nu,
        "nu_half": report.nu_half,
        "tau": report.tau,
        "nu_ok": report.nu == 1,
        "tau_ok": report.tau > h,
        "method": "enumeration",
    }
