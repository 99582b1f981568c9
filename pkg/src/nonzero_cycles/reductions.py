"""Encodings of classical constrained-cycle problems as doubly-labeled
graphs, plus the homology labeling of an embedded graph.

Each reduction reorients the input deterministically (tail = smaller
vertex id) and assigns labels so the constrained cycles of the input are
exactly the doubly nonzero cycles of the output.  Signed power-of-two
labels make distinct edge subsets sum to distinct values, which is what
the plain, S-, and S1-S2 encodings rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import cycles, groups
from .graphs import Cycle, Edge, GraphFormatError, LabeledGraph, Walk


# ---------------------------------------------------------------------------
# deterministic reorientation and enumeration


def _canonical_arcs(graph: LabeledGraph) -> List[Tuple[int, int, int]]:
    """(eid, tail, head) for every edge, reoriented tail = smaller vertex
    id, in increasing edge-id order."""
    out = []
    for eid in sorted(graph.edge_ids()):
        e = graph.edge(eid)
        u, v = sorted((e.tail, e.head))
        out.append((eid, u, v))
    return out


def _relabel(
    graph: LabeledGraph,
    desc: groups.GroupDescriptor,
    label_of: Callable[[int, int, int, int], groups.GroupElement],
) -> LabeledGraph:
    """New graph with canonical orientation and label_of(rank, eid, u, v);
    ranks start at 1 in edge-id order."""
    edges = [
        Edge(eid, u, v, label_of(i + 1, eid, u, v))
        for i, (eid, u, v) in enumerate(_canonical_arcs(graph))
    ]
    return LabeledGraph(desc, graph.vertices, edges)


def _touches(graph: LabeledGraph, eid: int, s: FrozenSet[int]) -> bool:
    e = graph.edge(eid)
    return e.tail in s or e.head in s


# ---------------------------------------------------------------------------
# the five cycle-problem encodings


def reduce_plain_cycles(graph: LabeledGraph) -> LabeledGraph:
    """Every cycle becomes doubly nonzero: edge i carries (2^i, 2^i)."""
    desc = groups.direct_sum(groups.integers(), groups.integers())
    return _relabel(graph, desc, lambda i, eid, u, v: groups.element(desc, (2**i, 2**i)))


def reduce_odd_cycles(graph: LabeledGraph) -> LabeledGraph:
    """Odd cycles become doubly nonzero: every edge carries (1, 1)."""
    desc = groups.direct_sum(groups.cyclic(2), groups.cyclic(2))
    return _relabel(graph, desc, lambda i, eid, u, v: groups.element(desc, (1, 1)))


def reduce_S_cycles(graph: LabeledGraph, s: Iterable[int]) -> LabeledGraph:
    """Cycles meeting S become doubly nonzero: edge i carries (2^i, 2^i)
    when it has an end in S and (0, 0) otherwise."""
    s = frozenset(s)
    desc = groups.direct_sum(groups.integers(), groups.integers())

    def lab(i, eid, u, v):
        hot = u in s or v in s
        return groups.element(desc, (2**i, 2**i) if hot else (0, 0))

    return _relabel(graph, desc, lab)


def reduce_odd_S_cycles(graph: LabeledGraph, s: Iterable[int]) -> LabeledGraph:
    """Odd cycles meeting S become doubly nonzero: edge i carries
    (1, 2^i) when it has an end in S and (1, 0) otherwise."""
    s = frozenset(s)
    desc = groups.direct_sum(groups.cyclic(2), groups.integers())

    def lab(i, eid, u, v):
        hot = u in s or v in s
        return groups.element(desc, (1, 2**i) if hot else (1, 0))

    return _relabel(graph, desc, lab)


def reduce_S1_S2_cycles(
    graph: LabeledGraph, s1: Iterable[int], s2: Iterable[int]
) -> LabeledGraph:
    """Cycles meeting both S1 and S2 become doubly nonzero: edge i
    carries (d1 * 2^i, d2 * 2^i) with dj = 1 exactly when it has an end
    in Sj."""
    s1, s2 = frozenset(s1), frozenset(s2)
    desc = groups.direct_sum(groups.integers(), groups.integers())

    def lab(i, eid, u, v):
        d1 = 1 if (u in s1 or v in s1) else 0
        d2 = 1 if (u in s2 or v in s2) else 0
        return groups.element(desc, (d1 * 2**i, d2 * 2**i))

    return _relabel(graph, desc, lab)


# ---------------------------------------------------------------------------
# correspondence between constrained cycles and nonzero cycles


def _predicate(kind: str, s1: FrozenSet[int], s2: FrozenSet[int]) -> Callable[[Cycle], bool]:
    def meets(c: Cycle, s: FrozenSet[int]) -> bool:
        return bool(c.vertex_set() & s)

    if kind == "plain":
        return lambda c: True
    if kind == "odd":
        return lambda c: len(c.edges) % 2 == 1
    if kind == "s":
        return lambda c: meets(c, s1)
    if kind == "odd_s":
        return lambda c: len(c.edges) % 2 == 1 and meets(c, s1)
    if kind == "s1s2":
        return lambda c: meets(c, s1) and meets(c, s2)
    raise ValueError(f"unknown reduction kind {kind!r}")


def correspondence_check(
    kind: str,
    reduced: LabeledGraph,
    s1: Iterable[int] = (),
    s2: Iterable[int] = (),
    limit: Optional[int] = None,
) -> bool:
    """Exhaustively confirm that the doubly nonzero cycles of a reduced
    graph are exactly the constrained cycles of the original (which has
    the same vertices, edge ids, and adjacencies)."""
    want = _predicate(kind, frozenset(s1), frozenset(s2))
    return all(
        c.doubly_nonzero == want(c.rep)
        for c in cycles.enumerate_cycles(reduced, limit=limit)
    )


# ---------------------------------------------------------------------------
# embedded graphs: rotation systems with edge signs


Dart = Tuple[int, int]  # (edge id, direction): 0 = tail->head, 1 = head->tail


@dataclass(frozen=True)
class EmbeddedGraph:
    """A graph embedded in a surface: a cyclic order of outgoing darts at
    each vertex and a sign per edge (-1 marks orientation-reversing
    bands, as needed for non-orientable surfaces)."""

    graph: LabeledGraph
    rotations: Dict[int, Tuple[Dart, ...]]
    signs: Dict[int, int] = field(default_factory=dict)

    def sign(self, eid: int) -> int:
        return self.signs.get(eid, 1)

    def validate(self) -> None:
        g = self.graph
        if set(self.rotations) != set(g.vertices):
            raise GraphFormatError("rotation system must cover every vertex")
        expected: Dict[int, List[Dart]] = {v: [] for v in g.vertices}
        for eid in g.edge_ids():
            e = g.edge(eid)
            expected[e.tail].append((eid, 0))
            expected[e.head].append((eid, 1))
        for v, rot in self.rotations.items():
            if sorted(rot) != sorted(expected[v]):
                raise GraphFormatError(
                    f"rotation at vertex {v} must list its outgoing darts once"
                )
        for eid, s in self.signs.items():
            if s not in (1, -1):
                raise GraphFormatError("edge signs are +1 or -1")
            if eid not in g.edges:
                raise GraphFormatError(f"sign for unknown edge {eid}")


def _dart_ends(graph: LabeledGraph, dart: Dart) -> Tuple[int, int]:
    e = graph.edge(dart[0])
    return (e.tail, e.head) if dart[1] == 0 else (e.head, e.tail)


def trace_embedded_faces(emb: EmbeddedGraph) -> List[List[Dart]]:
    """Face boundary walks of the embedding.  States are (dart, side):
    after arriving along a dart the side flips on negative edges, and the
    next dart is the rotation successor (positive side) or predecessor
    (negative side) of the reversed dart.  Each face and its mirror
    traversal are identified."""
    emb.validate()
    g = emb.graph
    index: Dict[int, Dict[Dart, int]] = {
        v: {d: i for i, d in enumerate(rot)} for v, rot in emb.rotations.items()
    }

    def step(dart: Dart, side: int) -> Tuple[Dart, int]:
        side = side * emb.sign(dart[0])
        _, head = _dart_ends(g, dart)
        rot = emb.rotations[head]
        back = (dart[0], 1 - dart[1])
        k = index[head][back]
        nxt = rot[(k + side) % len(rot)]
        return nxt, side

    orbits: List[List[Tuple[Dart, int]]] = []
    seen = set()
    starts = [((eid, d), s) for eid in sorted(g.edge_ids()) for d in (0, 1) for s in (1, -1)]
    for start in starts:
        if start in seen:
            continue
        orbit = []
        state = start
        while state not in seen:
            seen.add(state)
            orbit.append(state)
            state = step(*state)
        orbits.append(orbit)
    faces: List[List[Dart]] = []
    taken = set()
    for orbit in orbits:
        key = frozenset(orbit)
        mirror = frozenset(((eid, 1 - d), -s) for (eid, d), s in orbit)
        if key in taken or mirror in taken:
            continue
        taken.add(key)
        faces.append([dart for dart, _ in orbit])
    total = sum(len(f) for f in faces)
    if total != 2 * len(g.edge_ids()):
        raise GraphFormatError("face tracing must cover every edge twice")
    return faces


def euler_characteristic(emb: EmbeddedGraph) -> int:
    g = emb.graph
    chi = len(g.vertices) - len(g.edge_ids()) + len(trace_embedded_faces(emb))
    if chi > 2:
        raise GraphFormatError("Euler characteristic above 2")
    return chi


# ---------------------------------------------------------------------------
# homology labeling


def _spanning_forest(graph: LabeledGraph) -> FrozenSet[int]:
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for eid in sorted(graph.edge_ids()):
        e = graph.edge(eid)
        ru, rv = find(e.tail), find(e.head)
        if ru != rv:
            parent[ru] = rv
            tree.add(eid)
    return frozenset(tree)


def homology_labeling(emb: EmbeddedGraph) -> LabeledGraph:
    """Label the embedded graph over H1 + H1 so the value of every closed
    walk is (h, h) with h the walk's homology class: spanning-forest edges
    get 0 and each remaining edge the class of its fundamental cycle.
    Homology is Z^(non-tree edges) modulo the face-boundary relations."""
    g = emb.graph
    tree = _spanning_forest(g)
    cotree = [eid for eid in sorted(g.edge_ids()) if eid not in tree]
    col = {eid: i for i, eid in enumerate(cotree)}
    rows = []
    for face in trace_embedded_faces(emb):
        row = [0] * len(cotree)
        for eid, d in face:
            if eid in col:
                row[col[eid]] += 1 if d == 0 else -1
        rows.append(row)
    h1, proj = groups.quotient_with_projection(rows, len(cotree))
    desc = groups.direct_sum(h1, h1)
    ident = groups.identity(h1)
    edges = []
    for eid in sorted(g.edge_ids()):
        e = g.edge(eid)
        if eid in tree:
            alpha = ident
        else:
            unit = [0] * len(cotree)
            unit[col[eid]] = 1
            alpha = proj(unit)
        edges.append(Edge(eid, e.tail, e.head, groups.element(desc, (alpha, alpha))))
    return LabeledGraph(desc, g.vertices, edges)


# ---------------------------------------------------------------------------
# serialization


def encode_embedded(emb: EmbeddedGraph) -> dict:
    from .graphs import encode_graph

    return {
        "graph": encode_graph(emb.graph),
        "rotations": {str(v): [[eid, d] for eid, d in rot] for v, rot in emb.rotations.items()},
        "signs": {str(eid): s for eid, s in emb.signs.items()},
    }


def decode_embedded(data: dict) -> EmbeddedGraph:
    from .graphs import decode_graph

    emb = EmbeddedGraph(
        graph=decode_graph(data["graph"]),
        rotations={
            int(v): tuple((int(eid), int(d)) for eid, d in rot)
            for v, rot in data["rotations"].items()
        },
        signs={int(eid): int(s) for eid, s in data.get("signs", {}).items()},
    )
    emb.validate()
    return emb
