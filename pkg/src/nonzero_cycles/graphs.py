"""Group-labeled oriented multigraphs.

Edges are oriented (tail -> head) and carry a group label.  The label of
an edge seen from its head is the label itself; seen from its tail it is
the inverse.  Loops and parallel edges are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from . import groups
from .groups import GroupDescriptor, GroupElement


class GraphFormatError(ValueError):
    """Raised for malformed graphs, walks, or serialised payloads."""


class NotGammaBipartiteError(ValueError):
    """Raised when an operation requires every cycle to be zero-valued."""


class Edge(NamedTuple):
    id: int
    tail: int
    head: int
    label: GroupElement


class LabeledGraph:
    """Immutable multigraph with group-labeled oriented edges."""

    __slots__ = ("descriptor", "_vertices", "_edges", "_incident")

    def __init__(
        self,
        descriptor: GroupDescriptor,
        vertices: Iterable[int],
        edges: Iterable[Edge],
    ):
        self.descriptor = descriptor
        self._vertices = frozenset(int(v) for v in vertices)
        edge_map: Dict[int, Edge] = {}
        for e in edges:
            if e.id in edge_map:
                raise GraphFormatError(f"duplicate edge id {e.id}")
            if e.tail not in self._vertices or e.head not in self._vertices:
                raise GraphFormatError(f"edge {e.id} attached to unknown vertex")
            if e.label.descriptor != descriptor:
                raise GraphFormatError(f"edge {e.id} labeled in the wrong group")
            edge_map[e.id] = e
        self._edges = edge_map
        incident: Dict[int, List[int]] = {v: [] for v in self._vertices}
        for e in edge_map.values():
            incident[e.tail].append(e.id)
            if e.head != e.tail:
                incident[e.head].append(e.id)
        self._incident = {v: tuple(sorted(eids)) for v, eids in incident.items()}

    @property
    def vertices(self) -> frozenset:
        return self._vertices

    @property
    def edges(self) -> Dict[int, Edge]:
        return dict(self._edges)

    def edge(self, eid: int) -> Edge:
        try:
            return self._edges[eid]
        except KeyError:
            raise GraphFormatError(f"no edge with id {eid}") from None

    def incident(self, v: int) -> Tuple[int, ...]:
        return self._incident.get(v, ())

    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(sorted(self._edges))

    def other_end(self, eid: int, v: int) -> int:
        e = self.edge(eid)
        if v == e.tail:
            return e.head
        if v == e.head:
            return e.tail
        raise GraphFormatError(f"vertex {v} not an end of edge {eid}")

    def degree(self, v: int) -> int:
        d = 0
        for eid in self.incident(v):
            e = self._edges[eid]
            d += 2 if e.tail == e.head else 1
        return d

    def with_labels(self, labels: Dict[int, GroupElement]) -> "LabeledGraph":
        new_edges = [
            e._replace(label=labels.get(e.id, e.label)) for e in self._edges.values()
        ]
        return LabeledGraph(self.descriptor, self._vertices, new_edges)

    def subgraph(self, edge_ids: Iterable[int], vertices: Iterable[int] = ()) -> "LabeledGraph":
        keep = set(edge_ids)
        edges = [self.edge(eid) for eid in sorted(keep)]
        verts = set(vertices)
        for e in edges:
            verts.add(e.tail)
            verts.add(e.head)
        return LabeledGraph(self.descriptor, verts, edges)

    def without_vertices(self, removed: Iterable[int]) -> "LabeledGraph":
        gone = set(removed)
        edges = [
            e for e in self._edges.values() if e.tail not in gone and e.head not in gone
        ]
        return LabeledGraph(self.descriptor, self._vertices - gone, edges)

    def components(self) -> List[frozenset]:
        seen = set()
        out = []
        for start in sorted(self._vertices):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for eid in self.incident(v):
                    w = self.other_end(eid, v)
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LabeledGraph)
            and self.descriptor == other.descriptor
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self.descriptor, self._vertices, frozenset(self._edges.items())))

    def __repr__(self):
        return f"LabeledGraph(|V|={len(self._vertices)}, |E|={len(self._edges)}, {self.descriptor})"


def null_labeled(descriptor: GroupDescriptor, vertices, arcs: Sequence[Tuple[int, int]]) -> LabeledGraph:
    """Graph with every edge labeled by the identity; arcs are (tail, head)
    pairs and edge ids are assigned consecutively."""
    zero = groups.identity(descriptor)
    edges = [Edge(i, t, h, zero) for i, (t, h) in enumerate(arcs)]
    return LabeledGraph(descriptor, vertices, edges)


# ---------------------------------------------------------------------------
# walks and cycles


@dataclass(frozen=True)
class Walk:
    """Alternating vertex/edge sequence; vertices has one more entry than
    edges and consecutive entries must be joined by the listed edge."""

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise GraphFormatError("walk needs one more vertex than edges")

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def reversed(self) -> "Walk":
        return Walk(tuple(reversed(self.vertices)), tuple(reversed(self.edges)))

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def concat(self, other: "Walk") -> "Walk":
        if self.end != other.start:
            raise GraphFormatError("walks do not share an endpoint")
        return Walk(self.vertices + other.vertices[1:], self.edges + other.edges)

    def is_path(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def validate(self, graph: LabeledGraph) -> None:
        for i, eid in enumerate(self.edges):
            e = graph.edge(eid)
            u, v = self.vertices[i], self.vertices[i + 1]
            if {u, v} != {e.tail, e.head} and not (e.tail == e.head == u == v):
                raise GraphFormatError(f"step {i} of walk does not follow edge {eid}")


@dataclass(frozen=True)
class Cycle(Walk):
    """Closed walk with pairwise-distinct internal vertices and edges."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.edges) == 0:
            raise GraphFormatError("a cycle has at least one edge")
        if self.vertices[0] != self.vertices[-1]:
            raise GraphFormatError("cycle must be closed")
        interior = self.vertices[:-1]
        if len(set(interior)) != len(interior):
            raise GraphFormatError("cycle revisits a vertex")
        if len(set(self.edges)) != len(self.edges):
            raise GraphFormatError("cycle repeats an edge")

    def rooted_at(self, v: int) -> "Cycle":
        interior = self.vertices[:-1]
        if v not in interior:
            raise GraphFormatError(f"vertex {v} not on cycle")
        i = interior.index(v)
        verts = interior[i:] + interior[:i] + (v,)
        edges = self.edges[i:] + self.edges[:i]
        return Cycle(verts, edges)

    def reversed(self) -> "Cycle":
        return Cycle(tuple(reversed(self.vertices)), tuple(reversed(self.edges)))

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices[:-1])


def walk_value(graph: LabeledGraph, walk: Walk) -> GroupElement:
    """Ordered sum of edge labels as seen from each step's arrival vertex."""
    walk.validate(graph)
    total = groups.identity(graph.descriptor)
    for i, eid in enumerate(walk.edges):
        e = graph.edge(eid)
        arrive = walk.vertices[i + 1]
        if e.tail == e.head:
            step = e.label  # loop traversal contributes the label itself
        elif arrive == e.head:
            step = e.label
        else:
            step = groups.inv(e.label)
        total = groups.op(total, step)
    return total


def cycle_from_edges(graph: LabeledGraph, edge_ids: Iterable[int], root: Optional[int] = None) -> Cycle:
    """Reassemble a cycle walk from an edge set (must form a single cycle)."""
    eids = sorted(set(edge_ids))
    if not eids:
        raise GraphFormatError("empty edge set")
    if len(eids) == 1:
        e = graph.edge(eids[0])
        if e.tail != e.head:
            raise GraphFormatError("single non-loop edge is not a cycle")
        return Cycle((e.tail, e.tail), (e.id,))
    adj: Dict[int, List[int]] = {}
    for eid in eids:
        e = graph.edge(eid)
        if e.tail == e.head:
            raise GraphFormatError("loop mixed into a longer cycle")
        adj.setdefault(e.tail, []).append(eid)
        adj.setdefault(e.head, []).append(eid)
    for v, inc in adj.items():
        if len(inc) != 2:
            raise GraphFormatError("edge set is not a single cycle")
    start = root if root is not None else min(adj)
    if start not in adj:
        raise GraphFormatError(f"root {root} not on the cycle")
    verts = [start]
    edges: List[int] = []
    prev_edge = None
    v = start
    while True:
        nxt = [eid for eid in adj[v] if eid != prev_edge]
        eid = min(nxt) if prev_edge is None else nxt[0]
        edges.append(eid)
        v = graph.other_end(eid, v)
        verts.append(v)
        prev_edge = eid
        if v == start:
            break
    if len(edges) != len(eids):
        raise GraphFormatError("edge set is not a single cycle")
    return Cycle(tuple(verts), tuple(edges))


# ---------------------------------------------------------------------------
# shifting


def shift(graph: LabeledGraph, v: int, alpha: GroupElement) -> LabeledGraph:
    """Shift at v by alpha: edges with head v gain alpha on the right, edges
    with tail v gain the inverse of alpha on the left; loops at v get both."""
    if v not in graph.vertices:
        raise GraphFormatError(f"no vertex {v}")
    if alpha.descriptor != graph.descriptor:
        raise GraphFormatError("shift value lives in the wrong group")
    neg = groups.inv(alpha)
    labels: Dict[int, GroupElement] = {}
    for eid in graph.incident(v):
        e = graph.edge(eid)
        lab = e.label
        if e.tail == e.head:
            lab = groups.op(groups.op(neg, lab), alpha)
        elif e.head == v:
            lab = groups.op(lab, alpha)
        else:
            lab = groups.op(neg, lab)
        labels[eid] = lab
    return graph.with_labels(labels)


def shift_sequence(graph: LabeledGraph, shifts: Sequence[Tuple[int, GroupElement]]) -> LabeledGraph:
    for v, alpha in shifts:
        graph = shift(graph, v, alpha)
    return graph


def is_gamma_bipartite(graph: LabeledGraph):
    """Decide whether every cycle has zero value.

    Returns (True, shifts) where applying `shifts` makes every label zero,
    or (False, witness) with a nonzero-valued cycle of the input graph.
    """
    shifts: List[Tuple[int, GroupElement]] = []
    work = graph
    parent: Dict[int, Tuple[int, int]] = {}  # vertex -> (parent vertex, edge id)
    order: List[int] = []
    roots = set()
    seen = set()
    for start in sorted(graph.vertices):
        if start in seen:
            continue
        roots.add(start)
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for eid in sorted(work.incident(v)):
                w = work.other_end(eid, v)
                if w not in seen:
                    seen.add(w)
                    parent[w] = (v, eid)
                    queue.append(w)
    tree_edges = {eid for (_, eid) in parent.values()}
    for v in order:
        if v in roots:
            continue
        _, eid = parent[v]
        lab = work.edge(eid).label
        if groups.is_zero(lab):
            continue
        e = work.edge(eid)
        # choose alpha so the tree edge becomes zero after shifting at v
        alpha = groups.inv(lab) if e.head == v else lab
        shifts.append((v, alpha))
        work = shift(work, v, alpha)
    for eid in work.edge_ids():
        e = work.edge(eid)
        if eid in tree_edges or groups.is_zero(e.label):
            continue
        if e.tail == e.head:
            return False, Cycle((e.tail, e.tail), (eid,))
        # fundamental cycle: tree path head -> tail, closed by the edge
        path_t = _tree_path_to_root(graph, parent, e.tail)
        path_h = _tree_path_to_root(graph, parent, e.head)
        ct = {v: i for i, v in enumerate(path_t)}
        meet = next(v for v in path_h if v in ct)
        up = path_h[: path_h.index(meet) + 1]  # head .. meet
        down = path_t[: ct[meet] + 1]  # tail .. meet
        vseq = list(up) + list(reversed(down[:-1]))  # head .. meet .. tail
        eseq = []
        for i in range(len(vseq) - 1):
            a, b = vseq[i], vseq[i + 1]
            child = a if (a in parent and parent[a][0] == b) else b
            eseq.append(parent[child][1])
        return False, Cycle(tuple(vseq) + (e.head,), tuple(eseq) + (eid,))
    return True, shifts


def _tree_path_to_root(graph, parent, v) -> List[int]:
    path = [v]
    while v in parent:
        v = parent[v][0]
        path.append(v)
    return path


def normalize_to_null(graph: LabeledGraph) -> LabeledGraph:
    """Shift until every edge label is zero; requires all cycles zero."""
    ok, cert = is_gamma_bipartite(graph)
    if not ok:
        raise NotGammaBipartiteError(f"graph has a nonzero cycle through edges {sorted(cert.edges)}")
    out = shift_sequence(graph, cert)
    for e in out.edges.values():
        if not groups.is_zero(e.label):  # pragma: no cover - internal sanity
            raise AssertionError("normalisation left a nonzero label")
    return out


def contract_null_edge(graph: LabeledGraph, eid: int) -> LabeledGraph:
    """Contract a zero-labeled non-loop edge; both ends are replaced by a
    fresh vertex and every other edge keeps its id, orientation and label."""
    e = graph.edge(eid)
    if e.tail == e.head:
        raise GraphFormatError("cannot contract a loop")
    if not groups.is_zero(e.label):
        raise GraphFormatError("only zero-labeled edges may be contracted")
    fresh = max(graph.vertices) + 1
    merged = {e.tail, e.head}
    edges = []
    for other in graph.edges.values():
        if other.id == eid:
            continue
        tail = fresh if other.tail in merged else other.tail
        head = fresh if other.head in merged else other.head
        edges.append(other._replace(tail=tail, head=head))
    vertices = (graph.vertices - merged) | {fresh}
    return LabeledGraph(graph.descriptor, vertices, edges)


# ---------------------------------------------------------------------------
# JSON serialisation


def encode_graph(graph: LabeledGraph) -> dict:
    return {
        "group": groups.format_descriptor(graph.descriptor),
        "vertices": sorted(graph.vertices),
        "edges": [
            {
                "id": e.id,
                "tail": e.tail,
                "head": e.head,
                "label": groups.encode_element(e.label),
            }
            for e in sorted(graph.edges.values())
        ],
    }


def decode_graph(data: dict) -> LabeledGraph:
    try:
        desc = groups.parse_descriptor(data["group"])
        vertices = [int(v) for v in data["vertices"]]
        edges = [
            Edge(
                int(item["id"]),
                int(item["tail"]),
                int(item["head"]),
                groups.decode_element(desc, item["label"]),
            )
            for item in data["edges"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"malformed graph payload: {exc}") from exc
    return LabeledGraph(desc, vertices, edges)
