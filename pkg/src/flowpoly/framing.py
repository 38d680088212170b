"""Framings of DAGs: path orders, coherence, exceptional routes, ampleness.

A framing is a pair of linear orders (on the in-edges and the out-edges) at
every inner vertex.  It induces a total order on the maximal paths into and
out of each vertex; two routes conflict at a shared inner vertex when those
orders disagree, and the coherence relation this defines drives everything
downstream (cliques, the triangulation, the poset).
"""

from __future__ import annotations

import functools
import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .dag import Dag, EdgeId, Route, VertexId, complete_contraction, enumerate_routes, idle_edges, is_full
from .errors import (
    BadChoicesError,
    ConsistencyError,
    FramingError,
    InconsistentFramingError,
    NotFullError,
    NotThroughVertexError,
    NotValidError,
)


@dataclass
class Framing:
    """Linear orders on the in- and out-edges of each inner vertex."""

    in_order: dict[VertexId, tuple[EdgeId, ...]]
    out_order: dict[VertexId, tuple[EdgeId, ...]]

    def key(self):
        """Hashable canonical form, for set comparisons of framings."""
        return (
            tuple(sorted(self.in_order.items())),
            tuple(sorted(self.out_order.items())),
        )

    def in_rank(self, v: VertexId, e: EdgeId) -> int:
        return self.in_order[v].index(e)

    def out_rank(self, v: VertexId, e: EdgeId) -> int:
        return self.out_order[v].index(e)


def validate_framing(g: Dag, f: Framing) -> None:
    if set(f.in_order) != set(g.inner) or set(f.out_order) != set(g.inner):
        raise FramingError("framing must order exactly the inner vertices")
    for v in g.inner:
        if tuple(sorted(f.in_order[v])) != g.in_edges[v]:
            raise FramingError(f"in_order at {v} is not a permutation of in-edges")
        if tuple(sorted(f.out_order[v])) != g.out_edges[v]:
            raise FramingError(f"out_order at {v} is not a permutation of out-edges")


def framing_by_edge_id(g: Dag) -> Framing:
    """Ascending edge ids at every port.

    With the generator numbering conventions this is the length framing on
    the caracol family and the standard framing on the gkn family.
    """
    return Framing(
        {v: g.in_edges[v] for v in g.inner},
        {v: g.out_edges[v] for v in g.inner},
    )


NAMED_FRAMINGS = ("by-id", "length", "paper-g27")


def named_framing(g: Dag, name: str) -> Framing:
    if name in NAMED_FRAMINGS:
        return framing_by_edge_id(g)
    raise FramingError(f"unknown framing name {name!r}; choose from {NAMED_FRAMINGS}")


def framing_to_json(f: Framing) -> str:
    return json.dumps(
        {
            "in_order": {str(v): list(o) for v, o in sorted(f.in_order.items())},
            "out_order": {str(v): list(o) for v, o in sorted(f.out_order.items())},
        }
    )


def framing_from_json(text: str) -> Framing:
    data = json.loads(text)
    return Framing(
        {int(v): tuple(o) for v, o in data["in_order"].items()},
        {int(v): tuple(o) for v, o in data["out_order"].items()},
    )


# -- path order comparison --------------------------------------------------


def compare_in_paths(g: Dag, f: Framing, p: Sequence[EdgeId], q: Sequence[EdgeId]) -> int:
    """Compare two maximal paths ending at the same vertex (-1, 0, +1).

    Walk backward from the shared endpoint; at the first differing edge the
    two edges enter a common vertex, and the in-order there decides.
    """
    i, j = len(p) - 1, len(q) - 1
    while i >= 0 and j >= 0 and p[i] == q[j]:
        i -= 1
        j -= 1
    if i < 0 and j < 0:
        return 0
    if i < 0 or j < 0:
        raise FramingError("one path is a strict suffix of the other; not maximal")
    w = g.head[p[i]]
    order = f.in_order[w]
    return -1 if order.index(p[i]) < order.index(q[j]) else 1


def compare_out_paths(g: Dag, f: Framing, p: Sequence[EdgeId], q: Sequence[EdgeId]) -> int:
    """Compare two maximal paths starting at the same vertex (-1, 0, +1)."""
    i = 0
    while i < len(p) and i < len(q) and p[i] == q[i]:
        i += 1
    if i == len(p) and i == len(q):
        return 0
    if i == len(p) or i == len(q):
        raise FramingError("one path is a strict prefix of the other; not maximal")
    w = g.tail[p[i]]
    order = f.out_order[w]
    return -1 if order.index(p[i]) < order.index(q[i]) else 1


def compare_paths_at(
    g: Dag, f: Framing, v: VertexId, p: Sequence[EdgeId], q: Sequence[EdgeId], side: str
) -> int:
    """Spec-level comparison of two path fragments at v.

    side='in' expects both paths to end at v, side='out' to start at v.
    """
    if side == "in":
        for path in (p, q):
            if not path or g.head[path[-1]] != v:
                raise NotThroughVertexError(f"path does not end at {v}")
        return compare_in_paths(g, f, p, q)
    if side == "out":
        for path in (p, q):
            if not path or g.tail[path[0]] != v:
                raise NotThroughVertexError(f"path does not start at {v}")
        return compare_out_paths(g, f, p, q)
    raise ValueError("side must be 'in' or 'out'")


# -- coherence ----------------------------------------------------------------


class CoherenceTable:
    """Per-vertex route ranks for fast pairwise coherence tests.

    For each inner vertex the distinct route prefixes ending there (and the
    suffixes starting there) are totally ordered by the framing; a route
    pair conflicts at v exactly when its in-ranks and out-ranks compare in
    opposite directions.
    """

    def __init__(self, g: Dag, f: Framing, routes: Sequence[Route] | None = None):
        validate_framing(g, f)
        self.g = g
        self.f = f
        self.routes: list[Route] = list(routes) if routes is not None else enumerate_routes(g)
        self._build_ranks()

    def _build_ranks(self) -> None:
        g, f = self.g, self.f
        inner = set(g.inner)
        # position of each inner vertex on each route
        self.route_cuts: list[dict[VertexId, int]] = []
        for r in self.routes:
            cuts: dict[VertexId, int] = {}
            v = g.tail[r[0]]
            for idx, e in enumerate(r):
                if v in inner:
                    cuts[v] = idx
                v = g.head[e]
            if v in inner:
                cuts[v] = len(r)
            self.route_cuts.append(cuts)

        by_vertex: dict[VertexId, list[int]] = {}
        for i, cuts in enumerate(self.route_cuts):
            for v in cuts:
                by_vertex.setdefault(v, []).append(i)

        self.in_rank: list[dict[VertexId, int]] = [dict() for _ in self.routes]
        self.out_rank: list[dict[VertexId, int]] = [dict() for _ in self.routes]
        for v, idxs in by_vertex.items():
            prefixes = {}
            suffixes = {}
            for i in idxs:
                cut = self.route_cuts[i][v]
                prefixes.setdefault(self.routes[i][:cut], []).append(i)
                suffixes.setdefault(self.routes[i][cut:], []).append(i)
            in_sorted = sorted(
                prefixes, key=functools.cmp_to_key(lambda a, b: compare_in_paths(g, f, a, b))
            )
            out_sorted = sorted(
                suffixes, key=functools.cmp_to_key(lambda a, b: compare_out_paths(g, f, a, b))
            )
            for rank, p in enumerate(in_sorted):
                for i in prefixes[p]:
                    self.in_rank[i][v] = rank
            for rank, s in enumerate(out_sorted):
                for i in suffixes[s]:
                    self.out_rank[i][v] = rank

    def conflict_vertices(self, i: int, j: int) -> list[VertexId]:
        a, b = self.route_cuts[i], self.route_cuts[j]
        if len(a) > len(b):
            a, b = b, a
        out: list[VertexId] = []
        for v in a:
            if v in b:
                d1 = self.in_rank[i][v] - self.in_rank[j][v]
                d2 = self.out_rank[i][v] - self.out_rank[j][v]
                if d1 * d2 < 0:
                    out.append(v)
        out.sort()
        return out

    def coherent(self, i: int, j: int) -> bool:
        a, b = self.route_cuts[i], self.route_cuts[j]
        small = a if len(a) <= len(b) else b
        other = b if small is a else a
        for v in small:
            if v in other:
                d1 = self.in_rank[i][v] - self.in_rank[j][v]
                d2 = self.out_rank[i][v] - self.out_rank[j][v]
                if d1 * d2 < 0:
                    return False
        return True

    @functools.cached_property
    def adjacency(self) -> list[int]:
        """Coherence graph as bitmasks (bit j set on row i iff coherent)."""
        n = len(self.routes)
        masks = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if self.coherent(i, j):
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
        return masks

    @functools.cached_property
    def exceptional_indices(self) -> tuple[int, ...]:
        n = len(self.routes)
        full = (1 << n) - 1
        return tuple(
            i for i in range(n) if self.adjacency[i] | (1 << i) == full
        )

    def index_of(self, route: Route) -> int:
        return self.routes.index(tuple(route))


def route_conflicts(g: Dag, f: Framing, r: Route, s: Route) -> list[VertexId]:
    """Shared inner vertices where r and s conflict (empty iff coherent)."""
    table = CoherenceTable(g, f, [tuple(r), tuple(s)])
    return table.conflict_vertices(0, 1)


def routes_coherent(g: Dag, f: Framing, r: Route, s: Route) -> bool:
    return not route_conflicts(g, f, r, s)


def exceptional_routes(g: Dag, f: Framing, table: CoherenceTable | None = None) -> list[Route]:
    """Routes coherent with every route; members of every maximal clique."""
    table = table or CoherenceTable(g, f)
    return [table.routes[i] for i in table.exceptional_indices]


def is_ample(g: Dag, f: Framing, table: CoherenceTable | None = None) -> bool:
    """Every non-idle edge lies on at least one exceptional route."""
    table = table or CoherenceTable(g, f)
    covered: set[EdgeId] = set()
    for i in table.exceptional_indices:
        covered.update(table.routes[i])
    non_idle = set(g.tail) - idle_edges(g)
    return non_idle <= covered


# -- edge labeling -------------------------------------------------------------


def edge_labeling(g: Dag, f: Framing, require_full: bool = True) -> dict[EdgeId, int]:
    """Label each edge 1 (minimal at both ports) or 2 (maximal at both).

    Defined for ample framings on full DAGs; an edge that is minimal on one
    side and maximal on the other makes the framing inconsistent.  Edges
    with no framed port (source to sink) get label 1 by convention.
    """
    if require_full and not is_full(g):
        raise NotFullError("edge labeling needs a full DAG")
    validate_framing(g, f)
    labels: dict[EdgeId, int] = {}
    for e, t, h in g.edges:
        tail_label = None
        head_label = None
        if t in f.out_order and len(f.out_order[t]) > 1:
            tail_label = 1 if f.out_order[t][0] == e else 2
        elif t in f.out_order:
            tail_label = None  # single out-edge carries no information
        if h in f.in_order and len(f.in_order[h]) > 1:
            head_label = 1 if f.in_order[h][0] == e else 2
        elif h in f.in_order:
            head_label = None
        if tail_label is not None and head_label is not None and tail_label != head_label:
            raise InconsistentFramingError(
                f"edge {e} is rank {tail_label} at its tail but {head_label} at its head"
            )
        labels[e] = tail_label or head_label or 1
    return labels


def route_weight(g: Dag, labels: Mapping[EdgeId, int], route: Route) -> tuple[int, ...]:
    return tuple(labels[e] for e in route)


# -- exceptional set checking (adjacency graph) ---------------------------------


@dataclass
class AdjacencyGraph:
    """Routes of X joined when they share a full inner vertex."""

    routes: list[Route]
    edges: list[tuple[int, int]]

    def is_bipartite(self) -> tuple[bool, dict[int, int] | None]:
        color: dict[int, int] = {}
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.routes))}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for start in range(len(self.routes)):
            if start in color:
                continue
            color[start] = 0
            queue = [start]
            while queue:
                x = queue.pop()
                for y in adj[x]:
                    if y not in color:
                        color[y] = 1 - color[x]
                        queue.append(y)
                    elif color[y] == color[x]:
                        return False, None
        return True, color


def adjacency_graph(g: Dag, routes: Sequence[Route]) -> AdjacencyGraph:
    full_vertices = {
        v for v in g.inner if len(g.in_edges[v]) == 2 and len(g.out_edges[v]) == 2
    }
    verts = [set(g.route_vertices(r)) & full_vertices for r in routes]
    edges = [
        (i, j)
        for i in range(len(routes))
        for j in range(i + 1, len(routes))
        if verts[i] & verts[j]
    ]
    return AdjacencyGraph(list(map(tuple, routes)), edges)


@dataclass
class ExceptionalSetCheck:
    ok: bool
    reason: str | None
    framing: Framing | None
    adjacency: AdjacencyGraph


def check_exceptional_set(g: Dag, x: Sequence[Route]) -> ExceptionalSetCheck:
    """Decide whether x is the exceptional set of some ample framing.

    Needs every edge covered by exactly one route of x and a bipartite
    adjacency graph; on success one witnessing framing is constructed by
    ordering each port according to the two-coloring.
    """
    if not is_full(g):
        raise NotFullError("exceptional sets are classified on full DAGs")
    x = [tuple(r) for r in x]
    adj = adjacency_graph(g, x)
    hits: dict[EdgeId, list[int]] = {e: [] for e in g.tail}
    for i, r in enumerate(x):
        for e in r:
            hits[e].append(i)
    doubled = sorted(e for e, rs in hits.items() if len(rs) > 1)
    missing = sorted(e for e, rs in hits.items() if not rs)
    bip, color = adj.is_bipartite()
    reasons = []
    if missing:
        reasons.append(f"uncovered edges {missing}")
    if doubled:
        reasons.append(f"doubly covered edges {doubled}")
    if not bip:
        reasons.append("adjacency graph has an odd cycle")
    if reasons:
        return ExceptionalSetCheck(False, "; ".join(reasons), None, adj)
    assert color is not None
    cover = {e: rs[0] for e, rs in hits.items()}
    in_order: dict[VertexId, tuple[EdgeId, ...]] = {}
    out_order: dict[VertexId, tuple[EdgeId, ...]] = {}
    for v in g.inner:
        ins = sorted(g.in_edges[v], key=lambda e: (color[cover[e]], e))
        outs = sorted(g.out_edges[v], key=lambda e: (color[cover[e]], e))
        in_order[v] = tuple(ins)
        out_order[v] = tuple(outs)
    return ExceptionalSetCheck(True, None, Framing(in_order, out_order), adj)


# -- path/cycle decomposition ----------------------------------------------------


@dataclass
class Component:
    """Edge-disjoint alternating walk: vertices v0..vk, edges e1..ek."""

    vertices: tuple[VertexId, ...]
    edges: tuple[EdgeId, ...]
    kind: str  # 'cycle' | 'path' | 'source-sink edge'

    def walk(self) -> tuple:
        out: list = [self.vertices[0]]
        for v, e in zip(self.vertices[1:], self.edges):
            out.append(e)
            out.append(v)
        return tuple(out)


@dataclass
class Decomposition:
    components: list[Component]
    m: int  # components containing at least one inner vertex


class _Walk:
    __slots__ = ("vertices", "edges", "closed", "dead")

    def __init__(self, vertices, edges):
        self.vertices = list(vertices)
        self.edges = list(edges)
        self.closed = False
        self.dead = False

    def orient_end_last(self, x) -> None:
        if self.vertices[-1] != x:
            self.vertices.reverse()
            self.edges.reverse()
        assert self.vertices[-1] == x

    def orient_end_first(self, x) -> None:
        if self.vertices[0] != x:
            self.vertices.reverse()
            self.edges.reverse()
        assert self.vertices[0] == x


def path_cycle_decomposition(g: Dag) -> Decomposition:
    """Edge-disjoint alternating paths and cycles of a full DAG.

    Processes inner vertices in topological order; the length-two walk
    through the in-edges of each vertex is glued to the existing walk at
    any inner endpoint whose other out-edge was already consumed.  Edges
    into sinks extend walks (or pair up) at the end.  Alternating 1/2
    labelings of the resulting components are exactly the ample framings.
    """
    if not is_full(g):
        raise NotFullError("decomposition is defined for full DAGs")
    walks: list[_Walk] = []
    # open end registry: inner vertex x -> walk index whose end edge leaves x.
    # A full vertex has two out-edges, so at most one end is ever open at x.
    ends: dict[VertexId, int] = {}
    sinks = set(g.sinks)
    inner = set(g.inner)

    def glue(cur: int, x: VertexId) -> int:
        """Join the open end at x (if any) with walk cur's end at x."""
        if x not in ends:
            ends[x] = cur
            return cur
        oid = ends.pop(x)
        if oid == cur:
            walks[cur].closed = True  # both ends met: an alternating cycle
            return cur
        w, o = walks[cur], walks[oid]
        w.orient_end_last(x)
        o.orient_end_first(x)
        w.vertices.extend(o.vertices[1:])
        w.edges.extend(o.edges)
        o.dead = True
        for y, idx in list(ends.items()):
            if idx == oid:
                ends[y] = cur
        return cur

    for v in g.topological_order:
        if v not in inner:
            continue
        e1, e2 = g.in_edges[v]
        a, b = g.tail[e1], g.tail[e2]
        cur = len(walks)
        walks.append(_Walk([a, v, b], [e1, e2]))
        if a in inner:
            cur = glue(cur, a)
        if b in inner and not walks[cur].closed:
            cur = glue(cur, b)

    # edges into sinks were never consumed as in-edges; extend or pair them
    for e in sorted(e for e, _, h in g.edges if h in sinks):
        x, t = g.tail[e], g.head[e]
        if x not in inner:
            walks.append(_Walk([x, t], [e]))  # source -> sink edge
        elif x in ends:
            w = walks[ends.pop(x)]
            w.orient_end_last(x)
            w.vertices.append(t)
            w.edges.append(e)
        else:
            ends[x] = len(walks)
            walks.append(_Walk([t, x], [e]))

    components: list[Component] = []
    for w in walks:
        if w.dead:
            continue
        if w.closed:
            kind = "cycle"  # closed walks already repeat their endpoint
        elif len(w.edges) == 1 and w.vertices[0] not in inner and w.vertices[-1] not in inner:
            kind = "source-sink edge"
        else:
            kind = "path"
        components.append(Component(tuple(w.vertices), tuple(w.edges), kind))
    components.sort(key=lambda c: min(c.edges))
    m = sum(1 for c in components if any(v in inner for v in c.vertices))
    seen = [e for c in components for e in c.edges]
    assert len(seen) == len(g.edges) and len(set(seen)) == len(seen)
    return Decomposition(components, m)


# -- counting and enumerating ample framings -------------------------------------


@dataclass
class IdleReachability:
    source_reachable: frozenset[EdgeId]
    sink_reachable: frozenset[EdgeId]
    v1: frozenset[VertexId]  # non-source endpoints of source-reachable idle edges
    v2: frozenset[VertexId]  # non-sink endpoints of sink-reachable idle edges


def idle_reachability(g: Dag) -> IdleReachability:
    """Classify idle edges by directed idle-edge paths from sources / to sinks."""
    idle = idle_edges(g)
    sources = set(g.sources)
    sinks = set(g.sinks)
    src_reach: set[EdgeId] = set()
    frontier = {e for e in idle if g.tail[e] in sources}
    while frontier:
        src_reach |= frontier
        heads = {g.head[e] for e in frontier}
        frontier = {
            e for e in idle - src_reach if g.tail[e] in heads
        }
    snk_reach: set[EdgeId] = set()
    frontier = {e for e in idle if g.head[e] in sinks}
    while frontier:
        snk_reach |= frontier
        tails = {g.tail[e] for e in frontier}
        frontier = {
            e for e in idle - snk_reach if g.head[e] in tails
        }
    v1 = {v for e in src_reach for v in (g.tail[e], g.head[e]) if v not in sources}
    v2 = {v for e in snk_reach for v in (g.tail[e], g.head[e]) if v not in sinks}
    return IdleReachability(
        frozenset(src_reach), frozenset(snk_reach), frozenset(v1), frozenset(v2)
    )


def _check_idle_forest(g: Dag, reach: IdleReachability) -> None:
    """The counting formula needs the idle edges to form a forest whose
    source-side vertices have a single in-edge (dually for the sink side).

    Vertex splits at sinks or sources can produce valid DAGs that break
    this (a previously non-idle parallel edge turns idle, closing a cycle);
    on those the product formula overcounts, so fail loudly instead.
    """
    idle = idle_edges(g)
    parent: dict[VertexId, VertexId] = {v: v for v in g.vertices}

    def find(x: VertexId) -> VertexId:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in sorted(idle):
        a, b = find(g.tail[e]), find(g.head[e])
        if a == b:
            raise ConsistencyError(
                "idle-forest-structure", f"idle edges contain a cycle through edge {e}"
            )
        parent[a] = b
    # the |out(v)|! factor at a source-side vertex is only free when all
    # in-paths through v coincide, i.e. the chain from v back to a source
    # is forced (in-degree one throughout); dually on the sink side
    sources, sinks = set(g.sources), set(g.sinks)
    for v in reach.v1:
        if len(g.out_edges[v]) < 2:
            continue
        x = v
        while x not in sources:
            if len(g.in_edges[x]) != 1:
                raise ConsistencyError(
                    "idle-forest-structure",
                    f"source-side idle chain through {v} branches at {x}",
                )
            x = g.tail[g.in_edges[x][0]]
    for v in reach.v2:
        if len(g.in_edges[v]) < 2:
            continue
        x = v
        while x not in sinks:
            if len(g.out_edges[x]) != 1:
                raise ConsistencyError(
                    "idle-forest-structure",
                    f"sink-side idle chain through {v} branches at {x}",
                )
            x = g.head[g.out_edges[x][0]]


def count_ample_framings(g: Dag) -> int:
    """2^M for a full DAG; for a valid DAG, times the free port orders."""
    trace = complete_contraction(g)
    if not is_full(trace.result):
        raise NotValidError("graph has no full contraction")
    m = path_cycle_decomposition(trace.result).m
    reach = idle_reachability(g)
    _check_idle_forest(g, reach)
    count = 1 << m
    for v in reach.v1:
        count *= math.factorial(len(g.out_edges[v]))
    for v in reach.v2:
        count *= math.factorial(len(g.in_edges[v]))
    return count


def framing_from_labels(g: Dag, labels: Mapping[EdgeId, int]) -> Framing:
    """Order every port by its {1,2} edge labels (label 1 first)."""
    in_order = {}
    out_order = {}
    for v in g.inner:
        in_order[v] = tuple(sorted(g.in_edges[v], key=lambda e: (labels[e], e)))
        out_order[v] = tuple(sorted(g.out_edges[v], key=lambda e: (labels[e], e)))
    return Framing(in_order, out_order)


@dataclass
class TaggedFraming:
    """One ample framing from the alternating-labeling enumeration.

    Global 1<->2 label swaps give the same triangulation, so each framing
    records the index of its swap partner; `canonical` marks the chosen
    representative of each swap pair (the component holding the smallest
    edge id is labeled 1 at that edge).
    """

    framing: Framing
    labels: dict[EdgeId, int]
    index: int
    swap_partner: int
    canonical: bool


def enumerate_ample_framings(g: Dag) -> Iterator[TaggedFraming]:
    """All 2^M ample framings of a full DAG via alternating labelings."""
    if not is_full(g):
        raise NotFullError("enumeration needs a full DAG")
    decomp = path_cycle_decomposition(g)
    inner = set(g.inner)
    live = [c for c in decomp.components if any(v in inner for v in c.vertices)]
    live.sort(key=lambda c: min(c.edges))
    rest = [c for c in decomp.components if not any(v in inner for v in c.vertices)]
    m = len(live)
    for index in range(1 << m):
        labels: dict[EdgeId, int] = {}
        for c in rest:
            for e in c.edges:
                labels[e] = 1
        for bit, comp in enumerate(live):
            lead = 1 if (index >> bit) & 1 == 0 else 2
            anchor = min(comp.edges)
            pos = {e: i for i, e in enumerate(comp.edges)}
            for e in comp.edges:
                same_parity = (pos[e] - pos[anchor]) % 2 == 0
                labels[e] = lead if same_parity else 3 - lead
        framing = framing_from_labels(g, labels)
        yield TaggedFraming(
            framing=framing,
            labels=labels,
            index=index,
            swap_partner=((1 << m) - 1) ^ index,
            canonical=(index & 1) == 0 if m else True,
        )


def all_framings(g: Dag) -> Iterator[Framing]:
    """Brute force over every framing of g (for small graphs only)."""
    ports: list[tuple[str, VertexId, tuple[EdgeId, ...]]] = []
    for v in g.inner:
        ports.append(("in", v, g.in_edges[v]))
        ports.append(("out", v, g.out_edges[v]))
    perms = [list(itertools.permutations(edges)) for _, _, edges in ports]
    for combo in itertools.product(*perms):
        in_order = {}
        out_order = {}
        for (side, v, _), order in zip(ports, combo):
            if side == "in":
                in_order[v] = order
            else:
                out_order[v] = order
        yield Framing(in_order, out_order)


# -- lifting framings from the full contraction to a valid DAG -------------------


def _pullback_rank(g: Dag, labels_h: Mapping[EdgeId, int], contracted: frozenset[EdgeId], e: EdgeId) -> set[int]:
    """Labels of the contraction edges feeding e through contracted edges."""
    if e not in contracted:
        return {labels_h[e]}
    out: set[int] = set()
    for d in g.in_edges[g.tail[e]]:
        out |= _pullback_rank(g, labels_h, contracted, d)
    return out


def _pullforward_rank(g: Dag, labels_h: Mapping[EdgeId, int], contracted: frozenset[EdgeId], e: EdgeId) -> set[int]:
    if e not in contracted:
        return {labels_h[e]}
    out: set[int] = set()
    for d in g.out_edges[g.head[e]]:
        out |= _pullforward_rank(g, labels_h, contracted, d)
    return out


def lift_framing(
    g: Dag,
    f_full: Framing,
    choices: Mapping[VertexId, Mapping[str, Sequence[EdgeId]]] | None = None,
    check: bool = True,
) -> Framing:
    """Extend an ample framing of the full contraction to the valid DAG g.

    Ports whose order is forced by the contraction labels are filled in;
    the free ports (out-orders at non-source endpoints of source-reachable
    idle edges, in-orders at the sink-side mirror) take their order from
    `choices`, defaulting to ascending edge ids.
    """
    trace = complete_contraction(g)
    h = trace.result
    if not is_full(h):
        raise NotValidError("graph has no full contraction")
    validate_framing(h, f_full)
    labels_h = edge_labeling(h, f_full)
    contracted = trace.contracted_edges
    reach = idle_reachability(g)
    choices = choices or {}

    def choose(v: VertexId, side: str, edges: tuple[EdgeId, ...]) -> tuple[EdgeId, ...]:
        if v in choices and side in choices[v]:
            order = tuple(choices[v][side])
            if tuple(sorted(order)) != edges:
                raise BadChoicesError(f"{side}-order at {v} must permute {edges}")
            return order
        return edges

    in_order: dict[VertexId, tuple[EdgeId, ...]] = {}
    out_order: dict[VertexId, tuple[EdgeId, ...]] = {}
    for v in g.inner:
        for side, port in (("in", g.in_edges[v]), ("out", g.out_edges[v])):
            free = (side == "out" and v in reach.v1) or (side == "in" and v in reach.v2)
            if len(port) == 1:
                chosen = port
            elif free:
                chosen = choose(v, side, port)
            else:
                pull = _pullback_rank if side == "in" else _pullforward_rank
                sigs = {e: pull(g, labels_h, contracted, e) for e in port}
                if any(len(s) != 1 for s in sigs.values()) or len(
                    {min(s) for s in sigs.values()}
                ) != len(port):
                    raise BadChoicesError(
                        f"{side}-order at {v} is not determined by the contraction"
                    )
                chosen = tuple(sorted(port, key=lambda e: min(sigs[e])))
            if side == "in":
                in_order[v] = chosen
            else:
                out_order[v] = chosen
    f = Framing(in_order, out_order)
    if check:
        table = CoherenceTable(g, f)
        exc = [table.routes[i] for i in table.exceptional_indices]
        exc_h = {tuple(r) for r in exceptional_routes(h, f_full)}
        projected = {trace.project_route(r) for r in exc}
        if projected != exc_h or len(exc) != len(exc_h):
            raise BadChoicesError("lift does not preserve the exceptional routes")
    return f


def enumerate_ample_framings_valid(g: Dag) -> Iterator[Framing]:
    """All ample framings of a valid DAG: contraction framings times lifts."""
    trace = complete_contraction(g)
    h = trace.result
    if not is_full(h):
        raise NotValidError("graph has no full contraction")
    reach = idle_reachability(g)
    _check_idle_forest(g, reach)
    free_ports: list[tuple[VertexId, str, tuple[EdgeId, ...]]] = []
    for v in sorted(reach.v1):
        if v in set(g.inner) and len(g.out_edges[v]) > 1:
            free_ports.append((v, "out", g.out_edges[v]))
    for v in sorted(reach.v2):
        if v in set(g.inner) and len(g.in_edges[v]) > 1:
            free_ports.append((v, "in", g.in_edges[v]))
    port_perms = [list(itertools.permutations(p)) for _, _, p in free_ports]
    for tagged in enumerate_ample_framings(h):
        for combo in itertools.product(*port_perms) if port_perms else [()]:
            choices: dict[VertexId, dict[str, Sequence[EdgeId]]] = {}
            for (v, side, _), order in zip(free_ports, combo):
                choices.setdefault(v, {})[side] = order
            yield lift_framing(g, tagged.framing, choices, check=False)
