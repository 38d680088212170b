"""The tau-tilting order on the dual graph of the triangulation.

Each dual edge joins cliques exchanging one route pair; the unique common
component of the two routes entered on a weight-2 edge and exited on a
weight-1 edge (by the upper route) orients the edge and becomes its brick
label.  Down-cover statistics of the resulting poset give the h*-vector.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dag import Dag, EdgeId, Route, VertexId
from .errors import (
    AmbiguousKappaImageError,
    ConsistencyError,
    CycleDetectedError,
    MultipleQualifyingComponentsError,
    NoKappaImageError,
    NoQualifyingComponentError,
    NotLinearExtensionError,
)
from .framing import CoherenceTable, Framing, edge_labeling
from .triangulation import Clique, DualGraph, dual_graph, maximal_cliques

# A brick is a walk in the base DAG: (v0, e1, v1, ..., ek, vk), possibly a
# single vertex (v0,).
Brick = tuple[int, ...]


def common_components(g: Dag, r1: Route, r2: Route) -> list[Brick]:
    """Connected components of the intersection of two routes, as walks."""
    verts1 = g.route_vertices(r1)
    verts2 = set(g.route_vertices(r2))
    edges2 = set(r2)
    comps: list[list[int]] = []
    cur: list[int] | None = None
    for i, v in enumerate(verts1):
        if v not in verts2:
            cur = None
            continue
        if cur is not None and i > 0 and r1[i - 1] in edges2:
            cur.append(r1[i - 1])
            cur.append(v)
        else:
            cur = [v]
            comps.append(cur)
    return [tuple(c) for c in comps]


def orient_dual_edge(
    g: Dag, labels: Mapping[EdgeId, int], r1: Route, r2: Route
) -> tuple[int, Brick]:
    """Decide which of the exchanged routes sits above the other.

    Returns (+1, w) when the clique containing r1 covers the one with r2,
    (-1, w) for the opposite, where w is the qualifying component: r-upper
    enters w on a weight-2 edge and leaves on a weight-1 edge while the
    lower route does the reverse.
    """
    hits: list[tuple[int, Brick]] = []
    for w in common_components(g, r1, r2):
        first, last = w[0], w[-1]
        ent1 = _edge_into(g, r1, first)
        ext1 = _edge_out_of(g, r1, last)
        ent2 = _edge_into(g, r2, first)
        ext2 = _edge_out_of(g, r2, last)
        if None in (ent1, ext1, ent2, ext2):
            continue
        pat1 = (labels[ent1], labels[ext1])
        pat2 = (labels[ent2], labels[ext2])
        if pat1 == (2, 1) and pat2 == (1, 2):
            hits.append((1, w))
        elif pat1 == (1, 2) and pat2 == (2, 1):
            hits.append((-1, w))
    if not hits:
        raise NoQualifyingComponentError(f"no qualifying component for {r1} vs {r2}")
    if len(hits) > 1:
        raise MultipleQualifyingComponentsError(
            f"{len(hits)} qualifying components for {r1} vs {r2}"
        )
    return hits[0]


def _edge_into(g: Dag, r: Route, v: VertexId) -> EdgeId | None:
    for e in r:
        if g.head[e] == v:
            return e
    return None


def _edge_out_of(g: Dag, r: Route, v: VertexId) -> EdgeId | None:
    for e in r:
        if g.tail[e] == v:
            return e
    return None


@dataclass
class TauPoset:
    """Oriented dual graph with brick labels; nodes are clique indices."""

    cliques: list[Clique]
    routes: list[Route]
    hasse: list[tuple[int, int, Brick]]  # (lower, upper, brick)
    dual: DualGraph

    @functools.cached_property
    def down(self) -> dict[int, list[tuple[int, Brick]]]:
        d: dict[int, list[tuple[int, Brick]]] = {i: [] for i in range(len(self.cliques))}
        for lo, hi, w in self.hasse:
            d[hi].append((lo, w))
        return d

    @functools.cached_property
    def up(self) -> dict[int, list[tuple[int, Brick]]]:
        d: dict[int, list[tuple[int, Brick]]] = {i: [] for i in range(len(self.cliques))}
        for lo, hi, w in self.hasse:
            d[lo].append((hi, w))
        return d

    def dcov(self, node: int) -> int:
        return len(self.down[node])

    def ucov(self, node: int) -> int:
        return len(self.up[node])

    def dcov_polynomial(self) -> list[int]:
        """Coefficient i counts nodes covering exactly i elements."""
        top = max((self.dcov(i) for i in range(len(self.cliques))), default=0)
        coeffs = [0] * (top + 1)
        for i in range(len(self.cliques)):
            coeffs[self.dcov(i)] += 1
        return coeffs

    @functools.cached_property
    def heights(self) -> list[int]:
        h = [0] * len(self.cliques)
        for node in self.topological_nodes:
            for lo, _ in self.down[node]:
                h[node] = max(h[node], h[lo] + 1)
        return h

    @functools.cached_property
    def topological_nodes(self) -> list[int]:
        indeg = {i: self.dcov(i) for i in range(len(self.cliques))}
        ready = sorted(i for i, d in indeg.items() if d == 0)
        import heapq

        heapq.heapify(ready)
        order = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for hi, _ in self.up[v]:
                indeg[hi] -= 1
                if indeg[hi] == 0:
                    heapq.heappush(ready, hi)
        if len(order) != len(self.cliques):
            raise CycleDetectedError("oriented dual graph is not acyclic")
        return order

    def default_linear_extension(self) -> list[int]:
        return sorted(range(len(self.cliques)), key=lambda i: (self.heights[i], i))

    def random_linear_extensions(self, count: int, seed: int) -> list[list[int]]:
        rng = random.Random(seed)
        outs = []
        for _ in range(count):
            indeg = {i: self.dcov(i) for i in range(len(self.cliques))}
            ready = [i for i, d in indeg.items() if d == 0]
            order: list[int] = []
            while ready:
                v = ready.pop(rng.randrange(len(ready)))
                order.append(v)
                for hi, _ in self.up[v]:
                    indeg[hi] -= 1
                    if indeg[hi] == 0:
                        ready.append(hi)
            outs.append(order)
        return outs

    def check_linear_extension(self, ext: Sequence[int]) -> None:
        if sorted(ext) != list(range(len(self.cliques))):
            raise NotLinearExtensionError("not a permutation of the nodes")
        pos = {v: i for i, v in enumerate(ext)}
        for lo, hi, _ in self.hasse:
            if pos[lo] > pos[hi]:
                raise NotLinearExtensionError(f"{lo} must precede {hi}")

    def h_from_shelling(self, ext: Sequence[int]) -> list[int]:
        """Restriction sizes along a shelling order: |R_j| counts the
        facet's neighbors appearing earlier."""
        self.check_linear_extension(ext)
        pos = {v: i for i, v in enumerate(ext)}
        top = 0
        sizes = []
        for j in ext:
            r = sum(1 for nb in self.dual.neighbors[j] if pos[nb] < pos[j])
            sizes.append(r)
            top = max(top, r)
        coeffs = [0] * (top + 1)
        for r in sizes:
            coeffs[r] += 1
        return coeffs

    @functools.cached_property
    def kappa(self) -> dict[int, int]:
        """Node whose up-brick multiset equals the argument's down-brick multiset."""
        up_index: dict[tuple[Brick, ...], list[int]] = {}
        for i in range(len(self.cliques)):
            key = tuple(sorted(w for _, w in self.up[i]))
            up_index.setdefault(key, []).append(i)
        for key, nodes in up_index.items():
            if len(nodes) > 1:
                raise ConsistencyError(
                    "up-bricks-determine-node",
                    f"nodes {nodes} share up-brick multiset",
                )
        out: dict[int, int] = {}
        for i in range(len(self.cliques)):
            key = tuple(sorted(w for _, w in self.down[i]))
            hit = up_index.get(key)
            if not hit:
                raise NoKappaImageError(f"node {i} has no kappa image")
            if len(hit) > 1:
                raise AmbiguousKappaImageError(f"node {i} has several kappa images")
            out[i] = hit[0]
        if len(set(out.values())) != len(out):
            raise ConsistencyError("kappa-bijective", "kappa is not injective")
        return out

    def covers(self, lo: int, hi: int) -> bool:
        return any(l == lo for l, _ in self.down[hi])


def build_poset(
    g: Dag,
    f: Framing,
    table: CoherenceTable | None = None,
    cliques: list[Clique] | None = None,
) -> TauPoset:
    """Orient every dual edge and assert the result is its own Hasse diagram."""
    table = table or CoherenceTable(g, f)
    cliques = cliques if cliques is not None else maximal_cliques(table)
    labels = edge_labeling(g, f)
    dg = dual_graph(cliques)
    hasse: list[tuple[int, int, Brick]] = []
    for a, b in dg.edges:
        ca, cb = set(cliques[a]), set(cliques[b])
        (ra,) = ca - cb
        (rb,) = cb - ca
        sign, brick = orient_dual_edge(g, labels, table.routes[ra], table.routes[rb])
        if sign > 0:
            hasse.append((b, a, brick))
        else:
            hasse.append((a, b, brick))
    poset = TauPoset(list(cliques), list(table.routes), hasse, dg)
    poset.topological_nodes  # acyclicity check
    _assert_transitively_reduced(poset)
    return poset


def _assert_transitively_reduced(p: TauPoset) -> None:
    """No oriented dual edge may be implied by a longer chain."""
    up_sets = {i: {hi for hi, _ in p.up[i]} for i in range(len(p.cliques))}
    # strictly-above closure, computed in reverse topological order
    above: dict[int, set[int]] = {i: set() for i in range(len(p.cliques))}
    for node in reversed(p.topological_nodes):
        acc: set[int] = set()
        for hi in up_sets[node]:
            acc |= {hi}
            acc |= above[hi]
        above[node] = acc
    for lo, hi, _ in p.hasse:
        for mid in up_sets[lo] - {hi}:
            if hi in above[mid]:
                raise ConsistencyError(
                    "oriented-dual-edges-are-covers",
                    f"edge {lo}<{hi} implied through {mid}",
                )


def is_order_reversing_automorphism(p: TauPoset, perm: Mapping[int, int]) -> bool:
    """Does the node permutation send every cover (lo, hi) to (perm hi, perm lo)?"""
    covers = {(lo, hi) for lo, hi, _ in p.hasse}
    return all((perm[hi], perm[lo]) in covers for lo, hi in covers)
