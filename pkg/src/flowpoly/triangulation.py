"""DKK triangulation: maximal cliques, unimodularity, dual graph, flips.

Maximal simplices of the triangulation are the maximal sets of pairwise
coherent routes.  Two enumeration strategies are provided (pivoting
Bron-Kerbosch on the coherence graph, and breadth-first flip traversal
from a seed clique) so each can certify the other.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from .dag import Dag, EdgeId, Route, flow_dims
from .errors import CliqueExplosionError, NoFlipError, NotSimplexError
from .framing import CoherenceTable

Clique = tuple[int, ...]  # sorted route indices

DEFAULT_MAX_CLIQUES = 10**6


def maximal_cliques(table: CoherenceTable, max_cliques: int = DEFAULT_MAX_CLIQUES) -> list[Clique]:
    """All maximal cliques of the coherence graph, sorted.

    Every maximal clique contains the exceptional routes, so the search
    runs on the non-exceptional part only.
    """
    n = len(table.routes)
    adj = table.adjacency
    exceptional = set(table.exceptional_indices)
    base = tuple(sorted(exceptional))
    p0 = 0
    for i in range(n):
        if i not in exceptional:
            p0 |= 1 << i
    out: list[Clique] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(_mask_to_clique(r))
            if len(out) > max_cliques:
                raise CliqueExplosionError(f"more than {max_cliques} maximal cliques")
            return
        pivot_pool = p | x
        pivot = (pivot_pool & -pivot_pool).bit_length() - 1
        best = pivot
        best_cover = (p & adj[pivot]).bit_count()
        pool = pivot_pool
        while pool:
            v = (pool & -pool).bit_length() - 1
            pool &= pool - 1
            c = (p & adj[v]).bit_count()
            if c > best_cover:
                best, best_cover = v, c
        cand = p & ~adj[best]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    def _mask_to_clique(mask: int) -> Clique:
        members = list(base)
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            members.append(v)
        return tuple(sorted(members))

    expand(0, p0, 0)
    out.sort()
    return out


# -- unimodularity ------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _nontree_edges(g: Dag) -> tuple[EdgeId, ...]:
    """Edges whose values coordinatize the integer-flow lattice.

    Collapsing all sources and sinks to one point turns flows into
    circulations; the fundamental cycles of a spanning forest are a lattice
    basis, and a flow's coordinates in it are its values on non-tree edges.
    """
    star = object()
    node = {v: (v if v in set(g.inner) else star) for v in g.vertices}
    parent: dict = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    tree: set[EdgeId] = set()
    for e in sorted(g.tail):
        a, b = find(node[g.tail[e]]), find(node[g.head[e]])
        if a != b:
            parent[a] = b
            tree.add(e)
    return tuple(e for e in sorted(g.tail) if e not in tree)


def simplex_volume(g: Dag, routes: Sequence[Route]) -> int:
    """Normalized volume of the simplex on the routes' characteristic vectors.

    Computed relative to the lattice of integer flows of equal strength:
    the gcd of the maximal minors of the difference matrix written in
    flow-lattice coordinates.  1 means unimodular, 0 means degenerate.
    """
    coords = _nontree_edges(g)
    pos = {e: i for i, e in enumerate(coords)}
    vecs = []
    for r in routes:
        v = [0] * len(coords)
        for e in r:
            if e in pos:
                v[pos[e]] = 1
        vecs.append(v)
    base = vecs[0]
    mat = [[x - b for x, b in zip(v, base)] for v in vecs[1:]]
    rows = len(mat)
    cols = len(coords)
    if rows > cols:
        return 0
    g_all = 0
    for skip in _skip_sets(cols, cols - rows):
        keep = [j for j in range(cols) if j not in skip]
        minor = [[row[j] for j in keep] for row in mat]
        g_all = _gcd(g_all, abs(_int_det(minor)))
        if g_all == 1:
            return 1
    return g_all


def _skip_sets(n: int, k: int):
    import itertools

    return itertools.combinations(range(n), k)


def _gcd(a: int, b: int) -> int:
    import math

    return math.gcd(a, b)


def _int_det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def verify_unimodular(g: Dag, routes: Sequence[Route]) -> bool:
    """True iff the clique spans a unimodular simplex; NotSimplex if not dim+1."""
    d = flow_dims(g)[1]
    if len(routes) != d + 1:
        raise NotSimplexError(f"clique has {len(routes)} routes, need {d + 1}")
    return simplex_volume(g, routes) == 1


# -- dual graph and flips -------------------------------------------------------


@dataclass
class DualGraph:
    cliques: list[Clique]
    edges: list[tuple[int, int]]  # pairs of clique indices, i < j

    @functools.cached_property
    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.cliques))}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return {k: sorted(v) for k, v in adj.items()}

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])


def dual_graph(cliques: Sequence[Clique]) -> DualGraph:
    """Cliques adjacent when they differ in exactly one route (shared ridge)."""
    ridges: dict[tuple[int, ...], list[int]] = {}
    for idx, c in enumerate(cliques):
        for drop in c:
            ridge = tuple(x for x in c if x != drop)
            ridges.setdefault(ridge, []).append(idx)
    edges = sorted(
        {tuple(sorted(pair)) for pair in ridges.values() if len(pair) == 2}
    )
    for ridge, members in ridges.items():
        if len(members) > 2:
            raise NoFlipError(f"ridge {ridge} lies in {len(members)} maximal cliques")
    return DualGraph(list(cliques), [tuple(p) for p in edges])


def flip(table: CoherenceTable, clique: Clique, route_idx: int) -> tuple[Clique, int]:
    """Exchange a non-exceptional route for the unique alternative.

    Returns the adjacent maximal clique and the incoming route index.
    Computed locally from the coherence graph so flip traversal is an
    independent check on the global enumeration.
    """
    if route_idx in table.exceptional_indices:
        raise NoFlipError("exceptional routes are in every maximal clique")
    if route_idx not in clique:
        raise NoFlipError("route not in clique")
    ridge = [i for i in clique if i != route_idx]
    adj = table.adjacency
    mask = functools.reduce(lambda m, i: m & adj[i], ridge, (1 << len(table.routes)) - 1)
    candidates = set()
    m = mask
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        candidates.add(v)
    # every route coherent with the whole ridge belongs to one of the (at
    # most two) maximal cliques over it, so the candidates beyond the ridge
    # are exactly the outgoing route and its unique replacement
    extra = sorted(candidates - set(ridge))
    if route_idx not in extra:
        raise NoFlipError("clique is not a clique of this coherence table")
    others = [v for v in extra if v != route_idx]
    if len(others) != 1 or (adj[others[0]] >> route_idx) & 1:
        raise NoFlipError(
            f"ridge admits {len(others)} exchanges for route {route_idx}, expected 1"
        )
    new = tuple(sorted(ridge + [others[0]]))
    return new, others[0]


def maximal_cliques_by_flips(table: CoherenceTable) -> list[Clique]:
    """Flip traversal from a greedy seed clique; cross-check for maximal_cliques."""
    n = len(table.routes)
    adj = table.adjacency
    members = list(table.exceptional_indices)
    mask = 0
    for i in members:
        mask |= 1 << i
    for v in range(n):
        if v in members:
            continue
        if all(adj[v] >> i & 1 for i in members):
            members.append(v)
            mask |= 1 << v
    seed = tuple(sorted(members))
    exceptional = set(table.exceptional_indices)
    seen = {seed}
    frontier = [seed]
    while frontier:
        c = frontier.pop()
        for r in c:
            if r in exceptional:
                continue
            other, _ = flip(table, c, r)
            if other not in seen:
                seen.add(other)
                frontier.append(other)
    return sorted(seen)
