import random

import pytest

from flowpoly.errors import NotSimplexError
from flowpoly.framing import CoherenceTable, enumerate_ample_framings, framing_by_edge_id
from flowpoly.generators import random_full_dag
from flowpoly.triangulation import (
    dual_graph,
    flip,
    maximal_cliques,
    maximal_cliques_by_flips,
    simplex_volume,
    verify_unimodular,
)

from test_framing import CORE8_BIG_CLIQUE


def test_g27_clique_count(g27t):
    cliques = maximal_cliques(g27t)
    assert len(cliques) == 16
    exc = set(g27t.exceptional_indices)
    assert all(exc <= set(c) for c in cliques)
    assert all(len(c) == 6 for c in cliques)  # dim + 1


def test_single_route_clique(single_edge):
    t = CoherenceTable(single_edge, framing_by_edge_id(single_edge))
    assert maximal_cliques(t) == [(0,)]


def test_core8_big_clique_present(core8t):
    cliques = maximal_cliques(core8t)
    assert len(set(CORE8_BIG_CLIQUE)) == 9
    want = frozenset(core8t.index_of(r) for r in CORE8_BIG_CLIQUE)
    assert any(frozenset(c) == want for c in cliques)


def test_unimodular_g27(g27h, g27t):
    for c in maximal_cliques(g27t):
        assert verify_unimodular(g27h, [g27t.routes[i] for i in c])


def test_unimodular_core8(core8, core8t):
    for c in maximal_cliques(core8t):
        assert verify_unimodular(core8, [core8t.routes[i] for i in c])


def test_unimodular_rejects_bad_cliques(g27h, g27t):
    cliques = maximal_cliques(g27t)
    routes = [g27t.routes[i] for i in cliques[0]]
    with pytest.raises(NotSimplexError):
        verify_unimodular(g27h, routes[:-1])
    # repeating a vertex degenerates the simplex
    degenerate = routes[:-1] + [routes[0]]
    assert simplex_volume(g27h, degenerate) == 0


def test_dual_graph_g27(g27t):
    cliques = maximal_cliques(g27t)
    dg = dual_graph(cliques)
    assert len(dg.edges) == 24
    assert all(dg.degree(i) == 3 for i in range(16))


def test_dual_graph_core8(core8t):
    cliques = maximal_cliques(core8t)
    dg = dual_graph(cliques)
    assert all(dg.degree(i) == 4 for i in range(len(cliques)))


def test_dual_graph_single_clique(single_edge):
    t = CoherenceTable(single_edge, framing_by_edge_id(single_edge))
    dg = dual_graph(maximal_cliques(t))
    assert dg.edges == []


def test_flip_involution_and_count(g27t):
    cliques = maximal_cliques(g27t)
    exc = set(g27t.exceptional_indices)
    dg = dual_graph(cliques)
    for ci, c in enumerate(cliques):
        flippable = [r for r in c if r not in exc]
        assert len(flippable) == 3  # number of inner vertices
        for r in flippable:
            other, incoming = flip(g27t, c, r)
            assert other in cliques
            back, out_again = flip(g27t, other, incoming)
            assert back == c and out_again == r
            assert cliques.index(other) in dg.neighbors[ci]


def test_flip_exchanges_unique_route(g27t):
    cliques = maximal_cliques(g27t)
    exc = set(g27t.exceptional_indices)
    c = cliques[0]
    r = next(i for i in c if i not in exc)
    other, s = flip(g27t, c, r)
    assert set(c) - set(other) == {r}
    assert set(other) - set(c) == {s}
    assert not g27t.coherent(r, s)


def test_flip_traversal_matches(g27t, core8t):
    assert maximal_cliques_by_flips(g27t) == maximal_cliques(g27t)
    assert maximal_cliques_by_flips(core8t) == maximal_cliques(core8t)


def test_flip_traversal_matches_random():
    rng = random.Random(21)
    for _ in range(15):
        g = random_full_dag(rng, rng.randrange(2, 5))
        tagged = next(iter(enumerate_ample_framings(g)))
        t = CoherenceTable(g, tagged.framing)
        assert maximal_cliques_by_flips(t) == maximal_cliques(t)


def test_volume_invariance_across_framings(g27h):
    counts = set()
    for tagged in enumerate_ample_framings(g27h):
        if not tagged.canonical:
            continue
        t = CoherenceTable(g27h, tagged.framing)
        counts.add(len(maximal_cliques(t)))
    assert counts == {16}


def test_total_volume_is_clique_count(core8, core8t):
    cliques = maximal_cliques(core8t)
    total = sum(
        simplex_volume(core8, [core8t.routes[i] for i in c]) for c in cliques
    )
    assert total == len(cliques)


def test_clique_cap(g27t):
    from flowpoly.errors import CliqueExplosionError

    with pytest.raises(CliqueExplosionError):
        maximal_cliques(g27t, max_cliques=4)
