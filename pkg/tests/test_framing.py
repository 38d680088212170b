import random

import pytest

from flowpoly.dag import Dag, complete_contraction, is_full
from flowpoly.errors import (
    BadChoicesError,
    FramingError,
    InconsistentFramingError,
    NotThroughVertexError,
    NotValidError,
)
from flowpoly.framing import (
    CoherenceTable,
    Framing,
    adjacency_graph,
    all_framings,
    check_exceptional_set,
    compare_paths_at,
    count_ample_framings,
    edge_labeling,
    enumerate_ample_framings,
    enumerate_ample_framings_valid,
    exceptional_routes,
    framing_by_edge_id,
    framing_from_json,
    framing_to_json,
    idle_reachability,
    is_ample,
    lift_framing,
    path_cycle_decomposition,
    route_conflicts,
    routes_coherent,
    validate_framing,
)
from flowpoly.generators import gkn, random_full_dag

# Edge ids of the 13-edge doubled-fan graph (vertices 1..6):
#   0..3  arcs (2,6) (3,6) (4,6) (5,6)
#   4..7  arcs (1,2) (1,3) (1,4) (1,5)
#   8..12 path (1,2) (2,3) (3,4) (4,5) (5,6)
CORE8_EXCEPTIONAL = [(4, 0), (5, 1), (6, 2), (7, 3), (8, 9, 10, 11, 12)]
CORE8_BIG_CLIQUE = CORE8_EXCEPTIONAL + [
    (4, 9, 10, 11, 12),
    (5, 10, 11, 12),
    (6, 11, 12),
    (7, 12),
]


def test_compare_out_paths_core8(core8, core8f):
    # the shorter hop to the sink precedes the continuation along the path
    p = (10, 2)  # 3-4 then 4-6
    q = (10, 11, 12)  # 3-4-5-6
    assert compare_paths_at(core8, core8f, 3, p, q, "out") == -1
    assert compare_paths_at(core8, core8f, 3, q, p, "out") == 1


def test_compare_in_paths_core8(core8, core8f):
    a = (6,)  # the arc 1-4
    b = (8, 9, 10)  # 1-2-3-4 along the path
    assert compare_paths_at(core8, core8f, 4, a, b, "in") == -1


def test_compare_equal_paths(core8, core8f):
    assert compare_paths_at(core8, core8f, 4, (6,), (6,), "in") == 0


def test_compare_not_through_vertex(core8, core8f):
    with pytest.raises(NotThroughVertexError):
        compare_paths_at(core8, core8f, 5, (6,), (8, 9, 10), "in")


def test_conflict_witnesses_core8(core8, core8f):
    # 1346 vs 1236 conflict at 3; 13456 vs 12346 at both 3 and 4
    assert route_conflicts(core8, core8f, (5, 10, 2), (4, 9, 1)) == [3]
    assert route_conflicts(core8, core8f, (5, 10, 11, 12), (4, 9, 10, 2)) == [3, 4]
    assert routes_coherent(core8, core8f, (5, 1), (8, 9, 10, 11, 12))


def test_coherence_symmetric_reflexive(core8, core8f, core8t):
    n = len(core8t.routes)
    for i in range(n):
        assert core8t.coherent(i, i)
        for j in range(i + 1, n):
            assert core8t.coherent(i, j) == core8t.coherent(j, i)


def test_exceptional_routes_core8(core8, core8f, core8t):
    assert exceptional_routes(core8, core8f, core8t) == sorted(CORE8_EXCEPTIONAL)


def test_exceptional_routes_g27(g27h, g27f, g27t):
    assert exceptional_routes(g27h, g27f, g27t) == [(1, 2, 3, 4), (6, 8, 10), (7, 9)]


def test_exceptional_single_route(single_edge):
    f = framing_by_edge_id(single_edge)
    assert exceptional_routes(single_edge, f) == [(0,)]
    assert is_ample(single_edge, f)


def test_is_ample_core8(core8, core8f):
    assert is_ample(core8, core8f)
    # flipping one out-order breaks the labeling and loses coverage
    broken = Framing(dict(core8f.in_order), dict(core8f.out_order))
    broken.out_order[3] = tuple(reversed(broken.out_order[3]))
    assert not is_ample(core8, broken)


def test_edge_labeling_core8(core8, core8f):
    labels = edge_labeling(core8, core8f)
    assert all(labels[e] == 1 for e in range(8))
    assert all(labels[e] == 2 for e in range(8, 13))


def test_edge_labeling_swap(core8, core8f):
    reverse = Framing(
        {v: tuple(reversed(o)) for v, o in core8f.in_order.items()},
        {v: tuple(reversed(o)) for v, o in core8f.out_order.items()},
    )
    a = edge_labeling(core8, core8f)
    b = edge_labeling(core8, reverse)
    framed = {e for e in core8.tail if core8.tail[e] in core8.inner or core8.head[e] in core8.inner}
    assert all(a[e] + b[e] == 3 for e in framed)


def test_edge_labeling_inconsistent(core8, core8f):
    broken = Framing(dict(core8f.in_order), dict(core8f.out_order))
    broken.out_order[3] = tuple(reversed(broken.out_order[3]))
    with pytest.raises(InconsistentFramingError):
        edge_labeling(core8, broken)


def test_framing_validation(core8):
    with pytest.raises(FramingError):
        validate_framing(core8, Framing({}, {}))


def test_framing_json_round_trip(core8f):
    assert framing_from_json(framing_to_json(core8f)).key() == core8f.key()


def test_check_exceptional_set_negative(core8):
    # 123456, 136, 146, 1236: edge (1,5) uncovered, adjacency graph odd cycle
    x = [(8, 9, 10, 11, 12), (5, 1), (6, 2), (4, 9, 1)]
    res = check_exceptional_set(core8, x)
    assert not res.ok
    adj = res.adjacency
    assert len(adj.edges) == 4
    assert not adj.is_bipartite()[0]


def test_check_exceptional_set_positive(core8):
    res = check_exceptional_set(core8, CORE8_EXCEPTIONAL)
    assert res.ok and res.framing is not None
    table = CoherenceTable(core8, res.framing)
    assert is_ample(core8, res.framing, table)
    got = [table.routes[i] for i in table.exceptional_indices]
    assert got == sorted(CORE8_EXCEPTIONAL)


def test_check_exceptional_set_single_route(single_edge):
    res = check_exceptional_set(single_edge, [(0,)])
    assert res.ok


def test_decomposition_big_full(big_full):
    d = path_cycle_decomposition(big_full)
    assert d.m == 9
    assert len(d.components) == 9
    kinds = sorted(c.kind for c in d.components)
    assert kinds.count("path") == 9
    walks = {c.walk() for c in d.components}
    # the long component through all six fan vertices, as in the worked example
    assert any(len(c.edges) == 8 for c in d.components)
    assert count_ample_framings(big_full) == 512


def test_decomposition_g310():
    h = complete_contraction(gkn(3, 10)).result
    d = path_cycle_decomposition(h)
    assert d.m == 4
    assert len(d.components) == 4
    assert sorted(len(c.edges) for c in d.components) == [2, 2, 3, 5]
    assert count_ample_framings(gkn(3, 10)) == 256


def test_decomposition_single_edge(single_edge):
    d = path_cycle_decomposition(single_edge)
    assert d.m == 0
    assert len(d.components) == 1
    assert d.components[0].kind == "source-sink edge"
    assert count_ample_framings(single_edge) == 1


def test_decomposition_cycle_component():
    # a complete bipartite middle layer closes an alternating 4-cycle
    g = Dag.build(
        [0, 1, 2, 3, 4, 5],
        [
            (0, 0, 1),
            (1, 0, 1),
            (2, 0, 2),
            (3, 0, 2),
            (4, 1, 3),
            (5, 1, 4),
            (6, 2, 3),
            (7, 2, 4),
            (8, 3, 5),
            (9, 3, 5),
            (10, 4, 5),
            (11, 4, 5),
        ],
    )
    assert is_full(g)
    d = path_cycle_decomposition(g)
    cycles = [c for c in d.components if c.kind == "cycle"]
    assert cycles, "expected an alternating cycle component"
    for c in cycles:
        assert len(c.edges) % 2 == 0
        assert c.vertices[0] == c.vertices[-1]
    assert sorted(cycles[0].edges) == [4, 5, 6, 7]


def test_count_refuses_nonforest_idle_structure():
    # a valid DAG (its complete contraction is full) whose idle edges close
    # an undirected cycle; the product formula would report 32 while the
    # true number of ample framings is 16, so the count must fail loudly
    from flowpoly.errors import ConsistencyError

    g = Dag.build(
        [1, 2, 3, 4, 5, 6, 7],
        [
            (0, 1, 2),
            (1, 1, 2),
            (2, 1, 3),
            (3, 2, 3),
            (4, 3, 4),
            (5, 3, 4),
            (6, 2, 5),
            (7, 6, 5),
            (8, 7, 5),
            (9, 4, 6),
            (10, 4, 7),
        ],
    )
    from flowpoly.dag import is_valid as _is_valid

    assert _is_valid(g)
    with pytest.raises(ConsistencyError):
        count_ample_framings(g)
    brute = sum(1 for f in all_framings(g) if is_ample(g, f))
    assert brute == 16


def test_count_not_valid():
    g = Dag.build(
        [0, 1, 2],
        [(0, 0, 1), (1, 0, 1), (2, 0, 1), (3, 1, 2), (4, 1, 2), (5, 1, 2)],
    )
    with pytest.raises(NotValidError):
        count_ample_framings(g)


def test_gkn_framing_count_table():
    expected = {
        (2, 3): 4,
        (2, 4): 16,  # boundary n=2k, the 2^n branch
        (2, 5): 32,
        (2, 6): 32,
        (3, 4): 4,
        (3, 5): 16,
        (3, 6): 64,  # boundary n=2k
        (3, 7): 128,
        (3, 8): 256,
        (3, 9): 256,
        (3, 11): 256,
    }
    for (k, n), want in expected.items():
        assert count_ample_framings(gkn(k, n + 1)) == want, (k, n)


def test_enumerate_ample_framings_g27(g27h):
    tagged = list(enumerate_ample_framings(g27h))
    assert len(tagged) == count_ample_framings(g27h) == 8
    for t in tagged:
        assert is_ample(g27h, t.framing)
        partner = tagged[t.swap_partner]
        framed = {
            e
            for e in g27h.tail
            if g27h.tail[e] in g27h.inner or g27h.head[e] in g27h.inner
        }
        assert all(t.labels[e] + partner.labels[e] == 3 for e in framed)
    assert sum(1 for t in tagged if t.canonical) == 4


def test_distinct_triangulations_are_half(g27h):
    from flowpoly.triangulation import maximal_cliques

    seen = {}
    for t in enumerate_ample_framings(g27h):
        table = CoherenceTable(g27h, t.framing)
        key = frozenset(
            frozenset(table.routes[i] for i in c) for c in maximal_cliques(table)
        )
        seen.setdefault(key, []).append(t.index)
    assert len(seen) == 4  # 2^(M-1)
    for members in seen.values():
        assert len(members) == 2


def test_enumeration_matches_brute_force():
    rng = random.Random(5)
    done = 0
    while done < 15:
        g = random_full_dag(rng, rng.randrange(1, 4))
        if len(g.edges) > 10:
            continue
        done += 1
        brute = {f.key() for f in all_framings(g) if is_ample(g, f)}
        enum = {t.framing.key() for t in enumerate_ample_framings(g)}
        assert brute == enum


def test_unique_exceptional_route_per_edge(g27h, g27t):
    cover = {}
    for i in g27t.exceptional_indices:
        for e in g27t.routes[i]:
            cover[e] = cover.get(e, 0) + 1
    assert all(cover.get(e, 0) == 1 for e in g27h.tail)


def test_exceptional_count_equals_source_degree(core8, core8t):
    src = sum(len(core8.out_edges[s]) for s in core8.sources)
    snk = sum(len(core8.in_edges[t]) for t in core8.sinks)
    assert len(core8t.exceptional_indices) == src == snk == 5


def test_adjacency_graph_bipartite_for_exceptionals(core8, core8t):
    routes = [core8t.routes[i] for i in core8t.exceptional_indices]
    assert adjacency_graph(core8, routes).is_bipartite()[0]


def test_idle_reachability_g310():
    g = gkn(3, 10)
    r = idle_reachability(g)
    assert sorted(r.v1) == [2, 3]
    assert sorted(r.v2) == [8, 9]


def test_lift_framing_identity_on_full(core8, core8f):
    lifted = lift_framing(core8, core8f)
    assert lifted.key() == core8f.key()


def test_lift_framing_car8(car8, car8h):
    f_full = next(iter(enumerate_ample_framings(car8h))).framing
    lifted = lift_framing(car8, f_full)
    table = CoherenceTable(car8, lifted)
    assert is_ample(car8, lifted, table)
    trace = complete_contraction(car8)
    exc_g = {trace.project_route(table.routes[i]) for i in table.exceptional_indices}
    exc_h = {tuple(r) for r in exceptional_routes(car8h, f_full)}
    assert exc_g == exc_h


def test_lift_bad_choices(car8, car8h):
    f_full = next(iter(enumerate_ample_framings(car8h))).framing
    with pytest.raises(BadChoicesError):
        lift_framing(car8, f_full, {2: {"out": (999, 998)}})


def test_lift_count_matches_formula(car8, car8h):
    per_full = 1
    reach = idle_reachability(car8)
    import math

    for v in reach.v1:
        per_full *= math.factorial(len(car8.out_edges[v]))
    for v in reach.v2:
        per_full *= math.factorial(len(car8.in_edges[v]))
    assert per_full == 4
    lifts = list(enumerate_ample_framings_valid(car8))
    assert len(lifts) == count_ample_framings(car8) == 128
    assert len({f.key() for f in lifts}) == 128


def test_valid_enumeration_all_ample():
    g = gkn(2, 7)
    framings = list(enumerate_ample_framings_valid(g))
    assert len(framings) == count_ample_framings(g) == 32
    for f in framings:
        assert is_ample(g, f)


def test_gkn_degenerate_case_empirical():
    # the count formula's closed-form ranges start at n = k + 1; computed
    # directly, these graphs (a path plus one chord) admit a single framing
    for k in (2, 3, 4):
        g = gkn(k, k + 1)
        count = count_ample_framings(g)
        brute = sum(1 for f in all_framings(g) if is_ample(g, f))
        assert count == brute
        assert count == 1
