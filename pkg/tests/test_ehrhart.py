import random

import pytest

from flowpoly.dag import Dag, flow_dims
from flowpoly.errors import (
    NegativeCoefficientError,
    NonIntegralSolutionError,
)
from flowpoly.ehrhart import (
    count_integer_flows,
    finite_differences_vanish,
    flow_count_table,
    hstar_from_counts,
    special_simplex_check,
)
from flowpoly.framing import CoherenceTable, enumerate_ample_framings
from flowpoly.generators import random_full_dag
from flowpoly.triangulation import maximal_cliques

from conftest import count_flows_oracle


def test_zero_dilation(g27h, single_edge):
    assert count_integer_flows(g27h, 0) == 1
    assert count_integer_flows(single_edge, 0) == 1


def test_single_edge_every_strength(single_edge):
    for t in range(6):
        assert count_integer_flows(single_edge, t) == 1


def test_g27_vertex_count(g27h, g27t):
    assert count_integer_flows(g27h, 1) == len(g27t.routes) == 13


def test_counts_match_enumeration_oracle(g27h, core8):
    for t in (1, 2):
        assert count_integer_flows(g27h, t) == count_flows_oracle(g27h, t)
    assert count_integer_flows(core8, 1) == count_flows_oracle(core8, 1)
    # a multigraph with parallel edges and two sources
    g = Dag.build(
        [0, 1, 2, 3],
        [(0, 0, 2), (1, 0, 2), (2, 1, 2), (3, 2, 3), (4, 2, 3), (5, 1, 3)],
    )
    for t in (1, 2, 3):
        assert count_integer_flows(g, t) == count_flows_oracle(g, t)


def test_hstar_g27(g27h):
    counts = flow_count_table(g27h, 7)
    assert hstar_from_counts(counts, 5) == [1, 7, 7, 1, 0, 0]
    assert finite_differences_vanish(counts, 5)


def test_hstar_single_edge(single_edge):
    counts = flow_count_table(single_edge, 2)
    assert hstar_from_counts(counts, 0) == [1]
    assert finite_differences_vanish(counts, 0)


def test_hstar_needs_consistent_counts(g27h):
    counts = dict(flow_count_table(g27h, 7))
    counts[7] += 1
    with pytest.raises(NonIntegralSolutionError):
        hstar_from_counts(counts, 5)
    bad = {0: 1, 1: 2, 2: 3}
    with pytest.raises(NegativeCoefficientError):
        hstar_from_counts(bad, 2)  # forces h*_2 = 3 - 3*2 - ... < 0
    assert not finite_differences_vanish(counts, 5)


def test_hstar_volume_is_clique_count(core8, core8t):
    d = flow_dims(core8)[1]
    counts = flow_count_table(core8, d)
    h = hstar_from_counts(counts, d)
    assert sum(h) == len(maximal_cliques(core8t))


def test_special_simplex_g27(g27h, g27f, g27t):
    exc = [g27t.routes[i] for i in g27t.exceptional_indices]
    rep = special_simplex_check(g27h, exc, g27t.routes)
    assert rep.ok
    assert not rep.facet_anomalies


def test_special_simplex_core8(core8, core8f, core8t):
    exc = [core8t.routes[i] for i in core8t.exceptional_indices]
    rep = special_simplex_check(core8, exc, core8t.routes)
    assert rep.ok


def test_special_simplex_fails_on_nonexceptional_set(g27h, g27t):
    routes = g27t.routes
    not_special = [routes[i] for i in list(g27t.exceptional_indices)[:-1]]
    rep = special_simplex_check(g27h, not_special, routes)
    assert not rep.ok and rep.uncovered


def test_distinct_special_simplices_across_framings(g27h):
    from flowpoly.framing import path_cycle_decomposition

    m = path_cycle_decomposition(g27h).m
    seen = set()
    for tagged in enumerate_ample_framings(g27h):
        if not tagged.canonical:
            continue
        t = CoherenceTable(g27h, tagged.framing)
        exc = frozenset(t.routes[i] for i in t.exceptional_indices)
        rep = special_simplex_check(g27h, sorted(exc), t.routes)
        assert rep.ok
        seen.add(exc)
    assert len(seen) >= 2 ** (m - 1)


def test_oracle_matches_dcov_random():
    from flowpoly.poset import build_poset

    rng = random.Random(17)
    for _ in range(8):
        g = random_full_dag(rng, rng.randrange(1, 4))
        tagged = next(iter(enumerate_ample_framings(g)))
        t = CoherenceTable(g, tagged.framing)
        p = build_poset(g, tagged.framing, t)
        d = flow_dims(g)[1]
        counts = flow_count_table(g, d + 2)
        h = hstar_from_counts(counts, d)
        dcov = p.dcov_polynomial()
        n = max(len(h), len(dcov))
        assert h + [0] * (n - len(h)) == dcov + [0] * (n - len(dcov))
        assert finite_differences_vanish(counts, d)


def test_frontier_cap(g27h):
    from flowpoly.errors import FrontierExplosionError

    with pytest.raises(FrontierExplosionError):
        count_integer_flows(g27h, 6, max_states=3)
