"""Brute-force lattice-point oracle for flow polytopes.

Counts nonnegative integer flows of each total strength by dynamic
programming over a topological cut, recovers the h*-vector exactly in the
binomial basis, and certifies palindromicity, unimodality, and the special
simplex property of the exceptional routes.  Everything is exact integer
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .dag import Dag, EdgeId, Route, VertexId, flow_dims
from .errors import (
    FrontierExplosionError,
    NegativeCoefficientError,
    NonIntegralSolutionError,
    NotFullError,
)

DEFAULT_MAX_STATES = 2_000_000


def count_integer_flows(g: Dag, strength: int, max_states: int = DEFAULT_MAX_STATES) -> int:
    """Number of nonnegative integer flows with total source outflow `strength`.

    Vertices are processed in topological order; a state is the vector of
    pending inflows of future vertices.  Parallel edges toward a common
    head are not enumerated one by one: a stars-and-bars factor counts the
    ways to split that head's share.
    """
    if strength < 0:
        raise ValueError("strength must be nonnegative")
    order = g.topological_order
    pos = {v: i for i, v in enumerate(order)}
    sinks = set(g.sinks)
    sources = set(g.sources)

    # distribute the strength over the sources first
    states: dict[tuple[tuple[int, int], ...], int] = {}
    src = sorted(sources, key=lambda v: pos[v])
    if not src:
        return 1 if strength == 0 else 0
    for combo in _compositions(strength, len(src)):
        key = tuple((pos[v], a) for v, a in zip(src, combo) if a > 0)
        states[key] = states.get(key, 0) + 1

    for v in order:
        if v in sinks:
            continue
        vpos = pos[v]
        groups: dict[VertexId, int] = {}
        for e in g.out_edges[v]:
            groups[g.head[e]] = groups.get(g.head[e], 0) + 1
        heads = sorted(groups, key=lambda h: pos[h])
        mults = [groups[h] for h in heads]
        new_states: dict[tuple[tuple[int, int], ...], int] = {}
        for state, ways in states.items():
            pending = dict(state)
            inflow = pending.pop(vpos, 0)
            if not heads:
                if inflow:
                    continue  # no outlet for positive inflow
                key = tuple(sorted(pending.items()))
                new_states[key] = new_states.get(key, 0) + ways
                continue
            for split in _compositions(inflow, len(heads)):
                factor = 1
                nxt = dict(pending)
                for h, m, amount in zip(heads, mults, split):
                    factor *= math.comb(amount + m - 1, m - 1)
                    if h not in sinks and amount:
                        nxt[pos[h]] = nxt.get(pos[h], 0) + amount
                key = tuple(sorted(nxt.items()))
                new_states[key] = new_states.get(key, 0) + ways * factor
        states = new_states
        if len(states) > max_states:
            raise FrontierExplosionError(f"flow DP exceeded {max_states} states")
    return states.get((), 0)


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def flow_count_table(g: Dag, tmax: int, max_states: int = DEFAULT_MAX_STATES) -> dict[int, int]:
    return {t: count_integer_flows(g, t, max_states) for t in range(tmax + 1)}


def hstar_from_counts(counts: Mapping[int, int], d: int) -> list[int]:
    """Solve counts[t] = sum_i h_i * C(t + d - i, d) for h, exactly.

    The system is unitriangular, so the solution is integral by
    construction; a negative entry or a mismatch at t > d signals a wrong
    dimension or a counting bug.
    """
    for t in range(d + 1):
        if t not in counts:
            raise NonIntegralSolutionError(f"counts missing dilation {t}")
    h = [0] * (d + 1)
    for t in range(d + 1):
        acc = sum(h[i] * math.comb(t + d - i, d) for i in range(t))
        h[t] = counts[t] - acc
        if h[t] < 0:
            raise NegativeCoefficientError(f"h*_{t} = {h[t]} < 0")
    for t in sorted(counts):
        if t > d:
            predicted = sum(h[i] * math.comb(t + d - i, d) for i in range(d + 1))
            if predicted != counts[t]:
                raise NonIntegralSolutionError(
                    f"counts at t={t} do not fit a degree-{d} polynomial"
                )
    return h


def finite_differences_vanish(counts: Mapping[int, int], d: int) -> bool:
    """Order-(d+1) forward differences of the count table are zero."""
    tmax = max(counts)
    values = [counts[t] for t in range(tmax + 1)]
    if len(values) < d + 2:
        raise NonIntegralSolutionError("need counts up to at least d+1")
    diffs = values
    for _ in range(d + 1):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    return all(x == 0 for x in diffs)


def check_symmetry_unimodality(h: Sequence[int]) -> tuple[bool, bool, bool]:
    """(symmetric about the last nonzero entry, unimodal, gorenstein).

    Gorenstein is certified by palindromicity of the h*-vector.
    """
    nz = [i for i, x in enumerate(h) if x != 0]
    if not nz:
        return True, True, True
    s = nz[-1]
    core = list(h[: s + 1])
    symmetric = core == core[::-1]
    rising = True
    unimodal = True
    for a, b in zip(core, core[1:]):
        if b > a and not rising:
            unimodal = False
            break
        if b < a:
            rising = False
    return symmetric, unimodal, symmetric


@dataclass
class SpecialSimplexReport:
    ok: bool
    uncovered: list[EdgeId]
    multiply_covered: list[EdgeId]
    facet_anomalies: list[EdgeId]  # x_e = 0 supporting fewer than dim route vertices


def special_simplex_check(
    g: Dag, exceptional: Sequence[Route], routes: Sequence[Route]
) -> SpecialSimplexReport:
    """Every facet x_e = 0 must contain all but one exceptional vertex.

    Equivalent, per the unique-exceptional-route property: each edge lies
    on exactly one exceptional route.  Also records edges whose vanishing
    face holds fewer than dim-many route vertices, which would disqualify
    them as facets.
    """
    from .dag import is_full

    if not is_full(g):
        raise NotFullError("special simplices are certified on full DAGs")
    d = flow_dims(g)[1]
    uncovered: list[EdgeId] = []
    multiply: list[EdgeId] = []
    anomalies: list[EdgeId] = []
    for e in sorted(g.tail):
        hits = sum(1 for r in exceptional if e in r)
        if hits == 0:
            uncovered.append(e)
        elif hits > 1:
            multiply.append(e)
        support = sum(1 for r in routes if e not in r)
        if support < d:
            anomalies.append(e)
    ok = not uncovered and not multiply and not anomalies
    return SpecialSimplexReport(ok, uncovered, multiply, anomalies)
