"""End-to-end analysis of a framed DAG with every cross-check verdict.

Each verdict pairs an invariant name with a boolean; the CLI turns a failed
verdict into exit code 2.  The checks deliberately pit independent
computations against each other: clique enumeration vs flip traversal,
down-cover statistics vs shelling restrictions vs the lattice-point oracle,
coherence vs tau-rigidity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dag import Dag, flow_dims, is_full
from .ehrhart import (
    check_symmetry_unimodality,
    finite_differences_vanish,
    flow_count_table,
    hstar_from_counts,
    special_simplex_check,
)
from .framing import (
    CoherenceTable,
    Framing,
    adjacency_graph,
    edge_labeling,
    is_ample,
    route_weight,
)
from .gentle import (
    blossom,
    build_quiver,
    gentleness_violations,
    module_to_route,
    objects_t,
    route_to_module,
    support_tau_tilting,
    tau_rigid_pair,
)
from .poset import build_poset
from .triangulation import (
    dual_graph,
    maximal_cliques,
    maximal_cliques_by_flips,
    verify_unimodular,
)


@dataclass
class Verdict:
    invariant: str
    ok: bool
    detail: str = ""


@dataclass
class AnalysisReport:
    graph: Dag
    table: CoherenceTable
    verdicts: list[Verdict] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, invariant: str, ok: bool, detail: str = "") -> None:
        self.verdicts.append(Verdict(invariant, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def failed(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.ok]


def analyze(
    g: Dag,
    f: Framing,
    seed: int = 0,
    extensions: int = 5,
    max_routes: int = 10**6,
    max_cliques: int = 10**6,
    with_gentle: bool = True,
    with_oracle: bool = True,
) -> AnalysisReport:
    from .dag import enumerate_routes

    table = CoherenceTable(g, f, enumerate_routes(g, max_routes))
    report = AnalysisReport(g, table)
    d_space, d_poly = flow_dims(g)
    routes = table.routes
    exc = list(table.exceptional_indices)
    report.data["routes"] = len(routes)
    report.data["exceptional"] = len(exc)
    report.data["dims"] = (d_space, d_poly)
    report.data["ample"] = is_ample(g, f, table)
    full = is_full(g)
    report.data["full"] = full

    if not full:
        report.check("graph-full", False, "analysis pipeline needs a full DAG")
        return report

    report.check("framing-ample", report.data["ample"])
    labels = edge_labeling(g, f)
    report.data["labels"] = labels

    # exceptional structure
    src_deg = sum(len(g.out_edges[s]) for s in g.sources)
    snk_deg = sum(len(g.in_edges[t]) for t in g.sinks)
    report.check(
        "exceptional-count-source-degree",
        len(exc) == src_deg == snk_deg,
        f"{len(exc)} vs {src_deg}/{snk_deg}",
    )
    cover: dict[int, int] = {}
    for i in exc:
        for e in routes[i]:
            cover[e] = cover.get(e, 0) + 1
    report.check(
        "unique-exceptional-route-per-edge",
        all(cover.get(e, 0) == 1 for e in g.tail),
    )
    report.check(
        "exceptional-routes-label-constant",
        all(len(set(route_weight(g, labels, routes[i]))) == 1 for i in exc),
    )
    bip, _ = adjacency_graph(g, [routes[i] for i in exc]).is_bipartite()
    report.check("exceptional-adjacency-bipartite", bip)

    # triangulation
    cliques = maximal_cliques(table, max_cliques)
    report.data["cliques"] = len(cliques)
    report.check(
        "cliques-contain-exceptionals",
        all(set(exc) <= set(c) for c in cliques),
    )
    report.check(
        "cliques-are-simplices",
        all(len(c) == d_poly + 1 for c in cliques),
    )
    report.check(
        "cliques-unimodular",
        all(verify_unimodular(g, [routes[i] for i in c]) for c in cliques),
    )
    flipped = maximal_cliques_by_flips(table)
    report.check("flip-traversal-matches-enumeration", flipped == cliques)
    dg = dual_graph(cliques)
    n_inner = len(g.inner)
    report.check(
        "dual-graph-regular",
        all(dg.degree(i) == n_inner for i in range(len(cliques))),
        f"expected degree {n_inner}",
    )

    # poset
    poset = build_poset(g, f, table, cliques)
    report.data["poset"] = poset
    dcov = poset.dcov_polynomial()
    report.data["dcov"] = dcov
    report.check("dcov-palindromic", dcov == dcov[::-1])
    report.check("dcov-total", sum(dcov) == len(cliques))
    report.check(
        "dcov-extremes",
        dcov[0] == 1 and dcov[-1] == 1 and len(dcov) == n_inner + 1,
    )
    exts = [poset.default_linear_extension()]
    exts.extend(poset.random_linear_extensions(extensions, seed))
    report.check(
        "shelling-h-matches-dcov",
        all(_pad_eq(poset.h_from_shelling(e), dcov) for e in exts),
    )
    kappa = poset.kappa
    report.check(
        "kappa-swaps-cover-statistics",
        all(poset.dcov(i) == poset.ucov(kappa[i]) for i in kappa),
    )

    # gentle algebra
    if with_gentle:
        quiver = build_quiver(g, f)
        report.check("quiver-gentle", not gentleness_violations(quiver))
        bq = blossom(quiver)
        report.check("blossom-gentle", not gentleness_violations(bq.quiver))
        objs = objects_t(quiver)
        non_exc = [i for i in range(len(routes)) if i not in set(exc)]
        report.check(
            "objects-match-nonexceptional-routes",
            len(objs) == len(non_exc),
            f"{len(objs)} objects vs {len(non_exc)} routes",
        )
        phi = {i: route_to_module(g, labels, routes[i]) for i in non_exc}
        report.check(
            "route-module-bijection",
            sorted(map(str, phi.values())) == sorted(map(str, objs))
            and all(module_to_route(g, labels, m) == routes[i] for i, m in phi.items()),
        )
        rigid_ok = True
        for ii, i in enumerate(non_exc):
            for j in non_exc[ii:]:
                coh = table.coherent(i, j) if i != j else True
                if tau_rigid_pair(bq, phi[i], phi[j]) != coh:
                    rigid_ok = False
        report.check("rigidity-matches-coherence", rigid_ok)
        idx_of = {str(phi[i]): i for i in non_exc}
        obj_list = list(objs)
        collections = support_tau_tilting(bq, obj_list)
        clique_sets = {tuple(sorted(set(c) - set(exc))) for c in cliques}
        coll_sets = {
            tuple(sorted(idx_of[str(obj_list[k])] for k in coll))
            for coll in collections
        }
        report.check(
            "support-tau-tilting-matches-cliques",
            coll_sets == clique_sets,
            f"{len(coll_sets)} collections vs {len(clique_sets)} cliques",
        )

    # lattice point oracle
    if with_oracle:
        counts = flow_count_table(g, d_poly + 2)
        report.data["counts"] = counts
        report.check(
            "route-count-is-vertex-count", counts[1] == len(routes)
        )
        hstar = hstar_from_counts(counts, d_poly)
        report.data["hstar"] = hstar
        report.check("hstar-matches-dcov", _pad_eq(dcov, hstar))
        report.check("hstar-volume-is-clique-count", sum(hstar) == len(cliques))
        sym, uni, gor = check_symmetry_unimodality(hstar)
        report.data["flags"] = {"symmetric": sym, "unimodal": uni, "gorenstein": gor}
        report.check("hstar-palindromic-gorenstein", sym and gor)
        report.check("hstar-unimodal", uni)
        report.check(
            "ehrhart-finite-differences-vanish",
            finite_differences_vanish(counts, d_poly),
        )
        special = special_simplex_check(g, [routes[i] for i in exc], routes)
        report.data["special_simplex"] = special
        report.check("exceptionals-form-special-simplex", special.ok)

    return report


def _pad_eq(a: Sequence[int], b: Sequence[int]) -> bool:
    n = max(len(a), len(b))
    pa = list(a) + [0] * (n - len(a))
    pb = list(b) + [0] * (n - len(b))
    return pa == pb
