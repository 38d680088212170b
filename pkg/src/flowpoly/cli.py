"""Command-line front end.

Graph-producing commands (gen, contract) write graph JSON to stdout so they
compose in pipelines; analysis commands read a graph from stdin or --input
and print a report (pretty text, or JSON with --json).

Exit codes: 0 all checks pass, 1 usage or limit errors, 2 a structural
invariant failed on this instance.
"""

from __future__ import annotations

import json
import sys

import click

from . import analysis as analysis_mod
from .dag import (
    Dag,
    complete_contraction,
    dag_from_edge_list,
    dag_from_json,
    dag_to_json,
    enumerate_routes,
    flow_dims,
    is_full,
    is_valid,
)
from .ehrhart import check_symmetry_unimodality, flow_count_table, hstar_from_counts
from .errors import ConsistencyError, FlowpolyError, LimitError
from .framing import (
    CoherenceTable,
    Framing,
    count_ample_framings,
    enumerate_ample_framings,
    framing_from_json,
    framing_to_json,
    named_framing,
    path_cycle_decomposition,
    NAMED_FRAMINGS,
)
from .generators import generate, random_valid_dag
from .poset import build_poset
from .triangulation import dual_graph, maximal_cliques, verify_unimodular


def _read_graph(path: str | None) -> Dag:
    text = sys.stdin.read() if path in (None, "-") else open(path).read()
    text = text.strip()
    if not text:
        raise click.UsageError("empty graph input")
    if text.startswith("{"):
        return dag_from_json(text)
    return dag_from_edge_list(text)


def _resolve_framing(g: Dag, spec: str) -> Framing:
    if spec in NAMED_FRAMINGS:
        return named_framing(g, spec)
    try:
        return framing_from_json(open(spec).read())
    except OSError as exc:
        raise click.UsageError(f"framing {spec!r} is neither a name nor a readable file: {exc}")


input_opt = click.option("--input", "-i", "input_path", default=None, help="graph file (default stdin)")
json_opt = click.option("--json", "as_json", is_flag=True, help="machine-readable output")
framing_opt = click.option(
    "--framing", default="by-id", show_default=True, help="named framing or framing JSON file"
)


@click.group()
def cli() -> None:
    """Flow polytopes of DAGs: framings, triangulations, posets, h*-vectors."""


@cli.command()
@click.argument("name")
@click.argument("args", nargs=-1, type=int)
def gen(name: str, args: tuple[int, ...]) -> None:
    """Generate a built-in graph (car N | carcore N | gkn K N1)."""
    try:
        g = generate(name, list(args))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(dag_to_json(g))


@cli.command()
@input_opt
@json_opt
def contract(input_path, as_json) -> None:
    """Contract idle edges to a complete contraction."""
    g = _read_graph(input_path)
    trace = complete_contraction(g)
    if as_json:
        click.echo(
            json.dumps(
                {
                    "steps": [
                        {"edge": e, "kept": k, "removed": r} for e, (k, r) in trace.steps
                    ],
                    "result": json.loads(dag_to_json(trace.result)),
                    "vertex_map": trace.vertex_map,
                    "full": is_full(trace.result),
                    "valid": is_full(trace.result),
                }
            )
        )
    else:
        click.echo(dag_to_json(trace.result))
        click.echo(
            f"contracted {len(trace.steps)} idle edge(s); "
            f"result full: {is_full(trace.result)}",
            err=True,
        )


@cli.command()
@input_opt
@json_opt
@click.option("--max-routes", default=10**6, show_default=True)
def routes(input_path, as_json, max_routes) -> None:
    """Enumerate routes (maximal source-to-sink paths)."""
    g = _read_graph(input_path)
    rs = enumerate_routes(g, max_routes)
    if as_json:
        click.echo(json.dumps({"count": len(rs), "routes": [list(r) for r in rs]}))
    else:
        click.echo(f"{len(rs)} routes")
        for r in rs:
            click.echo(" ".join(map(str, r)))


@cli.command()
@input_opt
@json_opt
@click.option("--enumerate", "do_enum", is_flag=True, help="stream the ample framings")
def framings(input_path, as_json, do_enum) -> None:
    """Count (and optionally enumerate) ample framings of a valid DAG."""
    g = _read_graph(input_path)
    if not is_valid(g):
        raise click.UsageError("graph is not valid (no full contraction)")
    trace = complete_contraction(g)
    decomp = path_cycle_decomposition(trace.result)
    total = count_ample_framings(g)
    payload = {
        "m": decomp.m,
        "components": [
            {"kind": c.kind, "walk": list(c.walk())} for c in decomp.components
        ],
        "count": total,
    }
    if as_json and not do_enum:
        click.echo(json.dumps(payload))
    elif not do_enum:
        click.echo(f"M = {decomp.m} alternating components with inner vertices")
        for c in decomp.components:
            click.echo(f"  {c.kind}: " + "-".join(map(str, c.walk())))
        click.echo(f"ample framings: {total}")
    else:
        if not is_full(g):
            raise click.UsageError("--enumerate needs a full graph (contract first)")
        for tagged in enumerate_ample_framings(g):
            if not tagged.canonical:
                continue
            click.echo(framing_to_json(tagged.framing))


@cli.command()
@input_opt
@json_opt
@framing_opt
@click.option("--dot", "dot_path", default=None, help="write the dual graph as DOT")
@click.option("--max-cliques", default=10**6, show_default=True)
def cliques(input_path, as_json, framing, dot_path, max_cliques) -> None:
    """Maximal cliques of the coherence relation, with unimodularity flags."""
    g = _read_graph(input_path)
    f = _resolve_framing(g, framing)
    table = CoherenceTable(g, f)
    cs = maximal_cliques(table, max_cliques)
    flags = [verify_unimodular(g, [table.routes[i] for i in c]) for c in cs]
    dg = dual_graph(cs)
    if dot_path:
        with open(dot_path, "w") as fh:
            fh.write(_dual_dot(dg))
    if as_json:
        click.echo(
            json.dumps(
                {
                    "routes": [list(r) for r in table.routes],
                    "exceptional": list(table.exceptional_indices),
                    "cliques": [list(c) for c in cs],
                    "unimodular": flags,
                    "dual_edges": [list(e) for e in dg.edges],
                }
            )
        )
    else:
        click.echo(f"{len(table.routes)} routes, {len(table.exceptional_indices)} exceptional")
        click.echo(f"{len(cs)} maximal cliques, all unimodular: {all(flags)}")
        click.echo(f"dual graph: {len(dg.edges)} edges")


@cli.command()
@input_opt
@json_opt
@framing_opt
@click.option("--dot", "dot_path", default=None, help="write the Hasse diagram as DOT")
@click.option("--seed", default=0, show_default=True)
def poset(input_path, as_json, framing, dot_path, seed) -> None:
    """Tau-tilting poset on the dual graph, with brick labels and dcov."""
    g = _read_graph(input_path)
    f = _resolve_framing(g, framing)
    p = build_poset(g, f)
    dcov = p.dcov_polynomial()
    if dot_path:
        with open(dot_path, "w") as fh:
            fh.write(_poset_dot(p))
    if as_json:
        click.echo(
            json.dumps(
                {
                    "nodes": [list(c) for c in p.cliques],
                    "hasse": [
                        {"lower": lo, "upper": hi, "brick": list(w)} for lo, hi, w in p.hasse
                    ],
                    "dcov": dcov,
                    "kappa": p.kappa,
                }
            )
        )
    else:
        click.echo(f"{len(p.cliques)} nodes, {len(p.hasse)} cover relations")
        click.echo(f"dcov polynomial coefficients: {dcov}")
        click.echo(f"kappa is a bijection on {len(p.kappa)} nodes")


@cli.command()
@input_opt
@json_opt
@framing_opt
@click.option("--seed", default=0, show_default=True)
@click.option("--extensions", default=5, show_default=True, help="random linear extensions to cross-check")
def hstar(input_path, as_json, framing, seed, extensions) -> None:
    """h-vector from the poset: dcov statistics and shelling restrictions."""
    g = _read_graph(input_path)
    f = _resolve_framing(g, framing)
    p = build_poset(g, f)
    dcov = p.dcov_polynomial()
    agree = all(
        p.h_from_shelling(e) == dcov
        for e in [p.default_linear_extension()] + p.random_linear_extensions(extensions, seed)
    )
    if as_json:
        click.echo(json.dumps({"h": dcov, "shelling_agrees": agree}))
    else:
        click.echo(f"h = {dcov} (shelling orders agree: {agree})")


@cli.command()
@input_opt
@json_opt
@framing_opt
def oracle(input_path, as_json, framing) -> None:
    """Ehrhart oracle: lattice-point counts, h*, Gorenstein/unimodal flags."""
    from .ehrhart import special_simplex_check
    from .framing import CoherenceTable

    g = _read_graph(input_path)
    f = _resolve_framing(g, framing)
    d = flow_dims(g)[1]
    counts = flow_count_table(g, d + 2)
    h = hstar_from_counts(counts, d)
    sym, uni, gor = check_symmetry_unimodality(h)
    payload = {
        "dimension": d,
        "counts": counts,
        "hstar": h,
        "symmetric": sym,
        "unimodal": uni,
        "gorenstein": gor,
    }
    if is_full(g):
        table = CoherenceTable(g, f)
        exc = [table.routes[i] for i in table.exceptional_indices]
        payload["special_simplex"] = special_simplex_check(g, exc, table.routes).ok
    if as_json:
        click.echo(json.dumps(payload))
    else:
        click.echo(f"dim = {d}")
        click.echo("counts: " + ", ".join(f"{t}:{c}" for t, c in sorted(counts.items())))
        click.echo(f"h* = {h}")
        click.echo(f"symmetric: {sym}, unimodal: {uni}, gorenstein: {gor}")
        if "special_simplex" in payload:
            click.echo(f"exceptional routes form a special simplex: {payload['special_simplex']}")


@cli.command()
@input_opt
@json_opt
@framing_opt
@click.option("--seed", default=0, show_default=True)
@click.option("--max-routes", default=10**6, show_default=True)
@click.option("--max-cliques", default=10**6, show_default=True)
def analyze(input_path, as_json, framing, seed, max_routes, max_cliques) -> None:
    """Run the whole pipeline and every cross-check."""
    g = _read_graph(input_path)
    f = _resolve_framing(g, framing)
    report = analysis_mod.analyze(
        g, f, seed=seed, max_routes=max_routes, max_cliques=max_cliques
    )
    if as_json:
        click.echo(
            json.dumps(
                {
                    "routes": report.data.get("routes"),
                    "exceptional": report.data.get("exceptional"),
                    "cliques": report.data.get("cliques"),
                    "dcov": report.data.get("dcov"),
                    "hstar": report.data.get("hstar"),
                    "flags": report.data.get("flags"),
                    "verdicts": [
                        {"invariant": v.invariant, "ok": v.ok, "detail": v.detail}
                        for v in report.verdicts
                    ],
                    "ok": report.ok,
                }
            )
        )
    else:
        click.echo(f"routes: {report.data.get('routes')}")
        click.echo(f"exceptional routes: {report.data.get('exceptional')}")
        click.echo(f"maximal cliques: {report.data.get('cliques')}")
        click.echo(f"dcov: {report.data.get('dcov')}")
        click.echo(f"oracle h*: {report.data.get('hstar')}")
        click.echo(f"flags: {report.data.get('flags')}")
        for v in report.verdicts:
            mark = "ok " if v.ok else "FAIL"
            click.echo(f"  [{mark}] {v.invariant}" + (f" ({v.detail})" if v.detail else ""))
    if not report.ok:
        failed = ", ".join(v.invariant for v in report.failed())
        raise ConsistencyError(failed, "instance violates the named invariants")


@cli.command()
@click.option("--count", default=25, show_default=True, help="random instances")
@click.option("--seed", default=0, show_default=True)
@click.option("--size", default=4, show_default=True, help="inner vertices per instance")
@json_opt
def fuzz(count, seed, size, as_json) -> None:
    """Randomized structural checks on random valid DAGs."""
    import random as _random

    from .analysis import analyze as run_analysis

    rng = _random.Random(seed)
    failures = []
    for i in range(count):
        g = random_valid_dag(rng, rng.randrange(2, size + 1), expansions=rng.randrange(0, 3))
        trace = complete_contraction(g)
        h = trace.result
        if not is_full(h):
            failures.append((i, "contraction-not-full"))
            continue
        tagged = next(iter(enumerate_ample_framings(h)))
        rep = run_analysis(h, tagged.framing, with_gentle=False, with_oracle=False)
        failures.extend((i, v.invariant) for v in rep.failed())
    if as_json:
        click.echo(json.dumps({"instances": count, "failures": failures}))
    else:
        click.echo(f"{count} instances, {len(failures)} failures")
        for idx, inv in failures:
            click.echo(f"  instance {idx}: {inv}")
    if failures:
        raise ConsistencyError("fuzz-invariants", f"{len(failures)} failures")


def _dual_dot(dg) -> str:
    lines = ["graph dual {"]
    for i, c in enumerate(dg.cliques):
        lines.append(f'  n{i} [label="{" ".join(map(str, c))}"];')
    for a, b in dg.edges:
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _poset_dot(p) -> str:
    lines = ["digraph poset {", "  rankdir=BT;"]
    for i, c in enumerate(p.cliques):
        lines.append(f'  n{i} [label="{" ".join(map(str, c))}"];')
    for lo, hi, w in p.hasse:
        brick = "-".join(map(str, w))
        lines.append(f'  n{lo} -> n{hi} [label="{brick}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except LimitError as exc:
        click.echo(f"limit exceeded: {exc}", err=True)
        sys.exit(1)
    except ConsistencyError as exc:
        click.echo(f"consistency failure: {exc}", err=True)
        sys.exit(2)
    except FlowpolyError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":
    main()
