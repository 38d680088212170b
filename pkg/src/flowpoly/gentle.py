"""Gentle algebra of a framed full DAG: strings, blossoming, tau-rigidity.

The quiver lives on the inner vertices; weight-1 edges keep their direction
and weight-2 edges reverse, with relations at every weight change.  Route
combinatorics translates to string combinatorics, and pairwise coherence of
routes matches tau-rigidity of the corresponding string modules over the
blossoming algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .dag import Dag, EdgeId, Route, VertexId
from .errors import (
    ConsistencyError,
    ExceptionalRouteError,
    InconsistentFramingError,
    NotAmpleError,
    NotFullError,
)
from .framing import Framing, edge_labeling

ArrowId = int


@dataclass(frozen=True)
class Arrow:
    id: ArrowId
    source: VertexId
    target: VertexId
    weight: int  # weight of the originating edge; blossom arrows inherit
    edge: EdgeId | None  # originating edge of the base DAG, None if added


@dataclass(frozen=True)
class Quiver:
    nodes: tuple[VertexId, ...]
    arrows: tuple[Arrow, ...]
    relations: frozenset[tuple[ArrowId, ArrowId]]  # composable pairs in the ideal

    def arrow(self, a: ArrowId) -> Arrow:
        return self._by_id[a]

    @property
    def _by_id(self) -> dict[ArrowId, Arrow]:
        d = getattr(self, "_by_id_cache", None)
        if d is None:
            d = {a.id: a for a in self.arrows}
            object.__setattr__(self, "_by_id_cache", d)
        return d

    def arrows_into(self, v: VertexId) -> list[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def arrows_from(self, v: VertexId) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]


def build_quiver(g: Dag, f: Framing) -> Quiver:
    """Quiver with relations for an amply framed full DAG.

    Arrows come from edges between inner vertices (arrow id = edge id);
    relations are the composable pairs whose weights differ.
    """
    from .dag import is_full

    if not is_full(g):
        raise NotFullError("the quiver construction needs a full DAG")
    try:
        labels = edge_labeling(g, f)
    except InconsistentFramingError as exc:
        raise NotAmpleError(str(exc)) from exc
    inner = set(g.inner)
    arrows = []
    for e in sorted(g.tail):
        t, h = g.tail[e], g.head[e]
        if t in inner and h in inner:
            if labels[e] == 1:
                arrows.append(Arrow(e, t, h, 1, e))
            else:
                arrows.append(Arrow(e, h, t, 2, e))
    relations = _weight_relations(arrows)
    return Quiver(tuple(sorted(inner)), tuple(arrows), relations)


def _weight_relations(arrows: Sequence[Arrow]) -> frozenset[tuple[ArrowId, ArrowId]]:
    rel = set()
    for a in arrows:
        for b in arrows:
            if a.target == b.source and a.weight != b.weight:
                rel.add((a.id, b.id))
    return frozenset(rel)


def gentleness_violations(q: Quiver) -> list[str]:
    """Empty iff the quiver with relations is gentle."""
    issues = []
    for v in q.nodes:
        if len(q.arrows_into(v)) > 2:
            issues.append(f"node {v} has more than two incoming arrows")
        if len(q.arrows_from(v)) > 2:
            issues.append(f"node {v} has more than two outgoing arrows")
    rel = q.relations
    for a1, a2 in rel:
        if q.arrow(a1).target != q.arrow(a2).source:
            issues.append(f"relation ({a1},{a2}) is not composable")
    for a in q.arrows:
        cont_free = [b for b in q.arrows if a.target == b.source and (a.id, b.id) not in rel]
        cont_rel = [b for b in q.arrows if a.target == b.source and (a.id, b.id) in rel]
        pre_free = [b for b in q.arrows if b.target == a.source and (b.id, a.id) not in rel]
        pre_rel = [b for b in q.arrows if b.target == a.source and (b.id, a.id) in rel]
        if len(cont_free) > 1:
            issues.append(f"arrow {a.id} has two continuations outside the ideal")
        if len(cont_rel) > 1:
            issues.append(f"arrow {a.id} has two continuations inside the ideal")
        if len(pre_free) > 1:
            issues.append(f"arrow {a.id} has two predecessors outside the ideal")
        if len(pre_rel) > 1:
            issues.append(f"arrow {a.id} has two predecessors inside the ideal")
    return issues


def is_gentle(q: Quiver) -> bool:
    return not gentleness_violations(q)


# -- strings ----------------------------------------------------------------------

Letter = tuple[ArrowId, int]  # (arrow id, +1 or -1)


@dataclass(frozen=True)
class StringWord:
    """A string object: a reduced word, a constant path, or a shifted marker."""

    kind: str  # 'word' | 'const' | 'shift'
    letters: tuple[Letter, ...] = ()
    vertex: VertexId | None = None

    def __str__(self) -> str:
        if self.kind == "const":
            return f"e_{self.vertex}"
        if self.kind == "shift":
            return f"P_{self.vertex}[1]"
        return "".join(
            (f"a{a}" if e == 1 else f"a{a}^-1") for a, e in self.letters
        )


def _inverse(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    return tuple((a, -e) for a, e in reversed(letters))


def _canonical(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    inv = _inverse(letters)
    key = lambda w: tuple((a, 0 if e == 1 else 1) for a, e in w)  # noqa: E731
    return letters if key(letters) <= key(inv) else inv


def _letter_ends(q: Quiver, letter: Letter) -> tuple[VertexId, VertexId]:
    a, e = letter
    arr = q.arrow(a)
    return (arr.source, arr.target) if e == 1 else (arr.target, arr.source)


def _letters_ok(q: Quiver, x: Letter, y: Letter) -> bool:
    """May letter y follow letter x in a string?"""
    if _letter_ends(q, x)[1] != _letter_ends(q, y)[0]:
        return False
    if x[0] == y[0] and x[1] == -y[1]:
        return False  # immediate cancellation
    if x[1] == 1 and y[1] == 1 and (x[0], y[0]) in q.relations:
        return False
    if x[1] == -1 and y[1] == -1 and (y[0], x[0]) in q.relations:
        return False
    return True


def enumerate_strings(q: Quiver) -> list[StringWord]:
    """All strings up to inversion: constant paths plus reduced words.

    Quivers from full DAGs admit no string visiting a vertex twice; a
    repeat would contradict that, so it is reported rather than pruned.
    """
    words: set[tuple[Letter, ...]] = set()
    letters = [(a.id, e) for a in q.arrows for e in (1, -1)]
    stack: list[tuple[tuple[Letter, ...], tuple[VertexId, ...]]] = []
    for lt in letters:
        s, t = _letter_ends(q, lt)
        stack.append(((lt,), (s, t)))
    while stack:
        word, verts = stack.pop()
        words.add(_canonical(word))
        for lt in letters:
            if not _letters_ok(q, word[-1], lt):
                continue
            nxt = _letter_ends(q, lt)[1]
            if nxt in verts:
                raise ConsistencyError(
                    "string-vertex-multiplicity",
                    f"string {word + (lt,)} revisits vertex {nxt}",
                )
            stack.append((word + (lt,), verts + (nxt,)))
    out = [StringWord("const", vertex=v) for v in q.nodes]
    out.extend(StringWord("word", letters=w) for w in sorted(words))
    return out


def objects_t(q: Quiver) -> list[StringWord]:
    """Indecomposables plus one shifted projective marker per node."""
    out = enumerate_strings(q)
    out.extend(StringWord("shift", vertex=v) for v in q.nodes)
    return out


# -- the route <-> module bijection ------------------------------------------------


def route_to_module(g: Dag, labels: Mapping[EdgeId, int], route: Route) -> StringWord:
    """Map a non-exceptional route to its string object.

    Weight pattern 1..12..2 gives the shifted marker at the switch vertex;
    otherwise the stretch strictly between the first 2 and the last 1 gives
    a word (weight-1 edges direct, weight-2 edges inverse), degenerating to
    a constant path when the two are adjacent.
    """
    w = [labels[e] for e in route]
    if all(x == 1 for x in w) or all(x == 2 for x in w):
        raise ExceptionalRouteError("route is exceptional")
    i = w.index(2)
    j = len(w) - 1 - w[::-1].index(1)
    if i > j:  # pattern 1^a 2^b with a, b >= 1
        return StringWord("shift", vertex=g.head[route[i - 1]])
    if j == i + 1:
        return StringWord("const", vertex=g.head[route[i]])
    letters = tuple(
        (route[s], 1 if labels[route[s]] == 1 else -1) for s in range(i + 1, j)
    )
    return StringWord("word", letters=_canonical(letters))


def _step_back_weight1(g: Dag, labels: Mapping[EdgeId, int], v: VertexId) -> list[EdgeId]:
    out: list[EdgeId] = []
    inner = set(g.inner)
    while v in inner:
        ones = [e for e in g.in_edges[v] if labels[e] == 1]
        assert len(ones) == 1
        out.append(ones[0])
        v = g.tail[ones[0]]
    out.reverse()
    return out


def _step_forward_weight2(g: Dag, labels: Mapping[EdgeId, int], v: VertexId) -> list[EdgeId]:
    out: list[EdgeId] = []
    inner = set(g.inner)
    while v in inner:
        twos = [e for e in g.out_edges[v] if labels[e] == 2]
        assert len(twos) == 1
        out.append(twos[0])
        v = g.head[twos[0]]
    return out


def module_to_route(g: Dag, labels: Mapping[EdgeId, int], obj: StringWord) -> Route:
    """Inverse of route_to_module."""
    inner = set(g.inner)
    if obj.kind == "shift":
        v = obj.vertex
        back = _step_back_weight1(g, labels, v)
        fwd = _step_forward_weight2(g, labels, v)
        return tuple(back + fwd)
    if obj.kind == "const":
        v = obj.vertex
        e_in = [e for e in g.in_edges[v] if labels[e] == 2]
        e_out = [e for e in g.out_edges[v] if labels[e] == 1]
        assert len(e_in) == 1 and len(e_out) == 1
        back = _step_back_weight1(g, labels, g.tail[e_in[0]])
        fwd = _step_forward_weight2(g, labels, g.head[e_out[0]])
        return tuple(back + e_in + e_out + fwd)
    edges = [a for a, _ in obj.letters]
    # order the underlying edges as a directed path in g
    heads = {g.head[e] for e in edges}
    first = [e for e in edges if g.tail[e] not in heads]
    assert len(first) == 1
    path = [first[0]]
    rest = set(edges) - {first[0]}
    while rest:
        nxt = [e for e in rest if g.tail[e] == g.head[path[-1]]]
        assert len(nxt) == 1
        path.append(nxt[0])
        rest.remove(nxt[0])
    start, end = g.tail[path[0]], g.head[path[-1]]
    e_i = [e for e in g.in_edges[start] if labels[e] == 2]
    e_j = [e for e in g.out_edges[end] if labels[e] == 1]
    assert len(e_i) == 1 and len(e_j) == 1
    back = _step_back_weight1(g, labels, g.tail[e_i[0]])
    fwd = _step_forward_weight2(g, labels, g.head[e_j[0]])
    return tuple(back + e_i + path + e_j + fwd)


# -- blossoming ---------------------------------------------------------------------


@dataclass(frozen=True)
class BlossomQuiver:
    quiver: Quiver
    base_nodes: tuple[VertexId, ...]


def blossom(q: Quiver) -> BlossomQuiver:
    """Extend a gentle quiver so every original node has two arrows each way.

    New vertices carry a single arrow; weights of the added arrows are the
    complements of the present ones, which pins down the extended relations
    (weight changes) and keeps the result gentle.
    """
    next_node = max(q.nodes, default=0) + 1
    next_arrow = max((a.id for a in q.arrows), default=-1) + 1
    arrows = list(q.arrows)
    for v in q.nodes:
        in_w = sorted(a.weight for a in q.arrows if a.target == v)
        out_w = sorted(a.weight for a in q.arrows if a.source == v)
        for w in (1, 2):
            if w not in in_w:
                arrows.append(Arrow(next_arrow, next_node, v, w, None))
                next_arrow += 1
                next_node += 1
        for w in (1, 2):
            if w not in out_w:
                arrows.append(Arrow(next_arrow, v, next_node, w, None))
                next_arrow += 1
                next_node += 1
    nodes = tuple(dict.fromkeys(list(q.nodes) + sorted(
        ({a.source for a in arrows} | {a.target for a in arrows}) - set(q.nodes)
    )))
    bq = Quiver(nodes, tuple(arrows), _weight_relations(arrows))
    return BlossomQuiver(bq, tuple(q.nodes))


@dataclass(frozen=True)
class Walk:
    """A word in the blossoming quiver with its vertex trail."""

    vertices: tuple[VertexId, ...]
    letters: tuple[Letter, ...]

    def reversed(self) -> "Walk":
        return Walk(tuple(reversed(self.vertices)), _inverse(self.letters))


def _walk_from_letters(q: Quiver, letters: Sequence[Letter]) -> Walk:
    verts = [_letter_ends(q, letters[0])[0]]
    for lt in letters:
        s, t = _letter_ends(q, lt)
        assert s == verts[-1]
        verts.append(t)
    return Walk(tuple(verts), tuple(letters))


def _front_candidates(q: Quiver, letters: list[Letter], direct: bool) -> list[Letter]:
    v = _letter_ends(q, letters[0])[0]
    pool = q.arrows_into(v) if direct else q.arrows_from(v)
    return [
        (arr.id, 1 if direct else -1)
        for arr in sorted(pool, key=lambda a: a.id)
        if _letters_ok(q, (arr.id, 1 if direct else -1), letters[0])
    ]


def _back_candidates(q: Quiver, letters: list[Letter], direct: bool) -> list[Letter]:
    v = _letter_ends(q, letters[-1])[1]
    pool = q.arrows_from(v) if direct else q.arrows_into(v)
    return [
        (arr.id, 1 if direct else -1)
        for arr in sorted(pool, key=lambda a: a.id)
        if _letters_ok(q, letters[-1], (arr.id, 1 if direct else -1))
    ]


def _extend_front(q: Quiver, letters: list[Letter], direct: bool) -> None:
    """Prepend letters of one kind while a (unique) valid extension exists."""
    while True:
        cands = _front_candidates(q, letters, direct)
        if not cands:
            return
        assert len(cands) == 1, "gentle quivers admit unique extensions"
        letters.insert(0, cands[0])


def _extend_back(q: Quiver, letters: list[Letter], direct: bool) -> None:
    while True:
        cands = _back_candidates(q, letters, direct)
        if not cands:
            return
        assert len(cands) == 1, "gentle quivers admit unique extensions"
        letters.append(cands[0])


def extend_string(bq: BlossomQuiver, obj: StringWord) -> Walk:
    """Blossom extension: every object becomes a maximal mixed string."""
    q = bq.quiver
    if obj.kind == "word":
        letters = list(obj.letters)
        front = _front_candidates(q, letters, direct=False)  # exactly one inverse
        assert len(front) == 1, "gentle quivers admit unique extensions"
        letters.insert(0, front[0])
        _extend_front(q, letters, direct=True)
        back = _back_candidates(q, letters, direct=True)  # exactly one arrow
        assert len(back) == 1, "gentle quivers admit unique extensions"
        letters.append(back[0])
        _extend_back(q, letters, direct=False)
        return _walk_from_letters(q, tuple(letters))
    if obj.kind == "const":
        v = obj.vertex
        outs = sorted(q.arrows_from(v), key=lambda a: a.id)
        assert len(outs) == 2
        letters = [(outs[0].id, -1), (outs[1].id, 1)]
        _extend_front(q, letters, direct=True)
        _extend_back(q, letters, direct=False)
        return _walk_from_letters(q, tuple(letters))
    # shifted marker: arrows before v, inverse arrows after
    v = obj.vertex
    ins = sorted(q.arrows_into(v), key=lambda a: a.id)
    assert len(ins) == 2
    letters = [(ins[0].id, 1), (ins[1].id, -1)]
    _extend_front(q, letters, direct=True)
    _extend_back(q, letters, direct=False)
    return _walk_from_letters(q, tuple(letters))


# -- tau-rigidity --------------------------------------------------------------------


def obstruction_walks(w_out: Walk, w_in: Walk) -> list[Walk]:
    """Common substrings with both w_out letters leaving and w_in letters entering."""
    found = []
    for a in range(1, len(w_out.vertices) - 1):
        for b in range(a, len(w_out.vertices) - 1):
            if w_out.letters[a - 1][1] != -1 or w_out.letters[b][1] != 1:
                continue
            seg_v = w_out.vertices[a : b + 1]
            seg_l = w_out.letters[a:b]
            for cand in (w_in, w_in.reversed()):
                for c in range(1, len(cand.vertices) - 1):
                    d = c + (b - a)
                    if d > len(cand.vertices) - 2:
                        continue
                    if cand.letters[c - 1][1] != 1 or cand.letters[d][1] != -1:
                        continue
                    if cand.vertices[c : d + 1] == seg_v and cand.letters[c:d] == seg_l:
                        found.append(Walk(seg_v, seg_l))
    return found


def _directed_obstruction(w_out: Walk, w_in: Walk) -> bool:
    return bool(obstruction_walks(w_out, w_in))


def tau_rigid_pair(bq: BlossomQuiver, o1: StringWord, o2: StringWord) -> bool:
    """No common substring is a target in one extension and a source in the other."""
    w1 = extend_string(bq, o1)
    w2 = extend_string(bq, o2)
    return not (_directed_obstruction(w1, w2) or _directed_obstruction(w2, w1))


def support_tau_tilting(bq: BlossomQuiver, objects: Sequence[StringWord]) -> list[tuple[int, ...]]:
    """Maximal collections of pairwise tau-rigid objects (as index tuples)."""
    n = len(objects)
    walks = [extend_string(bq, o) for o in objects]
    adj = [0] * n
    for i in range(n):
        if _directed_obstruction(walks[i], walks[i]):
            raise ConsistencyError(
                "objects-self-rigid", f"object {objects[i]} is not tau-rigid"
            )
        for j in range(i + 1, n):
            if not (
                _directed_obstruction(walks[i], walks[j])
                or _directed_obstruction(walks[j], walks[i])
            ):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    out: list[tuple[int, ...]] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            members = []
            m = r
            while m:
                v = (m & -m).bit_length() - 1
                m &= m - 1
                members.append(v)
            out.append(tuple(members))
            return
        pool = p | x
        pivot = max(
            range(n), key=lambda v: (p & adj[v]).bit_count() if (pool >> v) & 1 else -1
        )
        cand = p & ~adj[pivot]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    expand(0, (1 << n) - 1, 0)
    out.sort()
    return out


# -- exports ---------------------------------------------------------------------


def quiver_to_dot(q: Quiver) -> str:
    """DOT rendering; relations appear as dashed two-arrow annotations."""
    lines = ["digraph quiver {"]
    for v in q.nodes:
        lines.append(f"  v{v};")
    for a in q.arrows:
        lines.append(f'  v{a.source} -> v{a.target} [label="a{a.id}"];')
    for a1, a2 in sorted(q.relations):
        s = q.arrow(a1).source
        t = q.arrow(a2).target
        lines.append(
            f'  v{s} -> v{t} [style=dashed, constraint=false, label="a{a1}a{a2}=0"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def strings_to_json(objects: Sequence[StringWord]) -> str:
    """Strings as JSON arrays of signed arrow ids (one-based, so the sign
    survives arrow id zero); constant and shifted markers keep their vertex."""
    import json

    out = []
    for o in objects:
        if o.kind == "word":
            out.append({"kind": "word", "letters": [(a + 1) * e for a, e in o.letters]})
        else:
            out.append({"kind": o.kind, "vertex": o.vertex})
    return json.dumps(out)
