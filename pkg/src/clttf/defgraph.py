"""Labelled defining graphs: parsing, validation, isomorphism, automorphisms.

A defining graph is a finite simplicial graph whose edges carry integer
labels m >= 2.  Vertices are opaque case-sensitive strings kept in
first-appearance order; that declared order fixes every deterministic
choice made downstream (canonical forms, ShortLex, reports).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple


class ClttfError(Exception):
    """Base class for all toolkit errors."""


class GraphParseError(ClttfError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


class DomainError(ClttfError):
    """A precondition on the mathematical input failed (e.g. not CLTTF)."""


EdgeKey = FrozenSet[str]


def edge_key(u: str, v: str) -> EdgeKey:
    return frozenset((u, v))


class LabelledGraph:
    """Immutable simplicial graph with integer edge labels m >= 2."""

    __slots__ = ("vertices", "edges", "_index", "_adj")

    def __init__(self, vertices: Tuple[str, ...], edges: Dict[EdgeKey, int]):
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise GraphParseError("duplicate vertex declaration")
        adj: Dict[str, Dict[str, int]] = {v: {} for v in vertices}
        for e, m in edges.items():
            pair = sorted(e, key=index.__getitem__)
            if len(pair) != 2:
                raise GraphParseError(f"self-loop at {next(iter(e))!r}")
            u, v = pair
            if u not in index or v not in index:
                raise GraphParseError(f"edge endpoint not declared: {u!r}/{v!r}")
            if not isinstance(m, int) or m < 2:
                raise GraphParseError(f"label {m!r} on edge {u!r}-{v!r} is below 2")
            adj[u][v] = m
            adj[v][u] = m
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "edges", dict(edges))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj", adj)

    def __setattr__(self, *a):  # pragma: no cover - guard only
        raise AttributeError("LabelledGraph is immutable")

    # -- basic queries ------------------------------------------------

    def index(self, v: str) -> int:
        return self._index[v]

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def neighbors(self, v: str) -> Tuple[str, ...]:
        return tuple(sorted(self._adj[v], key=self._index.__getitem__))

    def degree(self, v: str) -> int:
        return len(self._adj[v])

    def label(self, u: str, v: str) -> int:
        return self._adj[u][v]

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, ())

    def edge_list(self) -> List[Tuple[str, str, int]]:
        """Edges as (u, v, m) with u before v in declared order, sorted."""
        out = []
        for e, m in self.edges.items():
            u, v = sorted(e, key=self._index.__getitem__)
            out.append((u, v, m))
        out.sort(key=lambda t: (self._index[t[0]], self._index[t[1]]))
        return out

    def __iter__(self) -> Iterator[str]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LabelledGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.vertices, frozenset(self.edges.items())))

    def __repr__(self) -> str:
        es = ", ".join(f"{u}-{v}:{m}" for u, v, m in self.edge_list())
        return f"LabelledGraph({list(self.vertices)}, {{{es}}})"

    # -- connectivity helpers -----------------------------------------

    def components(self, removed: FrozenSet[str] = frozenset()) -> List[FrozenSet[str]]:
        """Connected components of the graph minus a vertex set."""
        remaining = [v for v in self.vertices if v not in removed]
        seen: set = set()
        comps = []
        for start in remaining:
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y not in removed and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def full_subgraph(self, verts) -> "LabelledGraph":
        vs = tuple(v for v in self.vertices if v in set(verts))
        es = {e: m for e, m in self.edges.items() if e <= set(vs)}
        return LabelledGraph(vs, es)


def graph_from_edges(edges, vertices=()) -> LabelledGraph:
    """Convenience builder: edges as (u, v, m) triples, first-appearance order."""
    order: List[str] = list(vertices)
    seen = set(order)
    emap: Dict[EdgeKey, int] = {}
    for u, v, m in edges:
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                order.append(x)
        if u == v:
            raise GraphParseError(f"self-loop at {u!r}")
        k = edge_key(u, v)
        if k in emap:
            raise GraphParseError(f"duplicate edge {u!r}-{v!r}")
        emap[k] = m
    return LabelledGraph(tuple(order), emap)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def parse_graph(text: str) -> LabelledGraph:
    """Parse the line-based graph format.

    One declaration per line: ``vertex <name>`` or ``edge <u> <v> <m>``;
    ``#`` starts a comment.  Vertex order is first-appearance order.
    """
    order: List[str] = []
    seen = set()
    emap: Dict[EdgeKey, int] = {}

    def declare(name: str):
        if name not in seen:
            seen.add(name)
            order.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        col = raw.index(toks[0]) + 1
        if toks[0] == "vertex":
            if len(toks) != 2:
                raise GraphParseError("expected: vertex <name>", lineno, col)
            declare(toks[1])
        elif toks[0] == "edge":
            if len(toks) != 4:
                raise GraphParseError("expected: edge <u> <v> <m>", lineno, col)
            u, v, mtext = toks[1], toks[2], toks[3]
            try:
                m = int(mtext)
            except ValueError:
                raise GraphParseError(f"label {mtext!r} is not an integer", lineno, col)
            if u == v:
                raise GraphParseError(f"self-loop at {u!r}", lineno, col)
            if m < 2:
                raise GraphParseError(f"label {m} is below 2", lineno, col)
            k = edge_key(u, v)
            if k in emap:
                raise GraphParseError(f"duplicate edge {u!r}-{v!r}", lineno, col)
            declare(u)
            declare(v)
            emap[k] = m
        else:
            raise GraphParseError(f"unknown declaration {toks[0]!r}", lineno, col)
    return LabelledGraph(tuple(order), emap)


def parse_graph_json(text: str) -> LabelledGraph:
    """Parse the JSON mirror {"vertices": [...], "edges": [{"u","v","m"}]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"invalid JSON: {exc}", exc.lineno, exc.colno)
    edges = [(e["u"], e["v"], e["m"]) for e in doc.get("edges", [])]
    return graph_from_edges(edges, vertices=doc.get("vertices", []))


def load_graph(text: str) -> LabelledGraph:
    """Dispatch between the line format and the JSON mirror."""
    if text.lstrip().startswith("{"):
        return parse_graph_json(text)
    return parse_graph(text)


def graph_to_json(g: LabelledGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"u": u, "v": v, "m": m} for u, v, m in g.edge_list()],
    }


# ---------------------------------------------------------------------------
# Validation of the graph classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    at_least_3_vertices: bool
    large_type: bool
    triangle_free: bool
    clttf: bool
    two_dimensional: bool
    hyperbolic_type: bool
    offending_witness: Optional[dict]

    def to_json(self) -> dict:
        out = {
            "connected": self.connected,
            "at_least_3_vertices": self.at_least_3_vertices,
            "large_type": self.large_type,
            "triangle_free": self.triangle_free,
            "clttf": self.clttf,
            "two_dimensional": self.two_dimensional,
            "hyperbolic_type": self.hyperbolic_type,
        }
        if self.offending_witness is not None:
            out["witness"] = self.offending_witness
        return out


def _triangles(g: LabelledGraph):
    vs = g.vertices
    for i, u in enumerate(vs):
        for v in g.neighbors(u):
            if g.index(v) <= i:
                continue
            for w in g.neighbors(v):
                if g.index(w) > g.index(v) and g.has_edge(u, w):
                    yield (u, v, w)


def _squares(g: LabelledGraph):
    # 4-cycles u-v-w-x-u, canonical: u is the least index, index(v) < index(x)
    vs = g.vertices
    for u in vs:
        iu = g.index(u)
        for v in g.neighbors(u):
            if g.index(v) <= iu:
                continue
            for w in g.neighbors(v):
                if g.index(w) <= iu or w == u:
                    continue
                for x in g.neighbors(w):
                    if x != v and g.index(x) > g.index(v) and g.has_edge(x, u):
                        yield (u, v, w, x)


def validate(g: LabelledGraph) -> ValidationReport:
    """Check the defining-graph classes: CLTTF, 2-dimensional, hyperbolic type."""
    witness = None
    connected = g.is_connected()
    at_least_3 = len(g.vertices) >= 3

    large_type = True
    for u, v, m in g.edge_list():
        if m < 3:
            large_type = False
            if witness is None:
                witness = {"kind": "small_label_edge", "edge": [u, v], "m": m}
            break

    triangle = next(iter(_triangles(g)), None)
    triangle_free = triangle is None
    if triangle is not None and witness is None:
        witness = {"kind": "triangle", "vertices": list(triangle)}

    two_dimensional = True
    hyperbolic = True
    for (u, v, w) in _triangles(g):
        s = 1 / g.label(u, v) + 1 / g.label(v, w) + 1 / g.label(u, w)
        if s > 1 + 1e-12:
            two_dimensional = False
            if witness is None:
                witness = {"kind": "spherical_triangle", "vertices": [u, v, w]}
        if abs(s - 1) <= 1e-12:
            hyperbolic = False
            if witness is None:
                witness = {"kind": "euclidean_triangle", "vertices": [u, v, w]}
    for (u, v, w, x) in _squares(g):
        labels = [g.label(u, v), g.label(v, w), g.label(w, x), g.label(x, u)]
        if all(m == 2 for m in labels):
            hyperbolic = False
            if witness is None:
                witness = {"kind": "all_2_square", "vertices": [u, v, w, x]}
            break
    if not two_dimensional:
        hyperbolic = False

    return ValidationReport(
        connected=connected,
        at_least_3_vertices=at_least_3,
        large_type=large_type,
        triangle_free=triangle_free,
        clttf=connected and at_least_3 and large_type and triangle_free,
        two_dimensional=two_dimensional,
        hyperbolic_type=hyperbolic,
        offending_witness=witness,
    )


def require_clttf(g: LabelledGraph):
    report = validate(g)
    if not report.clttf:
        raise DomainError(f"graph is not CLTTF: {report.to_json()}")


# ---------------------------------------------------------------------------
# Isomorphism / automorphisms / canonical form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphBijection:
    """A label-preserving bijection between vertex sets."""

    vertex_map: Tuple[Tuple[str, str], ...]

    @property
    def mapping(self) -> Dict[str, str]:
        return dict(self.vertex_map)

    def apply(self, v: str) -> str:
        return self.mapping[v]

    def edge_map(self, source: LabelledGraph) -> Dict[EdgeKey, EdgeKey]:
        mp = self.mapping
        return {e: frozenset(mp[x] for x in e) for e in source.edges}

    def to_json(self) -> dict:
        return {u: v for u, v in self.vertex_map}


def _invariant(g: LabelledGraph, v: str) -> tuple:
    labels = sorted(g.label(v, w) for w in g.neighbors(v))
    return (g.degree(v), tuple(labels))


def _isomorphisms(g1: LabelledGraph, g2: LabelledGraph) -> Iterator[Dict[str, str]]:
    """Backtracking search for label-preserving bijections g1 -> g2.

    Candidates are tried in declared vertex order of g2, so the first
    result is the lexicographically least bijection in that order.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return
    if sorted(g1.edges.values()) != sorted(g2.edges.values()):
        return
    inv1 = {v: _invariant(g1, v) for v in g1.vertices}
    inv2 = {v: _invariant(g2, v) for v in g2.vertices}
    if sorted(inv1.values()) != sorted(inv2.values()):
        return

    n = len(g1.vertices)
    source = list(g1.vertices)
    mapping: Dict[str, str] = {}
    used: set = set()

    def extend(k: int) -> Iterator[Dict[str, str]]:
        if k == n:
            yield dict(mapping)
            return
        u = source[k]
        for w in g2.vertices:
            if w in used or inv1[u] != inv2[w]:
                continue
            ok = True
            for uu in source[:k]:
                if g1.has_edge(u, uu):
                    if not g2.has_edge(w, mapping[uu]) or g1.label(u, uu) != g2.label(w, mapping[uu]):
                        ok = False
                        break
                elif g2.has_edge(w, mapping[uu]):
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = w
            used.add(w)
            yield from extend(k + 1)
            del mapping[u]
            used.discard(w)

    yield from extend(0)


def are_isomorphic(g1: LabelledGraph, g2: LabelledGraph) -> Optional[GraphBijection]:
    """First label-preserving isomorphism g1 -> g2, or None."""
    for mp in _isomorphisms(g1, g2):
        return GraphBijection(tuple((v, mp[v]) for v in g1.vertices))
    return None


def automorphism_group(g: LabelledGraph) -> Tuple[List[GraphBijection], int]:
    """Generators plus the exact order of the label-preserving automorphism group."""
    auts = [mp for mp in _isomorphisms(g, g)]
    order = len(auts)
    identity = {v: v for v in g.vertices}
    perms = [tuple(mp[v] for v in g.vertices) for mp in auts]
    have = {tuple(identity[v] for v in g.vertices)}
    gens: List[GraphBijection] = []
    for mp, perm in zip(auts, perms):
        if perm in have:
            continue
        gens.append(GraphBijection(tuple((v, mp[v]) for v in g.vertices)))
        # close under composition with everything generated so far
        frontier = [perm]
        have.add(perm)
        while frontier:
            p = frontier.pop()
            snapshot = list(have)
            for q in snapshot:
                for r in (
                    tuple(p[g.index(x)] for x in q),
                    tuple(q[g.index(x)] for x in p),
                ):
                    if r not in have:
                        have.add(r)
                        frontier.append(r)
        if len(have) == order:
            break
    return gens, order


def canonical_form(g: LabelledGraph) -> bytes:
    """Canonical byte encoding of the labelled-isomorphism class.

    Exhaustive minimum over vertex orderings with invariant-class pruning;
    meant for desk-scale graphs (roughly <= 12 vertices).
    """
    n = len(g.vertices)
    inv = {v: _invariant(g, v) for v in g.vertices}
    ranks = {val: i for i, val in enumerate(sorted(set(inv.values())))}

    best: List[Optional[tuple]] = [None]

    def encode_step(order: List[str], v: str) -> tuple:
        row = [ranks[inv[v]]]
        for u in order:
            row.append(g.label(u, v) if g.has_edge(u, v) else 0)
        return tuple(row)

    def search(order: List[str], partial: tuple, remaining: List[str]):
        if best[0] is not None and partial > best[0][: len(partial)]:
            return
        if not remaining:
            if best[0] is None or partial < best[0]:
                best[0] = partial
            return
        # only extend by vertices of the minimal remaining invariant rank
        min_rank = min(ranks[inv[v]] for v in remaining)
        for v in remaining:
            if ranks[inv[v]] != min_rank:
                continue
            step = encode_step(order, v)
            cand = partial + step
            if best[0] is not None and cand > best[0][: len(cand)]:
                continue
            order.append(v)
            search(order, cand, [u for u in remaining if u != v])
            order.pop()

    search([], (n,), list(g.vertices))
    assert best[0] is not None
    return json.dumps(best[0]).encode()


def is_vertex_rigid(g: LabelledGraph):
    """Vertex rigidity (VR): no nonidentity automorphism fixes some closed
    neighbourhood {v} u N(v) pointwise.  Returns (rigid, witness)."""
    auts, _ = _all_automorphisms_cached(g)
    for mp in auts:
        if all(mp[v] == v for v in g.vertices):
            continue
        for v in g.vertices:
            closed = (v,) + g.neighbors(v)
            if all(mp[u] == u for u in closed):
                bij = GraphBijection(tuple((u, mp[u]) for u in g.vertices))
                return False, (v, bij)
    return True, None


def _all_automorphisms_cached(g: LabelledGraph):
    auts = list(_isomorphisms(g, g))
    return auts, len(auts)
