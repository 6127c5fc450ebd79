"""Separations, chunk decompositions, the subdivided graph, CNVA generators.

A separating vertex (edge) is one whose removal (removal of both
endpoints) leaves at least two components; a chunk is a maximal
connected full subgraph that no separation splits.  Chunks meet, if at
all, along a single separating edge or vertex, so a separating edge may
lie in two chunks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx

from .defgraph import DomainError, EdgeKey, LabelledGraph, edge_key


@dataclass(frozen=True)
class Separations:
    separating_vertices: FrozenSet[str]
    separating_edges: FrozenSet[EdgeKey]
    cut_edges: FrozenSet[EdgeKey]
    even_terminal_edges: FrozenSet[EdgeKey]

    def to_json(self, g: LabelledGraph) -> dict:
        def edges(es):
            return sorted(sorted(e, key=g.index) for e in es)

        return {
            "separating_vertices": sorted(self.separating_vertices, key=g.index),
            "separating_edges": edges(self.separating_edges),
            "cut_edges": edges(self.cut_edges),
            "even_terminal_edges": edges(self.even_terminal_edges),
        }


def separations(g: LabelledGraph) -> Separations:
    """Separating vertices/edges, bridges, and even-labelled terminal edges."""
    if not g.is_connected():
        raise DomainError("separations: graph must be connected")
    sep_v = frozenset(
        v for v in g.vertices if len(g.components(frozenset((v,)))) >= 2
    )
    sep_e = frozenset(
        e for e in g.edges if len(g.components(e)) >= 2
    )
    cut = set()
    for u, v, _m in g.edge_list():
        # bridge: removing the edge (*not* its endpoints) separates u from v
        seen = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if {x, y} == {u, v}:
                    continue
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if v not in seen:
            cut.add(edge_key(u, v))
    even_term = frozenset(
        e
        for e, m in g.edges.items()
        if m % 2 == 0 and any(g.degree(v) == 1 for v in e)
    )
    return Separations(sep_v, sep_e, frozenset(cut), even_term)


# ---------------------------------------------------------------------------
# Chunks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chunk:
    vertices: Tuple[str, ...]
    edges: FrozenSet[EdgeKey]
    solid: bool

    def vertex_set(self) -> FrozenSet[str]:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class ChunkDecomposition:
    chunks: Tuple[Chunk, ...]
    N: int
    R: int
    adjacency: Tuple[dict, ...]  # which chunks share which separating edge/vertex

    def chunk_of_edge(self, e: EdgeKey) -> List[int]:
        return [i for i, c in enumerate(self.chunks) if e in c.edges]

    def to_json(self, g: LabelledGraph) -> dict:
        return {
            "chunks": [
                {
                    "vertices": list(c.vertices),
                    "edges": sorted(sorted(e, key=g.index) for e in c.edges),
                    "solid": c.solid,
                }
                for c in self.chunks
            ],
            "N": self.N,
            "R": self.R,
            "adjacency": list(self.adjacency),
        }


def _separation_sides(g: LabelledGraph, removed: FrozenSet[str]) -> List[FrozenSet[str]]:
    comps = g.components(removed)
    return [c | removed for c in comps]


def _all_separations(g: LabelledGraph, sep: Separations) -> List[Tuple[FrozenSet[str], List[FrozenSet[str]]]]:
    out = []
    for v in sorted(sep.separating_vertices, key=g.index):
        rm = frozenset((v,))
        out.append((rm, _separation_sides(g, rm)))
    for e in sep.separating_edges:
        out.append((e, _separation_sides(g, e)))
    return out


def _pieces(g: LabelledGraph, seps) -> List[FrozenSet[str]]:
    """Candidate chunks: per-edge intersection of the containing sides.

    An edge not contained in the removed set T lies in a unique side of
    the separation at T; the separating edge itself lies in every side,
    so both of its one-component sides are tried as branches.
    """
    candidates: Set[FrozenSet[str]] = set()
    full = frozenset(g.vertices)
    for e in g.edges:
        base = full
        branches: List[FrozenSet[str]] = []
        for removed, sides in seps:
            if e <= removed:
                branches = sides
                continue
            anchor = next(iter(e - removed))
            side = next(s for s in sides if anchor in s)
            base &= side
        for start in branches or [full]:
            verts = base & start
            u, v = tuple(e)
            if u not in verts or v not in verts:
                continue
            sub = g.full_subgraph(verts)
            comp = next(c for c in sub.components() if u in c)
            candidates.add(comp)
    # keep only maximal vertex sets
    maximal = [
        c for c in candidates if not any(c < d for d in candidates)
    ]
    return sorted(maximal, key=lambda c: tuple(sorted(c, key=g.index)))


def _build_chunks(g: LabelledGraph, piece_sets: List[FrozenSet[str]]) -> List[Chunk]:
    out = []
    for verts in piece_sets:
        sub = g.full_subgraph(verts)
        solid = len(sub.edges) >= len(sub.vertices)
        out.append(
            Chunk(
                vertices=tuple(sorted(verts, key=g.index)),
                edges=frozenset(sub.edges),
                solid=solid,
            )
        )
    return out


def chunks(g: LabelledGraph) -> ChunkDecomposition:
    """Chunk decomposition with the counts N and R.

    R splits only along even-labelled separating edges (the Coxeter
    count); N is the number of chunks.
    """
    sep = separations(g)
    seps = _all_separations(g, sep)
    chunk_list = _build_chunks(g, _pieces(g, seps))

    even_seps = [
        (e, _separation_sides(g, e))
        for e in sep.separating_edges
        if g.edges[e] % 2 == 0
    ]
    r_pieces = _pieces(g, even_seps)

    adjacency = []
    for i in range(len(chunk_list)):
        for j in range(i + 1, len(chunk_list)):
            shared = chunk_list[i].vertex_set() & chunk_list[j].vertex_set()
            if not shared:
                continue
            if len(shared) == 2:
                adjacency.append(
                    {"chunks": [i, j], "kind": "edge", "shared": sorted(shared, key=g.index)}
                )
            else:
                adjacency.append(
                    {"chunks": [i, j], "kind": "vertex", "shared": sorted(shared, key=g.index)}
                )
    return ChunkDecomposition(
        chunks=tuple(chunk_list),
        N=len(chunk_list),
        R=len(r_pieces),
        adjacency=tuple(adjacency),
    )


def brute_force_chunks(g: LabelledGraph) -> List[FrozenSet[str]]:
    """Reference oracle: enumerate all connected full subgraphs, filter the
    indecomposable ones against every separation, keep the maximal.

    Independent of the per-edge intersection algorithm in chunks();
    exponential in |V|, intended for graphs of ~8 vertices or fewer.
    """
    sep = separations(g)
    seps = _all_separations(g, sep)
    n = len(g.vertices)
    verts = list(g.vertices)
    candidates = []
    for mask in range(1, 1 << n):
        subset = frozenset(verts[i] for i in range(n) if mask >> i & 1)
        if len(subset) < 2:
            continue
        sub = g.full_subgraph(subset)
        if len(sub.edges) == 0 or not sub.is_connected():
            continue
        ok = True
        for removed, sides in seps:
            rest = subset - removed
            if not rest:
                continue
            if not any(rest <= side for side in sides):
                ok = False
                break
        if ok:
            candidates.append(subset)
    return sorted(
        (c for c in candidates if not any(c < d for d in candidates)),
        key=lambda c: tuple(sorted(c, key=g.index)),
    )


# ---------------------------------------------------------------------------
# The subdivided graph and CNVA generators
# ---------------------------------------------------------------------------

def mid_node(g: LabelledGraph, e: EdgeKey) -> tuple:
    u, v = sorted(e, key=g.index)
    return ("mid", u, v)


def vert_node(v: str) -> tuple:
    return ("vert", v)


def hat_graph(g: LabelledGraph) -> nx.Graph:
    """Full subgraph of the first subdivision spanned by the edge midpoints
    and the non-terminal original vertices.

    Midpoints carry kind="V", internal vertices kind="F" (matching the
    vertex types of the fixed-set graph they embed into).
    """
    H = nx.Graph()
    for e in g.edges:
        H.add_node(mid_node(g, e), kind="V")
    for v in g.vertices:
        if g.degree(v) >= 2:
            H.add_node(vert_node(v), kind="F")
    for e in g.edges:
        for v in e:
            if g.degree(v) >= 2:
                H.add_edge(mid_node(g, e), vert_node(v))
    return H


def cnva_generators(g: LabelledGraph) -> FrozenSet[str]:
    """Vertices whose cyclic group is CNVA: internal vertices, plus terminal
    vertices of odd-labelled edges (conjugate to the internal endpoint)."""
    if not g.is_connected() or len(g.vertices) < 3:
        raise DomainError("cnva_generators: need a connected graph with >= 3 vertices")
    if any(m < 3 for m in g.edges.values()):
        raise DomainError("cnva_generators: graph must be large type")
    out = set()
    for v in g.vertices:
        if g.degree(v) >= 2:
            out.add(v)
        else:
            (w,) = g.neighbors(v)
            if g.label(v, w) % 2 == 1:
                out.add(v)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Minimal (isometrically embedded) circuits of a plain graph
# ---------------------------------------------------------------------------

def _cycle_canonical(cycle: List) -> Tuple:
    k = cycle.index(min(cycle))
    rot = cycle[k:] + cycle[:k]
    rev = [rot[0]] + rot[1:][::-1]
    return tuple(min(rot, rev))


def is_isometric_cycle(G: nx.Graph, cycle: List) -> bool:
    """Distance along the cycle equals graph distance, for all vertex pairs."""
    L = len(cycle)
    for i in range(L):
        dist = nx.single_source_shortest_path_length(G, cycle[i], cutoff=L // 2)
        for j in range(i + 1, L):
            around = min(j - i, L - (j - i))
            d = dist.get(cycle[j])
            if d is None or d < around:
                return False
    return True


def minimal_circuits(G: nx.Graph, max_len: Optional[int] = None) -> List[Tuple]:
    """All simple cycles of length <= max_len that are isometrically embedded.

    Default max_len is 2|V(G)|, enough for every fundamental minimal circuit.
    """
    if max_len is None:
        max_len = 2 * G.number_of_nodes()
    out = []
    seen = set()
    for cycle in nx.simple_cycles(G, length_bound=max_len):
        canon = _cycle_canonical(list(cycle))
        if canon in seen:
            continue
        seen.add(canon)
        if is_isometric_cycle(G, list(canon)):
            out.append(canon)
    return sorted(out, key=lambda c: (len(c), c))
