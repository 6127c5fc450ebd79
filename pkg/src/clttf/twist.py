"""Edge twists, twist-equivalence orbits, and the isomorphism decision.

Two CLTTF Artin (equally: Coxeter) groups are isomorphic precisely when
their defining graphs are connected by edge twists along odd-labelled
separating edges and label-preserving graph isomorphisms.  The orbit of
a graph under these moves is finite, so the decision procedure is a
breadth-first closure over canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from .defgraph import (
    DomainError,
    EdgeKey,
    GraphBijection,
    LabelledGraph,
    are_isomorphic,
    automorphism_group,
    canonical_form,
    require_clttf,
)
from .decomposition import separations


@dataclass(frozen=True)
class TwistArrow:
    """One move: an edge twist or a label-preserving graph isomorphism."""

    source: LabelledGraph
    target: LabelledGraph
    edge_bijection: Tuple[Tuple[EdgeKey, EdgeKey], ...]
    kind: tuple  # ("edge_twist", edge, side) | ("isomorphism", GraphBijection)

    def edge_map(self) -> Dict[EdgeKey, EdgeKey]:
        return dict(self.edge_bijection)

    def to_json(self) -> dict:
        g = self.source
        if self.kind[0] == "edge_twist":
            _, e, side = self.kind
            return {
                "kind": "edge_twist",
                "edge": sorted(e, key=g.index),
                "side": sorted(side, key=g.index),
            }
        return {"kind": "isomorphism", "vertex_map": self.kind[1].to_json()}


def edge_twist(g: LabelledGraph, e: EdgeKey, side: FrozenSet[str]) -> TwistArrow:
    """Reglue the chosen side of the separation at e with the edge reversed.

    e must be separating with odd label; side must be a nonempty proper
    union of components of g minus the endpoints of e.
    """
    if e not in g.edges:
        raise DomainError(f"no such edge: {sorted(e)}")
    if g.edges[e] % 2 == 0:
        raise DomainError(f"edge twist needs an odd label, got {g.edges[e]}")
    comps = g.components(e)
    if len(comps) < 2:
        raise DomainError(f"edge {sorted(e)} is not separating")
    side = frozenset(side)
    if not side or not side < frozenset().union(*comps) or not all(
        c <= side or not (c & side) for c in comps
    ):
        raise DomainError("side must be a nonempty proper union of components")
    if side == frozenset().union(*comps):
        raise DomainError("side must be a proper subset of the components")

    s, t = sorted(e, key=g.index)
    swap = {s: t, t: s}

    def move(x: str) -> str:
        return swap.get(x, x)

    new_edges: Dict[EdgeKey, int] = {}
    bij = []
    for f, m in g.edges.items():
        if f & side:
            f2 = frozenset(move(x) for x in f)
        else:
            f2 = f
        new_edges[f2] = m
        bij.append((f, f2))
    target = LabelledGraph(g.vertices, new_edges)
    return TwistArrow(
        source=g,
        target=target,
        edge_bijection=tuple(bij),
        kind=("edge_twist", e, side),
    )


def elementary_twists(g: LabelledGraph) -> List[TwistArrow]:
    """All single-component edge twists of g, in deterministic order."""
    sep = separations(g)
    out = []
    for e in sorted(sep.separating_edges, key=lambda e: sorted(g.index(v) for v in e)):
        if g.edges[e] % 2 == 0:
            continue
        comps = sorted(g.components(e), key=lambda c: min(g.index(v) for v in c))
        for side in comps:
            out.append(edge_twist(g, e, side))
    return out


@dataclass
class OrbitArrow:
    src: bytes
    dst: bytes
    twist: TwistArrow  # rep(src) -> h
    iso: Optional[GraphBijection]  # h -> rep(dst), None when h is rep(dst)
    edge_map: Dict[EdgeKey, EdgeKey] = field(default_factory=dict)


@dataclass
class TwistOrbit:
    base: bytes
    states: Dict[bytes, LabelledGraph]
    arrows: List[OrbitArrow]

    def size(self) -> int:
        return len(self.states)

    def to_json(self) -> dict:
        order = sorted(self.states)
        names = {key: i for i, key in enumerate(order)}
        from .defgraph import graph_to_json

        return {
            "size": len(order),
            "base": names[self.base],
            "states": [graph_to_json(self.states[key]) for key in order],
            "arrows": [
                {
                    "src": names[a.src],
                    "dst": names[a.dst],
                    "move": a.twist.to_json(),
                }
                for a in self.arrows
            ],
        }


def _compose_edge_maps(first: Dict[EdgeKey, EdgeKey], second: Dict[EdgeKey, EdgeKey]):
    return {e: second[f] for e, f in first.items()}


def twist_orbit(g: LabelledGraph, max_states: int = 10_000) -> TwistOrbit:
    """Breadth-first closure of g under elementary edge twists, up to
    label-preserving isomorphism."""
    require_clttf(g)
    base = canonical_form(g)
    states = {base: g}
    arrows: List[OrbitArrow] = []
    queue = [base]
    while queue:
        key = queue.pop(0)
        rep = states[key]
        for tw in elementary_twists(rep):
            h = tw.target
            hkey = canonical_form(h)
            if hkey not in states:
                if len(states) >= max_states:
                    raise DomainError(f"twist orbit exceeded {max_states} states")
                states[hkey] = h
                queue.append(hkey)
                iso = None
            else:
                target_rep = states[hkey]
                iso = are_isomorphic(h, target_rep)
                assert iso is not None
                if all(u == v for u, v in iso.vertex_map):
                    iso = None
            emap = tw.edge_map()
            if iso is not None:
                emap = _compose_edge_maps(emap, iso.edge_map(h))
            arrows.append(OrbitArrow(src=key, dst=hkey, twist=tw, iso=iso, edge_map=emap))
    return TwistOrbit(base=base, states=states, arrows=arrows)


def groups_isomorphic(
    g1: LabelledGraph, g2: LabelledGraph
) -> Tuple[bool, Optional[List[TwistArrow]]]:
    """Decide G(g1) iso G(g2) (equally W(g1) iso W(g2)); on success return a
    witness list of moves from g1 to g2."""
    require_clttf(g1)
    require_clttf(g2)
    orbit = twist_orbit(g1)
    target = canonical_form(g2)
    if target not in orbit.states:
        return False, None

    # shortest arrow path base -> target in the orbit graph
    parent: Dict[bytes, Optional[OrbitArrow]] = {orbit.base: None}
    queue = [orbit.base]
    while queue and target not in parent:
        key = queue.pop(0)
        for a in orbit.arrows:
            if a.src == key and a.dst not in parent:
                parent[a.dst] = a
                queue.append(a.dst)
    path: List[OrbitArrow] = []
    key = target
    while parent[key] is not None:
        a = parent[key]
        path.append(a)
        key = a.src
    path.reverse()

    # replay the moves concretely from g1
    moves: List[TwistArrow] = []
    current = g1
    for a in path:
        _, e, side = a.twist.kind
        tw = edge_twist(current, e, side)
        moves.append(tw)
        current = tw.target
        if a.iso is not None:
            mp = a.iso.mapping
            target_rep = orbit.states[a.dst]
            moves.append(
                TwistArrow(
                    source=current,
                    target=target_rep,
                    edge_bijection=tuple(a.iso.edge_map(current).items()),
                    kind=("isomorphism", a.iso),
                )
            )
            current = target_rep
    final = are_isomorphic(current, g2)
    assert final is not None
    if any(u != v for u, v in final.vertex_map) or current.edges != g2.edges:
        moves.append(
            TwistArrow(
                source=current,
                target=g2,
                edge_bijection=tuple(final.edge_map(current).items()),
                kind=("isomorphism", final),
            )
        )
    return True, moves


def _perm_from_map(edge_order: List[EdgeKey], emap: Dict[EdgeKey, EdgeKey]) -> tuple:
    pos = {e: i for i, e in enumerate(edge_order)}
    return tuple(pos[emap[e]] for e in edge_order)


def twist_vertex_group(g: LabelledGraph):
    """The subgroup of Sym(E(g)) generated by twist loops at g and graph
    automorphisms throughout the orbit; returns (generators, order).

    Generators are edge permutations (dicts); the order is computed by
    closure enumeration.
    """
    orbit = twist_orbit(g)
    edge_order = sorted(g.edges, key=lambda e: sorted(g.index(v) for v in e))

    # spanning tree of the orbit graph with composed edge maps base -> state
    tree: Dict[bytes, Dict[EdgeKey, EdgeKey]] = {orbit.base: {e: e for e in g.edges}}
    queue = [orbit.base]
    while queue:
        key = queue.pop(0)
        for a in orbit.arrows:
            if a.src == key and a.dst not in tree:
                tree[a.dst] = _compose_edge_maps(tree[key], a.edge_map)
                queue.append(a.dst)

    def inv_map(emap):
        return {v: k for k, v in emap.items()}

    raw_gens: List[Dict[EdgeKey, EdgeKey]] = []
    # graph automorphisms of every state, conjugated back to the base
    for key, rep in orbit.states.items():
        gens, _order = automorphism_group(rep)
        for a in gens:
            amap = a.edge_map(rep)
            to_state = tree[key]
            raw_gens.append(
                _compose_edge_maps(_compose_edge_maps(to_state, amap), inv_map(to_state))
            )
    # loops: every arrow composed against the tree paths
    for a in orbit.arrows:
        loop = _compose_edge_maps(
            _compose_edge_maps(tree[a.src], a.edge_map), inv_map(tree[a.dst])
        )
        raw_gens.append(loop)

    identity = tuple(range(len(edge_order)))
    perms = {identity}
    gens_kept: List[Dict[EdgeKey, EdgeKey]] = []
    gen_perms: List[tuple] = []
    for emap in raw_gens:
        p = _perm_from_map(edge_order, emap)
        if p not in perms:
            gens_kept.append(emap)
            gen_perms.append(p)
            frontier = [p]
            perms.add(p)
            while frontier:
                q = frontier.pop()
                for r in list(perms):
                    for comp in (
                        tuple(q[i] for i in r),
                        tuple(r[i] for i in q),
                    ):
                        if comp not in perms:
                            perms.add(comp)
                            frontier.append(comp)
    return gens_kept, len(perms)
