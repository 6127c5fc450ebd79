"""Generating sets for Aut(G(Delta)) and Aut(W(Delta)), with verification.

Emits the structured generators: inner automorphisms, graph
automorphisms, global/leaf inversions, Dehn twists along separating
edges and vertices, and (Coxeter side) dihedral twists along cut edges.
Every generator carries an explicit action map (vertex -> image word)
and an inverse action map.

Artin-side verification reduces each relator image by free reduction
interleaved with exact normal forms in the relevant rank-2 parabolic;
Coxeter-side verification delegates to the Tits rewriting system.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import coxeter
from .decomposition import separations
from .defgraph import (
    DomainError,
    EdgeKey,
    GraphBijection,
    LabelledGraph,
    automorphism_group,
    edge_key,
    is_vertex_rigid,
    require_clttf,
    validate,
)
from .dihedral import dihedral_group, is_in_cyclic, unit_residues
from .words import Word, concat, format_word, free_reduce, inverse, prod

ActionMap = Dict[str, Word]


@dataclass(frozen=True)
class AutGenerator:
    kind: str
    data: tuple
    action: Tuple[Tuple[str, Word], ...]
    inverse_action: Tuple[Tuple[str, Word], ...]
    coxeter: bool = False

    def action_map(self) -> ActionMap:
        return dict(self.action)

    def inverse_map(self) -> ActionMap:
        return dict(self.inverse_action)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "coxeter": self.coxeter}
        out.update(self._data_json())
        out["action"] = {v: format_word(w) for v, w in self.action}
        out["inverse_action"] = {v: format_word(w) for v, w in self.inverse_action}
        return out

    def _data_json(self) -> dict:
        if self.kind in ("inner",):
            return {"vertex": self.data[0]}
        if self.kind == "graph":
            return {"vertex_map": dict(self.data[0].vertex_map)}
        if self.kind == "leaf_inversion":
            return {"edge": sorted(self.data[0])}
        if self.kind == "dehn_edge":
            return {"edge": sorted(self.data[0]), "side": sorted(self.data[1])}
        if self.kind == "dehn_vertex":
            return {
                "vertex": self.data[0],
                "side": sorted(self.data[1]),
                "conjugator": format_word(self.data[2]),
            }
        if self.kind == "dihedral_twist":
            return {"edge": sorted(self.data[0]), "r": self.data[1]}
        return {}


def _action(g: LabelledGraph, images: ActionMap) -> Tuple[Tuple[str, Word], ...]:
    return tuple((v, tuple(images.get(v, ((v, 1),)))) for v in g.vertices)


def _conjugation_action(g: LabelledGraph, side, word: Word) -> ActionMap:
    return {v: concat(word, ((v, 1),), inverse(word)) for v in side}


def _edge_word(g: LabelledGraph, e: EdgeKey, power: int = 1) -> Word:
    """Canonical word for x_e^power: prod(u,v;m) with u first in declared order."""
    u, v = sorted(e, key=g.index)
    w = prod(u, v, g.edges[e])
    if power < 0:
        w = inverse(w)
        power = -power
    return concat(*([w] * power))


def _z_word(g: LabelledGraph, e: EdgeKey) -> Word:
    u, v = sorted(e, key=g.index)
    k = math.lcm(g.edges[e], 2) // 2
    return tuple(w for _ in range(k) for w in ((u, 1), (v, 1)))


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def inner_generators(g: LabelledGraph) -> List[AutGenerator]:
    out = []
    for u in g.vertices:
        act = _action(g, _conjugation_action(g, g.vertices, ((u, 1),)))
        inv = _action(g, _conjugation_action(g, g.vertices, ((u, -1),)))
        out.append(AutGenerator("inner", (u,), act, inv))
    return out


def graph_auto_generators(g: LabelledGraph) -> List[AutGenerator]:
    gens, _order = automorphism_group(g)
    out = []
    for a in gens:
        mp = a.mapping
        act = _action(g, {v: ((mp[v], 1),) for v in g.vertices})
        inv_mp = {w: v for v, w in mp.items()}
        inv = _action(g, {v: ((inv_mp[v], 1),) for v in g.vertices})
        out.append(AutGenerator("graph", (a,), act, inv))
    return out


def inversion_generators(g: LabelledGraph) -> List[AutGenerator]:
    """The global inversion plus one leaf inversion per even terminal edge;
    these generate Inv(Delta) = (Z/2)^(l+1)."""
    require_clttf(g)
    eps = _action(g, {v: ((v, -1),) for v in g.vertices})
    out = [AutGenerator("global_inversion", (), eps, eps)]
    sep = separations(g)
    for e in sorted(sep.even_terminal_edges, key=lambda e: sorted(g.index(v) for v in e)):
        terminal = [v for v in e if g.degree(v) == 1]
        t = terminal[0]
        (s,) = (v for v in e if v != t)
        img = inverse(((s, 1), (t, 1), (s, 1)))  # (sts)^-1
        act = _action(g, {t: img})
        out.append(AutGenerator("leaf_inversion", (e,), act, act))
    return out


@dataclass(frozen=True)
class CentralizerPresentation:
    """C_G(<s>) = <s> x F(generators); words over the arrows x_e."""

    vertex: str
    generators: Tuple[Tuple[Tuple[EdgeKey, int], ...], ...]
    rank: int

    def expanded(self, g: LabelledGraph) -> List[Word]:
        out = []
        for w in self.generators:
            out.append(concat(*[_edge_word(g, e, sign) for e, sign in w]))
        return out

    def to_json(self, g: LabelledGraph) -> dict:
        def fmt(w):
            parts = []
            for e, sign in w:
                u, v = sorted(e, key=g.index)
                parts.append(f"x[{u}-{v}]" + ("" if sign == 1 else "^-1"))
            return " ".join(parts)

        return {
            "vertex": self.vertex,
            "rank": self.rank,
            "generators": [fmt(w) for w in self.generators],
        }


def centralizer_generators(g: LabelledGraph, s: str) -> CentralizerPresentation:
    """Free generators of C_G(<s>)/<s> from the conjugation groupoid.

    Arrows: per odd edge {r,t} one traversable arrow r->t and one t->r,
    both labelled x_e; per even edge one x_e loop at each endpoint.
    Traversing an arrow contributes its letter on the left of the word.
    """
    require_clttf(g)
    if not g.has_vertex(s):
        raise DomainError(f"no such vertex: {s!r}")
    arcs = []  # (tail, head, edge)
    for u, v, m in g.edge_list():
        e = edge_key(u, v)
        if m % 2 == 1:
            arcs.append((u, v, e))
            arcs.append((v, u, e))
        else:
            arcs.append((u, u, e))
            arcs.append((v, v, e))

    # component of s and BFS tree over non-loop arcs
    paths: Dict[str, Tuple[Tuple[EdgeKey, int], ...]] = {s: ()}
    tree_arcs = set()
    queue = [s]
    while queue:
        u = queue.pop(0)
        for tail, head, e in arcs:
            if tail == head:
                continue
            for a, b in ((tail, head), (head, tail)):
                if a == u and b not in paths:
                    # path letter: arrow traversed tail->head gives +1, reversed -1
                    sign = 1 if (a, b) == (tail, head) else -1
                    paths[b] = ((e, sign),) + paths[a]
                    tree_arcs.add((tail, head, e))
                    queue.append(b)

    def reduce_x(word):
        out = []
        for e, sign in word:
            if out and out[-1][0] == e and out[-1][1] == -sign:
                out.pop()
            else:
                out.append((e, sign))
        return tuple(out)

    gens = []
    n_arcs_in_comp = 0
    for tail, head, e in arcs:
        in_comp = tail in paths
        if not in_comp:
            continue
        n_arcs_in_comp += 1
        if (tail, head, e) in tree_arcs:
            continue
        # word = P_head^-1 . x_e . P_tail  (left-accumulated tree paths)
        p_tail = paths[tail]
        p_head = paths[head]
        word = reduce_x(
            tuple((e2, -s2) for e2, s2 in reversed(p_head)) + ((e, 1),) + p_tail
        )
        gens.append(word)
    rank = n_arcs_in_comp - len(paths) + 1
    assert rank == len(gens)
    return CentralizerPresentation(vertex=s, generators=tuple(gens), rank=rank)


def dehn_twist_generators(g: LabelledGraph) -> List[AutGenerator]:
    """Nondegenerate Dehn twists: per separating edge and side, conjugation
    by z_e; per separating vertex, side and centralizer free generator,
    conjugation by that generator."""
    require_clttf(g)
    sep = separations(g)
    out = []
    for e in sorted(sep.separating_edges, key=lambda e: sorted(g.index(v) for v in e)):
        z = _z_word(g, e)
        zinv = inverse(z)
        for side in sorted(g.components(e), key=lambda c: min(g.index(v) for v in c)):
            act = _action(g, _conjugation_action(g, side, z))
            inv = _action(g, _conjugation_action(g, side, zinv))
            out.append(AutGenerator("dehn_edge", (e, side), act, inv))
    for v in sorted(sep.separating_vertices, key=g.index):
        pres = centralizer_generators(g, v)
        words = pres.expanded(g)
        for side in sorted(g.components(frozenset((v,))), key=lambda c: min(g.index(x) for x in c)):
            for w in words:
                act = _action(g, _conjugation_action(g, side, w))
                inv = _action(g, _conjugation_action(g, side, inverse(w)))
                out.append(AutGenerator("dehn_vertex", (v, side, w), act, inv))
    return out


def artin_generators(g: LabelledGraph) -> List[AutGenerator]:
    """The full structured generating set on the Artin side:
    Inn + Aut(Delta) + Inv(Delta) + Dehn twists."""
    return (
        inner_generators(g)
        + graph_auto_generators(g)
        + inversion_generators(g)
        + dehn_twist_generators(g)
    )


def _strip_signs(action: Tuple[Tuple[str, Word], ...]) -> Tuple[Tuple[str, Word], ...]:
    return tuple((v, tuple((name, 1) for name, _ in w)) for v, w in action)


def coxeter_pure_generators(g: LabelledGraph) -> List[AutGenerator]:
    """Pure_W(Delta) generators: dihedral twists along cut edges, plus the
    Coxeter images of the inner and Dehn twist generators."""
    require_clttf(g)
    sep = separations(g)
    out = []
    for e in sorted(sep.cut_edges, key=lambda e: sorted(g.index(v) for v in e)):
        s, t = sorted(e, key=g.index)
        m = g.edges[e]
        # side of s in g minus the (cut) edge e
        seen = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if {x, y} == {s, t} or y in seen:
                    continue
                seen.add(y)
                stack.append(y)
        side = frozenset(seen)
        for r in unit_residues(m):
            # inverse twist parameter: with k = 2r+1 and k' = k^-1 (mod m),
            # r' = -k'r satisfies both 2r'+1 = k' and the side-commutation
            # constraint, so the r'-twist inverts the r-twist exactly.
            k = (2 * r + 1) % m
            r_inv = (-pow(k, -1, m) * r) % m

            def twist_action(rr: int):
                rho = tuple(w for _ in range(rr) for w in ((s, 1), (t, 1)))
                rho_inv = tuple(w for _ in range(rr) for w in ((t, 1), (s, 1)))
                return _action(
                    g, {v: free_reduce(rho + ((v, 1),) + rho_inv) for v in side}
                )

            out.append(
                AutGenerator(
                    "dihedral_twist",
                    (e, r),
                    _strip_signs(twist_action(r)),
                    _strip_signs(twist_action(r_inv)),
                    coxeter=True,
                )
            )
    for gen in inner_generators(g) + dehn_twist_generators(g):
        out.append(
            AutGenerator(
                gen.kind,
                gen.data,
                _strip_signs(gen.action),
                _strip_signs(gen.inverse_action),
                coxeter=True,
            )
        )
    return out


def coxeter_generators(g: LabelledGraph) -> List[AutGenerator]:
    """Pure_W plus graph automorphisms (the Coxeter generating set)."""
    out = coxeter_pure_generators(g)
    for gen in graph_auto_generators(g):
        out.append(
            AutGenerator(
                gen.kind,
                gen.data,
                _strip_signs(gen.action),
                _strip_signs(gen.inverse_action),
                coxeter=True,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Verification: free reduction + exact dihedral normal forms
# ---------------------------------------------------------------------------

def _blocks(g: LabelledGraph, word: Word):
    """Maximal subwords whose letters fit in a single edge of g (>= 2 names)."""
    L = len(word)
    found = []
    i = 0
    while i < L:
        names = {word[i][0]}
        j = i + 1
        edge: Optional[EdgeKey] = None
        while j <= L:
            if j < L:
                nxt = names | {word[j][0]}
                if len(nxt) == 1:
                    j += 1
                    continue
                if len(nxt) == 2:
                    u, v = nxt
                    if g.has_edge(u, v):
                        names = nxt
                        edge = edge_key(u, v)
                        j += 1
                        continue
            break
        if edge is not None:
            # extend left is impossible by construction (i maximal start)
            found.append((i, j, edge))
            i = j
        else:
            i += 1
    return found


def artin_reduce(g: LabelledGraph, word: Word, max_steps: int = 10_000) -> Word:
    """Reduce a word over V(g) by free reduction plus dihedral normal forms.

    Deletes any single-edge block that is trivial in its parabolic G(e),
    and replaces blocks equal to a shorter generator power.  This is a
    semi-decision procedure: a fixpoint other than the empty word means
    "not reduced to the identity by this strategy".
    """
    current = free_reduce(word)
    for _ in range(max_steps):
        if not current:
            return current
        progressed = False
        for i, j, e in _blocks(g, current):
            u, v = sorted(e, key=g.index)
            grp = dihedral_group(g.edges[e])
            names = {u: "s", v: "t"}
            block = tuple((names[n], s) for n, s in current[i:j])
            elem = grp.from_word(block)
            if elem.is_identity():
                current = free_reduce(current[:i] + current[j:])
                progressed = True
                break
            replacement = None
            for gen_name, orig in (("s", u), ("t", v)):
                k = is_in_cyclic(g.edges[e], elem, grp.generator(gen_name))
                if k is not None:
                    if abs(k) < j - i:
                        sign = 1 if k > 0 else -1
                        replacement = tuple((orig, sign) for _ in range(abs(k)))
                    break
            if replacement is not None:
                current = free_reduce(current[:i] + replacement + current[j:])
                progressed = True
                break
        if not progressed:
            return current
    raise DomainError("artin_reduce did not reach a fixpoint")


def apply_action(action: ActionMap, word: Word) -> Word:
    out: list = []
    for name, sign in word:
        img = action[name]
        out.extend(img if sign == 1 else inverse(img))
    return free_reduce(tuple(out))


def compose_actions(g: LabelledGraph, first: ActionMap, second: ActionMap) -> ActionMap:
    """Action of (second after first) on the generators."""
    return {v: apply_action(second, first[v]) for v in g.vertices}


def verify_artin_generator(g: LabelledGraph, gen: AutGenerator):
    """Check every defining relator maps to a word reducing to the identity.

    Returns (ok, failing_relator_or_None).
    """
    action = gen.action_map()
    for u, v, m in g.edge_list():
        relator = concat(prod(u, v, m), inverse(prod(v, u, m)))
        image = apply_action(action, relator)
        if artin_reduce(g, image):
            return False, {"edge": [u, v], "m": m}
    return True, None


def verify_coxeter_generator(g: LabelledGraph, gen: AutGenerator):
    """verify_homomorphism plus inverse-composition identity, via Tits."""
    images = {v: [n for n, _ in w] for v, w in gen.action}
    ok, fail = coxeter.verify_homomorphism(g, g, images)
    if not ok:
        return False, fail
    inv_images = {v: [n for n, _ in w] for v, w in gen.inverse_action}
    composed = coxeter.compose_images(g, images, inv_images)
    if not coxeter.is_identity_map(g, composed):
        return False, {"relator": "gen . gen^-1 != id"}
    return True, None


# ---------------------------------------------------------------------------
# Induced edge permutations and the structure report
# ---------------------------------------------------------------------------

def induced_edge_permutation(g: LabelledGraph, moves: Sequence) -> Dict[EdgeKey, EdgeKey]:
    """Compose the edge bijections of a move sequence returning to g.

    Accepts AutGenerator (inner/inversion/Dehn contribute the identity,
    graph automorphisms their edge maps) and TwistArrow items.
    """
    from .twist import TwistArrow

    perm = {e: e for e in g.edges}
    current = g
    for mv in moves:
        if isinstance(mv, AutGenerator):
            if mv.kind == "graph":
                bij: GraphBijection = mv.data[0]
                emap = bij.edge_map(current)
            else:
                emap = {e: e for e in current.edges}
        elif isinstance(mv, TwistArrow):
            if mv.source.edges != current.edges:
                raise DomainError("moves do not compose: endpoint mismatch")
            emap = mv.edge_map()
            current = mv.target
        else:
            raise DomainError(f"unsupported move: {mv!r}")
        perm = {e: emap[f] for e, f in perm.items()}
    if current.edges != g.edges:
        raise DomainError("move sequence does not return to the base graph")
    return perm


def structure_report(g: LabelledGraph, include_twist_group: bool = True) -> dict:
    """Everything Theorems 1-2 and the Coxeter analogue say about Aut."""
    require_clttf(g)
    from .twist import twist_vertex_group

    sep = separations(g)
    from .decomposition import chunks as chunk_decomposition

    cd = chunk_decomposition(g)
    _gens, aut_order = automorphism_group(g)
    inv_gens = inversion_generators(g)
    l = len(sep.even_terminal_edges)
    rigid, _wit = is_vertex_rigid(g)

    report = {
        "clttf": True,
        "kernel": "Pure x| Inv",
        "inv_rank": l + 1,
        "counts": {"l": l, "N": cd.N, "R": cd.R},
        "aut_delta_order": aut_order,
        "vertex_rigid": rigid,
        "conditional": {},
    }
    no_sep = not sep.separating_vertices and not sep.separating_edges
    if no_sep:
        report["conditional"]["aut"] = "Aut(G) = Inn(G) x| (<eps> x Aut(Delta))"
    if not sep.separating_vertices:
        report["conditional"]["pure"] = f"Pure = G x| Z^{cd.N - 1}"
        report["conditional"]["pure_w"] = f"Pure_W = W x| (Z/2)^{cd.R - 1}"
    if include_twist_group:
        tgens, torder = twist_vertex_group(g)
        report["twist_vertex_group"] = {
            "order": torder,
            "generators": [
                {"-".join(sorted(e, key=g.index)): "-".join(sorted(f, key=g.index)) for e, f in perm.items()}
                for perm in tgens
            ],
        }
    artin = artin_generators(g)
    report["generators"] = {
        "artin": [gen.to_json() for gen in artin],
        "inv_generator_count": len(inv_gens),
    }
    return report
