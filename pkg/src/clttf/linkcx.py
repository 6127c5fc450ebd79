"""Finite combinatorial models: fundamental region, rank-2 vertex links,
and the Coxeter fixed-set graph Theta_W on a ball.

The link of a rank-2 vertex is the coset graph of G(e): vertices are
cosets gS, gT of the two generator subgroups, and there is one edge gE
per group element.  Simple circuits through E of syllable length 2m
correspond to the balanced relator words, which is what the girth,
classification and rigidity counts check.

Theta_W is the bipartite graph with V-vertices the cosets wW_e and
F-vertices the reflections conjugate to CNVA generators (the infinite
hyperplanes); built here on the ball of a chosen radius, with a safe
zone inside which distances are trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx

from . import coxeter
from .decomposition import (
    chunks as chunk_decomposition,
    cnva_generators,
    hat_graph,
    mid_node,
    minimal_circuits,
    vert_node,
)
from .defgraph import DomainError, EdgeKey, LabelledGraph, edge_key, require_clttf
from .dihedral import DihedralElement, DihedralGroup, dihedral_group, is_in_cyclic
from .words import prod


# ---------------------------------------------------------------------------
# Fundamental region K
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalRegion:
    vertices: Tuple[tuple, ...]
    squares: Tuple[Tuple[tuple, tuple, tuple, tuple], ...]

    def to_json(self) -> dict:
        def name(node):
            return ":".join(str(x) for x in node)

        return {
            "vertices": [name(v) for v in self.vertices],
            "squares": [[name(x) for x in sq] for sq in self.squares],
        }


def build_K(g: LabelledGraph) -> FundamentalRegion:
    """Squared complex with one square (V0, Vs, Ve, Vt) per edge e = {s,t}.

    The link of the base vertex V0 is the defining graph itself; this is
    asserted during construction.
    """
    base = ("base",)
    verts: List[tuple] = [base]
    verts += [("v", s) for s in g.vertices]
    verts += [("e",) + tuple(sorted(e, key=g.index)) for e in g.edges]
    squares = []
    for u, v, _m in g.edge_list():
        squares.append((base, ("v", u), ("e", u, v), ("v", v)))
    # link of V0: corners at V0 join ("v", u) -- ("v", v) per square
    link = nx.Graph()
    link.add_nodes_from(("v", s) for s in g.vertices)
    for sq in squares:
        link.add_edge(sq[1], sq[3])
    expected = nx.Graph()
    expected.add_nodes_from(("v", s) for s in g.vertices)
    for u, v, _m in g.edge_list():
        expected.add_edge(("v", u), ("v", v))
    assert nx.utils.graphs_equal(link, expected), "link of V0 is not the defining graph"
    return FundamentalRegion(vertices=tuple(verts), squares=tuple(squares))


# ---------------------------------------------------------------------------
# Rank-2 vertex link ball
# ---------------------------------------------------------------------------

ElemKey = Tuple[tuple, int]  # (gamma, ell)


def _coset_canonical(grp: DihedralGroup, g: DihedralElement, gen_name: str) -> ElemKey:
    """Canonical element of the coset g<u>: ShortLex-least gamma over g u^j.

    Unique because u has infinite order in Gamma, so distinct exponents
    give distinct gamma words; the minimizing exponent recovers a
    canonical representative element.
    """
    u = grp.generator(gen_name)
    if not grp.odd and gen_name == "s":
        # <s> is the infinite factor: strip a trailing A-syllable
        if g.gamma and g.gamma[-2] == 0:
            e = g.gamma[-1]
            return (g.gamma[:-2], g.ell - e)
        return (g.gamma, g.ell)
    window = len(g.gamma) // 2 + 2
    best: Optional[Tuple[int, tuple, int]] = None
    cur = g * (u ** (-window))
    for j in range(-window, window + 1):
        cand = (len(cur.gamma), cur.gamma, cur.ell)
        if best is None or cand < best:
            best = cand
        cur = cur * u
    return (best[1], best[2])


@dataclass
class LinkBall:
    m: int
    radius: int
    elements: Dict[ElemKey, DihedralElement]
    depth: Dict[ElemKey, int]
    ends: Dict[ElemKey, Tuple[tuple, tuple]]  # edge -> (S-vertex key, T-vertex key)
    incidence: Dict[tuple, List[ElemKey]]
    base: ElemKey

    def vertex_count(self) -> int:
        return len(self.incidence)

    def edge_count(self) -> int:
        return len(self.elements)


def link_ball(m: int, R: int) -> LinkBall:
    """Ball of the link graph around the base edge E: all edges gE with g a
    product of at most R letters, plus their cosets, deduplicated exactly."""
    if m < 3 or R < 1:
        raise DomainError("link_ball needs m >= 3 and R >= 1")
    grp = dihedral_group(m)
    gens = [grp.generator(n, s) for n in ("s", "t") for s in (1, -1)]
    ident = grp.identity()
    base = (ident.gamma, ident.ell)
    elements = {base: ident}
    depth = {base: 0}
    frontier = [ident]
    for d in range(1, R + 1):
        nxt = []
        for g in frontier:
            for gen in gens:
                h = g * gen
                key = (h.gamma, h.ell)
                if key not in elements:
                    elements[key] = h
                    depth[key] = d
                    nxt.append(h)
        frontier = nxt
    ends: Dict[ElemKey, Tuple[tuple, tuple]] = {}
    incidence: Dict[tuple, List[ElemKey]] = {}
    for key, g in elements.items():
        sk = ("S",) + _coset_canonical(grp, g, "s")
        tk = ("T",) + _coset_canonical(grp, g, "t")
        ends[key] = (sk, tk)
        incidence.setdefault(sk, []).append(key)
        incidence.setdefault(tk, []).append(key)
    for lst in incidence.values():
        lst.sort()
    return LinkBall(
        m=m, radius=R, elements=elements, depth=depth, ends=ends,
        incidence=incidence, base=base,
    )


def _circuits_through_base(ball: LinkBall, length: int) -> List[List[ElemKey]]:
    """Simple circuits of the given edge length through the base edge E,
    each returned once as the edge sequence E, e_1, ..., e_{length-1}
    starting on the S side."""
    S0, T0 = ball.ends[ball.base]
    target = length - 1  # path S0 -> T0 avoiding E

    # BFS distances to T0 in the graph minus the base edge
    dist: Dict[tuple, int] = {T0: 0}
    queue = [T0]
    while queue:
        v = queue.pop(0)
        for ekey in ball.incidence[v]:
            if ekey == ball.base:
                continue
            a, b = ball.ends[ekey]
            w = b if a == v else a
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)

    out: List[List[ElemKey]] = []
    path_edges: List[ElemKey] = []
    seen_vertices = {S0}

    def dfs(v: tuple, remaining: int):
        if remaining == 0:
            if v == T0:
                out.append(list(path_edges))
            return
        d = dist.get(v)
        if d is None or d > remaining:
            return
        for ekey in ball.incidence[v]:
            if ekey == ball.base or ekey in path_edges:
                continue
            a, b = ball.ends[ekey]
            w = b if a == v else a
            if w in seen_vertices or (w == T0 and remaining != 1):
                continue
            path_edges.append(ekey)
            if w != T0:
                seen_vertices.add(w)
            dfs(w, remaining - 1)
            if w != T0:
                seen_vertices.discard(w)
            path_edges.pop()

    dfs(S0, target)
    return [[ball.base] + p for p in out]


def girth_through_base(ball: LinkBall) -> Optional[int]:
    """Edge length of the shortest simple circuit through E in the ball."""
    S0, T0 = ball.ends[ball.base]
    dist = {S0: 0}
    queue = [S0]
    while queue:
        v = queue.pop(0)
        if v == T0:
            return dist[v] + 1
        for ekey in ball.incidence[v]:
            if ekey == ball.base:
                continue
            a, b = ball.ends[ekey]
            w = b if a == v else a
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return None


def _syllables(ball: LinkBall, circuit: List[ElemKey]) -> List[Tuple[str, int]]:
    """Alternating syllable sequence (generator, exponent) of a circuit
    through E, read from the S side."""
    grp = dihedral_group(ball.m)
    sylls = []
    prev = grp.identity()
    side = "s"
    for ekey in circuit[1:] + [ball.base]:
        cur = ball.elements[ekey]
        step = prev.inverse() * cur
        gen = grp.generator(side)
        j = is_in_cyclic(ball.m, step, gen)
        assert j is not None and j != 0, "circuit step is not a generator power"
        sylls.append((side, j))
        prev = cur
        side = "t" if side == "s" else "s"
    return sylls


def balanced_families(m: int, max_n: int) -> Dict[tuple, Tuple[str, int]]:
    """Canonical cyclic forms of the balanced length-2m relator words.

    Families (up to swapping the roles of s and t) for n != 0:
      m even:  s^n t ... s t (t s ... t s^n)^-1
      m odd:   s^n t ... t s (t s ... s t^n)^-1
    """
    table: Dict[tuple, Tuple[str, int]] = {}

    def word(first: str, n: int) -> List[Tuple[str, int]]:
        second = "t" if first == "s" else "s"
        u = [(first, n)] + [((second, first)[k % 2], 1) for k in range(m - 1)]
        # the closing power sits on s for m even and on t for m odd
        last = first if m % 2 == 0 else second
        v = [((second, first)[k % 2], 1) for k in range(m - 1)] + [(last, n)]
        return u + [(name, -e) for name, e in reversed(v)]

    for n in range(1, max_n + 1):
        for nn in (n, -n):
            for first, fam in (("s", "first"), ("t", "second")):
                w = word(first, nn)
                table[_cyclic_canonical(w)] = (f"{fam}", nn)
    return table


def _cyclic_canonical(sylls: Sequence[Tuple[str, int]]) -> tuple:
    """Canonical form of a syllable word up to rotation and inversion."""
    seq = list(sylls)
    cands = []
    for k in range(len(seq)):
        rot = tuple(seq[k:] + seq[:k])
        cands.append(rot)
    inv = [(name, -e) for name, e in reversed(seq)]
    for k in range(len(inv)):
        cands.append(tuple(inv[k:] + inv[:k]))
    return min(cands)


def classify_min_circuits(ball: LinkBall) -> List[dict]:
    """Match every length-2m circuit through E to a balanced family.

    Raises DomainError on an unmatched circuit (the classification lemma
    forbids one; reaching that branch signals an implementation bug).
    """
    m = ball.m
    circuits = _circuits_through_base(ball, 2 * m)
    families = balanced_families(m, max_n=ball.radius + 1)
    out = []
    for c in circuits:
        sylls = _syllables(ball, c)
        key = _cyclic_canonical(sylls)
        if key not in families:
            raise DomainError(f"length-{2*m} circuit matches no balanced family: {sylls}")
        fam, n = families[key]
        out.append({"syllables": sylls, "family": fam, "n": n})
    return out


def rigidity_counts(ball: LinkBall) -> dict:
    """Counting invariants of minimal circuits through E.

    Pairs: how many length-2m circuits contain the corner (E, s^k E);
    triples (over the word-length-2m circuits only): how many contain
    (sE, E, tE) and (sE, E, t^-1 E).
    """
    m = ball.m
    circuits = _circuits_through_base(ball, 2 * m)
    pair_counts: Dict[int, int] = {}
    triple_st = 0
    triple_st_inv = 0
    for c in circuits:
        sylls = _syllables(ball, c)
        first = sylls[0][1]  # exponent k of the first edge s^k E
        pair_counts[first] = pair_counts.get(first, 0) + 1
        if all(abs(e) == 1 for _n, e in sylls):
            # The corner of the circuit at E is the cyclic syllable pair
            # (last, first).  The two corner classes of the balanced words
            # are "st or its inverse" (same sign, m-1 circuits) and
            # "st^-1 or its inverse" (mixed sign, exactly 1), named here by
            # their representative paths (sE,E,tE) and (sE,E,t^-1E).
            last = sylls[-1][1]
            if first == 1 and last == 1:
                triple_st += 1
            if first == 1 and last == -1:
                triple_st_inv += 1
    return {
        "girth_through_E": girth_through_base(ball),
        "n_min_circuits": len(circuits),
        "pair_counts": dict(sorted(pair_counts.items())),
        "triple_sEt": triple_st,
        "triple_sEt_inv": triple_st_inv,
    }


# ---------------------------------------------------------------------------
# The Coxeter fixed-set graph Theta_W on a ball
# ---------------------------------------------------------------------------

VKey = tuple  # ("V", (u, v), minimal-coset-rep nf)
FKey = tuple  # ("F", reflection nf)


@dataclass
class ThetaWBall:
    graph: LabelledGraph
    L: int
    system: "coxeter.CoxeterSystem"
    v_data: Dict[VKey, Tuple[Tuple[str, str], tuple]]  # key -> (edge pair, coset rep)
    f_data: Dict[FKey, tuple]  # key -> reflection nf word
    adj: Dict[tuple, Tuple[tuple, ...]]
    incomplete: FrozenSet[tuple]
    safe_depth: Dict[tuple, int]

    def vertices(self) -> List[tuple]:
        return sorted(self.adj)

    def fundamental_v(self, e: EdgeKey) -> VKey:
        u, v = sorted(e, key=self.graph.index)
        return ("V", (u, v), ())

    def fundamental_f(self, s: str) -> FKey:
        return ("F", (s,))

    def is_safe(self, keys, margin: int) -> bool:
        return all(self.safe_depth.get(k, 0) > margin for k in keys)


def _w_reflections(g: LabelledGraph, e_pair: Tuple[str, str], m: int):
    """The m reflections of the dihedral parabolic on the edge, as words."""
    u, v = e_pair
    return [prod(u, v, 2 * j + 1) for j in range(m)]


def theta_w_ball(g: LabelledGraph, L: int) -> ThetaWBall:
    """Theta_W restricted to the radius-L ball of W(Delta).

    V-vertices: cosets wW_e keyed by the minimal coset representative.
    F-vertices: reflections w s w^-1 for CNVA generators s, keyed by
    normal form.  Edge (wW_e, r) iff the reflection fixes the coset
    vertex, i.e. w^-1 r w lies in W_e.
    """
    require_clttf(g)
    if L < 2:
        raise DomainError("theta_w_ball needs L >= 2")
    sys_ = coxeter.system(g)
    ball_words = sys_.ball_words(L)
    cnva = cnva_generators(g)

    # F-vertices: reflections at CNVA generators
    f_data: Dict[FKey, tuple] = {}
    for w in ball_words:
        rev = tuple(reversed(w))
        for s in sorted(cnva, key=g.index):
            r = sys_.nf_word(w + sys_.encode([s]) + rev)
            f_data.setdefault(("F", sys_.decode(r)), r)

    # V-vertices: minimal coset representatives in the ball
    edge_pairs = [(u, v, m) for u, v, m in g.edge_list()]
    v_data: Dict[VKey, Tuple[Tuple[str, str], tuple]] = {}
    adj: Dict[tuple, Set[tuple]] = {}
    incomplete: Set[tuple] = set()
    for w in ball_words:
        for u, v, m in edge_pairs:
            cu, cv = sys_.encode([u]), sys_.encode([v])
            if len(sys_.reduce_word(w + cu)) < len(w) or len(
                sys_.reduce_word(w + cv)
            ) < len(w):
                continue  # not the minimal representative of its coset
            vkey: VKey = ("V", (u, v), sys_.decode(w))
            v_data[vkey] = ((u, v), w)
            adj.setdefault(vkey, set())
            if len(w) + m > L:
                incomplete.add(vkey)
            rev = tuple(reversed(w))
            for refl in _w_reflections(g, (u, v), m):
                r = sys_.nf_word(w + sys_.encode(refl) + rev)
                fkey: FKey = ("F", sys_.decode(r))
                if fkey in f_data:
                    adj[vkey].add(fkey)
                    adj.setdefault(fkey, set()).add(vkey)
                else:
                    incomplete.add(vkey)
    for fkey in f_data:
        adj.setdefault(fkey, set())

    # safe depth: hop distance to the nearest incomplete vertex
    INF = 10 ** 9
    safe_depth = {k: INF for k in adj}
    queue = [k for k in adj if k in incomplete]
    for k in queue:
        safe_depth[k] = 0
    while queue:
        x = queue.pop(0)
        for y in adj[x]:
            if safe_depth[y] > safe_depth[x] + 1:
                safe_depth[y] = safe_depth[x] + 1
                queue.append(y)

    return ThetaWBall(
        graph=g,
        L=L,
        system=sys_,
        v_data=v_data,
        f_data=f_data,
        adj={k: tuple(sorted(vs)) for k, vs in adj.items()},
        incomplete=frozenset(incomplete),
        safe_depth=safe_depth,
    )


def theta_circuits(ball: ThetaWBall, max_len: int, safe_only: bool = True) -> List[Tuple[tuple, ...]]:
    """Simple circuits of length <= max_len in the ball graph, each once,
    canonically rotated; optionally restricted to the safe zone."""
    margin = max_len // 2
    nodes = sorted(ball.adj)
    out: Set[tuple] = set()
    for start in nodes:
        if safe_only and ball.safe_depth.get(start, 0) <= margin:
            continue
        # distance from start with cutoff for pruning
        dist = {start: 0}
        queue = [start]
        while queue:
            x = queue.pop(0)
            if dist[x] >= max_len // 2:
                continue
            for y in ball.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        path = [start]
        on_path = {start}

        def dfs(x: tuple, steps: int):
            for y in ball.adj[x]:
                if y == start and steps + 1 >= 3:
                    if len(path) % 2 == 0:  # bipartite: even cycles only
                        cyc = _canon_cycle(tuple(path))
                        if cyc[0] == start:
                            out.add(cyc)
                    continue
                if y in on_path or y <= start:
                    continue
                if safe_only and ball.safe_depth.get(y, 0) <= margin:
                    continue
                d = dist.get(y)
                if d is None or d + steps + 1 > max_len - 1:
                    continue
                if steps + 1 >= max_len:
                    continue
                path.append(y)
                on_path.add(y)
                dfs(y, steps + 1)
                on_path.discard(y)
                path.pop()

        dfs(start, 0)
    return sorted(out, key=lambda c: (len(c), c))


def _canon_cycle(cycle: tuple) -> tuple:
    k = cycle.index(min(cycle))
    rot = cycle[k:] + cycle[:k]
    rev = (rot[0],) + tuple(reversed(rot[1:]))
    return min(rot, rev)


def is_isometric_circuit(ball: ThetaWBall, cycle: Sequence[tuple]) -> bool:
    """Cycle distance equals ball-graph distance for every vertex pair."""
    L = len(cycle)
    for i in range(L):
        dist = {cycle[i]: 0}
        queue = [cycle[i]]
        while queue:
            x = queue.pop(0)
            if dist[x] >= L // 2:
                continue
            for y in ball.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        for j in range(i + 1, L):
            around = min(j - i, L - (j - i))
            d = dist.get(cycle[j])
            if d is None or d < around:
                return False
    return True


def _parabolic_words(g: LabelledGraph, e_pair: Tuple[str, str], m: int):
    """All 2m elements of the dihedral parabolic W_e, as plain words."""
    u, v = e_pair
    out = [()]
    for k in range(1, m + 1):
        out.append(tuple((u, v)[i % 2] for i in range(k)))
        if k < m:
            out.append(tuple((v, u)[i % 2] for i in range(k)))
    return out


def identify_basic(ball: ThetaWBall, circuit: Sequence[tuple]):
    """Find w with w^-1 . circuit inside the fundamental subgraph.

    Candidates w range over the coset w1 W_e1 of the first V-vertex.
    Returns (w as CoxeterElement, fundamental circuit) or None.
    """
    sys_ = ball.system
    g = ball.graph
    first_v = next(k for k in circuit if k[0] == "V")
    (u, v), w1 = ball.v_data[first_v]
    m = g.label(u, v)
    for pw in _parabolic_words(g, (u, v), m):
        cand = sys_.nf_word(w1 + sys_.encode(pw))
        ginv = tuple(reversed(cand))
        fund: List[tuple] = []
        ok = True
        for key in circuit:
            if key[0] == "V":
                (a, b), wv = ball.v_data[key]
                moved = sys_.reduce_word(ginv + wv)
                if not set(sys_.decode(moved)) <= {a, b}:
                    ok = False
                    break
                fund.append(mid_node(g, edge_key(a, b)))
            else:
                r = ball.f_data[key]
                moved = sys_.nf_word(ginv + r + cand)
                if len(moved) != 1:
                    ok = False
                    break
                s = sys_.decode(moved)[0]
                if g.degree(s) < 2:
                    ok = False
                    break
                fund.append(vert_node(s))
        if ok:
            return sys_.element(cand), tuple(fund)
    return None


def verify_minimal_equals_basic(ball: ThetaWBall, max_len: int) -> dict:
    """Check, over the safe zone: a circuit is isometrically embedded iff it
    is a translate of a minimal circuit of the fundamental subgraph."""
    hat = hat_graph(ball.graph)
    hat_minimal = {tuple(c) for c in minimal_circuits(hat, max_len)}
    circuits = theta_circuits(ball, max_len, safe_only=True)
    n_minimal = 0
    counterexamples = []
    for c in circuits:
        iso = is_isometric_circuit(ball, c)
        ident = identify_basic(ball, c)
        basic_minimal = False
        if ident is not None:
            _w, fund = ident
            basic_minimal = _cycle_canon_nodes(fund) in hat_minimal
        if iso != basic_minimal:
            counterexamples.append(
                {"circuit": [list(map(str, k)) for k in c], "isometric": iso,
                 "basic_minimal": basic_minimal}
            )
        if iso:
            n_minimal += 1
    return {
        "n_circuits_checked": len(circuits),
        "n_minimal": n_minimal,
        "counterexamples": counterexamples,
    }


def _cycle_canon_nodes(cycle: tuple) -> tuple:
    k = cycle.index(min(cycle))
    rot = cycle[k:] + cycle[:k]
    rev = (rot[0],) + tuple(reversed(rot[1:]))
    return min(rot, rev)


def minimal_theta_circuits(ball: ThetaWBall, max_len: int) -> List[Tuple[tuple, ...]]:
    return [c for c in theta_circuits(ball, max_len, safe_only=True)
            if is_isometric_circuit(ball, c)]


def chunk_key_of(ball: ThetaWBall, circuit: Sequence[tuple]):
    """The chunk of Theta_W containing a minimal circuit, as a vertex-key set.

    The chunk is the translate w.(fundamental chunk) for the witness w of
    identify_basic; its vertex keys are computable exactly."""
    ident = identify_basic(ball, circuit)
    if ident is None:
        return None
    w_elem, fund = ident
    g = ball.graph
    sys_ = ball.system
    w = sys_.encode(w_elem.nf)
    cd = chunk_decomposition(g)
    fund_edges = {
        edge_key(node[1], node[2]) for node in fund if node[0] == "mid"
    }
    chunk = next(c for c in cd.chunks if fund_edges <= c.edges)
    keys: Set[tuple] = set()
    wrev = tuple(reversed(w))
    for e in sorted(chunk.edges, key=lambda e: sorted(g.index(x) for x in e)):
        u, v = sorted(e, key=g.index)
        # minimal representative of the coset w W_e
        rep = w
        improved = True
        while improved:
            improved = False
            for c in (sys_.encode([u]), sys_.encode([v])):
                cand = sys_.reduce_word(rep + c)
                if len(cand) < len(rep):
                    rep = cand
                    improved = True
        keys.add(("V", (u, v), sys_.decode(sys_.nf_word(rep))))
    for s in chunk.vertices:
        if g.degree(s) >= 2:
            r = sys_.nf_word(w + sys_.encode([s]) + wrev)
            keys.add(("F", sys_.decode(r)))
    return frozenset(keys)


def _shared_triples(c1: Sequence[tuple], c2: Sequence[tuple]):
    """Common subpaths (S, V, T) with V a V-vertex and S, T its F-neighbours."""

    def triples(c):
        L = len(c)
        out = set()
        for i, k in enumerate(c):
            if k[0] == "V":
                out.add((frozenset((c[i - 1], c[(i + 1) % L])), k))
        return out

    return triples(c1) & triples(c2)


def chunk_equivalence(
    ball: ThetaWBall,
    c1: Sequence[tuple],
    c2: Sequence[tuple],
    depth: int,
    pool: Optional[List[Tuple[tuple, ...]]] = None,
    max_len: Optional[int] = None,
) -> bool:
    """Bounded search for an elementary-equivalence chain between minimal
    circuits: one step links circuits sharing a subpath (S, V, T) through a
    chain of minimal circuits sharing (S, V_i, T_i) with V_i != V."""
    c1 = _canon_cycle(tuple(c1))
    c2 = _canon_cycle(tuple(c2))
    if pool is None:
        pool = minimal_theta_circuits(ball, max_len or max(len(c1), len(c2)))
    pool = [_canon_cycle(tuple(c)) for c in pool]
    if c1 not in pool or c2 not in pool:
        raise DomainError("chunk_equivalence: circuits must be safe minimal circuits")

    def one_step(a: tuple, b: tuple) -> bool:
        """a ~ b in one step: they share (S, V, T), and some chain of minimal
        circuits from a to b has consecutive members sharing (S, V_i, T_i)
        with V_i != V.  Either endpoint of the shared subpath may play S."""
        if a == b:
            return True
        for pair, vmid in _shared_triples(a, b):
            for s_vertex in pair:

                def tri(c: tuple):
                    return {
                        (p, v) for p, v in _all_triples(c) if s_vertex in p and v != vmid
                    }

                seen = {a}
                queue = [a]
                while queue:
                    x = queue.pop(0)
                    tx = tri(x)
                    if not tx:
                        continue
                    for y in pool:
                        if y in seen:
                            continue
                        if tx & tri(y):
                            if y == b:
                                return True
                            seen.add(y)
                            queue.append(y)
        return False

    if c1 == c2:
        return True
    seen = {c1}
    frontier = [c1]
    for _ in range(depth):
        nxt = []
        for x in frontier:
            for y in pool:
                if y in seen:
                    continue
                if _shared_triples(x, y) and one_step(x, y):
                    if y == c2:
                        return True
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return False


def _all_triples(c: tuple):
    L = len(c)
    out = []
    for i, k in enumerate(c):
        if k[0] == "V":
            out.append((frozenset((c[i - 1], c[(i + 1) % L])), k))
    return out
