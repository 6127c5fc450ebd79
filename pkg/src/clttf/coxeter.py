"""Exact word problem for W(Delta) via Tits rewriting, plus a numeric oracle.

Elements are canonical reduced words (ShortLex-least in the braid-move
orbit of any reduced representative, under the declared vertex order).
The rewriting system is the source of truth; the geometric reflection
representation is numeric-only and serves as an independent cross-check
in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .defgraph import DomainError, LabelledGraph

WordT = Tuple[int, ...]  # internal words: tuples of vertex indices


class OrbitOverflow(DomainError):
    """The braid-move orbit exceeded the configured cap."""


def _strip(word) -> Tuple[str, ...]:
    """Accept plain names or (name, sign) letters; signs vanish in W."""
    out = []
    for w in word:
        out.append(w[0] if isinstance(w, tuple) else w)
    return tuple(out)


@dataclass(frozen=True)
class CoxeterElement:
    """Canonical reduced word for an element of W(Delta)."""

    graph: LabelledGraph
    nf: Tuple[str, ...]

    def length(self) -> int:
        return len(self.nf)

    def __str__(self) -> str:
        return " ".join(self.nf) if self.nf else "1"


class CoxeterSystem:
    """Rewriting context for one defining graph."""

    def __init__(self, graph: LabelledGraph, orbit_cap: int = 1_000_000):
        self.graph = graph
        self.orbit_cap = orbit_cap
        self.n = len(graph.vertices)
        self._name = list(graph.vertices)
        self._idx = {v: i for i, v in enumerate(graph.vertices)}
        self._m: Dict[Tuple[int, int], int] = {}
        for u, v, m in graph.edge_list():
            i, j = self._idx[u], self._idx[v]
            self._m[(i, j)] = m
            self._m[(j, i)] = m
        # braid substitution table: (i, j) -> (pattern, replacement)
        self._moves: List[Tuple[WordT, WordT]] = []
        for (i, j), m in self._m.items():
            pat = tuple((i, j)[k % 2] for k in range(m))
            rep = tuple((j, i)[k % 2] for k in range(m))
            self._moves.append((pat, rep))
        self._reduce_cache: Dict[WordT, WordT] = {}
        self._nf_cache: Dict[WordT, WordT] = {}

    # -- encoding ------------------------------------------------------

    def encode(self, word) -> WordT:
        out = []
        for name in _strip(word):
            if name not in self._idx:
                raise DomainError(f"unknown letter {name!r}")
            out.append(self._idx[name])
        return tuple(out)

    def decode(self, word: WordT) -> Tuple[str, ...]:
        return tuple(self._name[i] for i in word)

    def element(self, word: WordT) -> CoxeterElement:
        return CoxeterElement(self.graph, self.decode(word))

    # -- core rewriting --------------------------------------------------

    @staticmethod
    def _delete_pairs(word: WordT) -> WordT:
        stack: List[int] = []
        for x in word:
            if stack and stack[-1] == x:
                stack.pop()
            else:
                stack.append(x)
        return tuple(stack)

    def _braid_neighbors(self, word: WordT):
        L = len(word)
        for pat, rep in self._moves:
            m = len(pat)
            if m > L:
                continue
            for i in range(L - m + 1):
                if word[i : i + m] == pat:
                    yield word[:i] + rep + word[i + m :]

    def _orbit(self, word: WordT) -> Set[WordT]:
        """Full braid-move orbit of a word (length-preserving moves)."""
        seen = {word}
        stack = [word]
        while stack:
            w = stack.pop()
            for w2 in self._braid_neighbors(w):
                if w2 not in seen:
                    if len(seen) >= self.orbit_cap:
                        raise OrbitOverflow(
                            f"braid orbit exceeded cap {self.orbit_cap} for length {len(word)}"
                        )
                    seen.add(w2)
                    stack.append(w2)
        return seen

    def reduce_word(self, word: WordT) -> WordT:
        """A reduced word for the element (not yet canonical)."""
        cached = self._reduce_cache.get(word)
        if cached is not None:
            return cached
        current = self._delete_pairs(word)
        while True:
            # search the braid orbit for any word admitting a deletion
            seen = {current}
            stack = [current]
            shortened = None
            while stack and shortened is None:
                w = stack.pop()
                for w2 in self._braid_neighbors(w):
                    if w2 in seen:
                        continue
                    if len(seen) >= self.orbit_cap:
                        raise OrbitOverflow(
                            f"braid orbit exceeded cap {self.orbit_cap} for length {len(w2)}"
                        )
                    d = self._delete_pairs(w2)
                    if len(d) < len(w2):
                        shortened = d
                        break
                    seen.add(w2)
                    stack.append(w2)
            if shortened is None:
                break
            current = shortened
        self._reduce_cache[word] = current
        return current

    def nf_word(self, word: WordT) -> WordT:
        reduced = self.reduce_word(word)
        cached = self._nf_cache.get(reduced)
        if cached is not None:
            return cached
        orbit = self._orbit(reduced)
        best = min(orbit)
        for w in orbit:
            self._nf_cache[w] = best
        return best

    # -- public operations -------------------------------------------------

    def reduce(self, word) -> Tuple[str, ...]:
        return self.decode(self.reduce_word(self.encode(word)))

    def normal_form(self, word) -> CoxeterElement:
        return self.element(self.nf_word(self.encode(word)))

    def length(self, word) -> int:
        return len(self.reduce_word(self.encode(word)))

    def mult_nf(self, a: WordT, b: WordT) -> WordT:
        return self.nf_word(a + b)

    def inv_nf(self, a: WordT) -> WordT:
        return self.nf_word(tuple(reversed(a)))

    def is_identity(self, word) -> bool:
        return not self.reduce_word(self.encode(word))

    def ball(self, L: int) -> List[CoxeterElement]:
        """All elements of length <= L, as canonical forms, BFS order."""
        return [self.element(w) for w in self.ball_words(L)]

    def ball_words(self, L: int) -> List[WordT]:
        seen: Set[WordT] = {()}
        frontier: List[WordT] = [()]
        out: List[WordT] = [()]
        for _depth in range(L):
            nxt: List[WordT] = []
            for w in frontier:
                for gen in range(self.n):
                    w2 = self.nf_word(w + (gen,))
                    if len(w2) > len(w) and w2 not in seen:
                        seen.add(w2)
                        nxt.append(w2)
            out.extend(nxt)
            frontier = nxt
        return out


_SYSTEMS: Dict[int, CoxeterSystem] = {}


def system(graph: LabelledGraph, orbit_cap: int = 1_000_000) -> CoxeterSystem:
    key = id(graph)
    sys_ = _SYSTEMS.get(key)
    if sys_ is None or sys_.graph is not graph:
        sys_ = CoxeterSystem(graph, orbit_cap)
        _SYSTEMS[key] = sys_
    return sys_


def reduce(graph: LabelledGraph, word) -> Tuple[str, ...]:
    return system(graph).reduce(word)


def normal_form(graph: LabelledGraph, word) -> CoxeterElement:
    return system(graph).normal_form(word)


def ball(graph: LabelledGraph, L: int) -> List[CoxeterElement]:
    if L < 0:
        raise DomainError("ball radius must be >= 0")
    return system(graph).ball(L)


# ---------------------------------------------------------------------------
# Numeric oracle: the geometric reflection representation
# ---------------------------------------------------------------------------

def _bilinear_form(graph: LabelledGraph) -> np.ndarray:
    n = len(graph.vertices)
    B = -np.ones((n, n))
    np.fill_diagonal(B, 1.0)
    idx = {v: i for i, v in enumerate(graph.vertices)}
    for u, v, m in graph.edge_list():
        B[idx[u], idx[v]] = B[idx[v], idx[u]] = -np.cos(np.pi / m)
    return B


def reflection_matrices(graph: LabelledGraph) -> List[np.ndarray]:
    B = _bilinear_form(graph)
    n = len(graph.vertices)
    mats = []
    for i in range(n):
        S = np.eye(n)
        S[i, :] -= 2.0 * B[i, :]
        mats.append(S)
    return mats


def geometric_oracle(graph: LabelledGraph, word) -> np.ndarray:
    """Product of reflection matrices for the word (numeric, test-side oracle)."""
    mats = reflection_matrices(graph)
    idx = {v: i for i, v in enumerate(graph.vertices)}
    M = np.eye(len(graph.vertices))
    for name in _strip(word):
        M = M @ mats[idx[name]]
    return M


def geometric_is_identity(graph: LabelledGraph, word, tol: float = 1e-9) -> bool:
    M = geometric_oracle(graph, word)
    return bool(np.max(np.abs(M - np.eye(M.shape[0]))) < tol)


# ---------------------------------------------------------------------------
# Homomorphism verification
# ---------------------------------------------------------------------------

def verify_homomorphism(
    g_src: LabelledGraph,
    g_tgt: LabelledGraph,
    images: Dict[str, Sequence],
) -> Tuple[bool, Optional[dict]]:
    """Check that vertex -> word assignments define a homomorphism W(src) -> W(tgt).

    Returns (True, None) or (False, failing-relator descriptor).
    """
    sys_t = system(g_tgt)
    img: Dict[str, WordT] = {}
    for s in g_src.vertices:
        if s not in images:
            raise DomainError(f"missing image for generator {s!r}")
        img[s] = sys_t.encode(images[s])

    for s in g_src.vertices:
        if sys_t.reduce_word(img[s] + img[s]):
            return False, {"relator": f"{s}^2", "generator": s}
    for u, v, m in g_src.edge_list():
        lhs: WordT = ()
        rhs: WordT = ()
        for k in range(m):
            lhs = lhs + img[(u, v)[k % 2]]
            rhs = rhs + img[(v, u)[k % 2]]
        if sys_t.reduce_word(lhs + tuple(reversed(rhs))):
            return False, {"relator": f"braid({u},{v};{m})", "edge": [u, v]}
    return True, None


def compose_images(
    g: LabelledGraph, first: Dict[str, Sequence], second: Dict[str, Sequence]
) -> Dict[str, Tuple[str, ...]]:
    """Images of (second after first) on the generators, as plain words."""
    out = {}
    for s in g.vertices:
        word: List[str] = []
        for name in _strip(first[s]):
            word.extend(_strip(second[name]))
        out[s] = tuple(word)
    return out


def is_identity_map(g: LabelledGraph, images: Dict[str, Sequence]) -> bool:
    sys_ = system(g)
    return all(
        sys_.nf_word(sys_.encode(images[s])) == sys_.encode([s]) for s in g.vertices
    )
