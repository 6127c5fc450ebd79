"""Exact arithmetic in 2-generator Artin groups G(e) and dihedral Coxeter groups.

An element of G(e) is represented faithfully by the pair (image in
Gamma = G(e)/<z_e>, abelianized length).  The centre <z_e> is infinite
cyclic with length lcm(m,2), so the pair determines the element: equal
Gamma images differ by a central power, which the length pins down.

Gamma is a free product of two cyclic groups,

    m odd:   <x | x^2> * <rho | rho^m>      x = sts... (m letters), rho = st
    m even:  <s>       * <rho | rho^(m/2)>

with generator substitutions s = rho^-(m-1)/2 x, t = x rho^-(m-1)/2
(m odd) and t = s^-1 rho (m even).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Optional, Tuple

from .defgraph import DomainError
from .kernels import LetterFolder
from .words import Letter, Word, prod

A, B = 0, 1  # factor codes in a gamma form

_LETTER_CODE = {("s", 1): 0, ("t", 1): 1, ("s", -1): 2, ("t", -1): 3}


class DihedralElement:
    """Element of G(e): reduced free-product form in Gamma plus length."""

    __slots__ = ("group", "gamma", "ell")

    def __init__(self, group: "DihedralGroup", gamma: tuple, ell: int):
        self.group = group
        self.gamma = gamma
        self.ell = ell

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DihedralElement)
            and self.group.m == other.group.m
            and self.gamma == other.gamma
            and self.ell == other.ell
        )

    def __hash__(self) -> int:
        return hash((self.group.m, self.gamma, self.ell))

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        g = self.group
        return DihedralElement(g, g._mul_gamma(self.gamma, other.gamma), self.ell + other.ell)

    def inverse(self) -> "DihedralElement":
        g = self.group
        out = []
        for i in range(len(self.gamma) - 2, -1, -2):
            f = self.gamma[i]
            e = g._normalize(f, -self.gamma[i + 1])
            out.extend((f, e))
        return DihedralElement(g, tuple(out), -self.ell)

    def __pow__(self, n: int) -> "DihedralElement":
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.group.identity()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_identity(self) -> bool:
        return not self.gamma and self.ell == 0

    def syllables(self) -> int:
        return len(self.gamma) // 2

    def __repr__(self) -> str:
        return f"DihedralElement(m={self.group.m}, gamma={self.gamma}, ell={self.ell})"

    def to_json(self) -> dict:
        names = {A: "x" if self.group.m % 2 else "s", B: "rho"}
        form = [
            {"factor": names[self.gamma[i]], "exp": self.gamma[i + 1]}
            for i in range(0, len(self.gamma), 2)
        ]
        return {"gamma_form": form, "length": self.ell}


class DihedralGroup:
    """Arithmetic context for G(e) with a fixed label m >= 2."""

    def __init__(self, m: int):
        if m < 2:
            raise DomainError(f"dihedral label must be >= 2, got {m}")
        self.m = m
        self.odd = m % 2 == 1
        self.order_a = 2 if self.odd else 0
        self.order_b = m if self.odd else m // 2
        a = (m - 1) // 2
        if self.odd:
            raw = {
                0: ((B, -a), (A, 1)),  # s = rho^-a x
                1: ((A, 1), (B, -a)),  # t = x rho^-a   (rho^(m+1)/2 normalized)
                2: ((A, 1), (B, a)),  # s^-1
                3: ((B, a), (A, 1)),  # t^-1
            }
        else:
            raw = {
                0: ((A, 1),),
                1: ((A, -1), (B, 1)),  # t = s^-1 rho
                2: ((A, -1),),
                3: ((B, -1), (A, 1)),
            }
        gens = []
        for code in range(4):
            flat: list = []
            for f, e in raw[code]:
                e = self._normalize(f, e)
                if e != 0:
                    flat.extend((f, e))
            gens.append(tuple(flat))
        self._gens = gens
        self._folder = LetterFolder(m, gens)

    # -- gamma mechanics ------------------------------------------------

    def _normalize(self, f: int, e: int) -> int:
        if f == B:
            k = self.order_b
            r = e % k
            if 2 * r > k:
                r -= k
            return r
        if self.order_a:
            return e % self.order_a
        return e

    def _mul_gamma(self, ga: tuple, gb: tuple) -> tuple:
        out = list(ga)
        for i in range(0, len(gb), 2):
            f, e = gb[i], gb[i + 1]
            if out and out[-2] == f:
                e2 = self._normalize(f, out[-1] + e)
                del out[-2:]
                if e2 != 0:
                    out.extend((f, e2))
            else:
                out.extend((f, e))
        return tuple(out)

    # -- element constructors -------------------------------------------

    def identity(self) -> DihedralElement:
        return DihedralElement(self, (), 0)

    def generator(self, name: str, sign: int = 1) -> DihedralElement:
        code = _LETTER_CODE[(name, sign)]
        return DihedralElement(self, self._gens[code], sign)

    def from_word(self, word: Iterable[Letter]) -> DihedralElement:
        codes = []
        ell = 0
        for name, sign in word:
            try:
                codes.append(_LETTER_CODE[(name, sign)])
            except KeyError:
                raise DomainError(f"letter {name!r}^{sign} outside alphabet {{s,t}}")
            ell += sign
        return DihedralElement(self, self._folder.fold(codes), ell)

    def s(self) -> DihedralElement:
        return self.generator("s")

    def t(self) -> DihedralElement:
        return self.generator("t")

    def x(self) -> DihedralElement:
        """Quasi-centre generator x_e = prod(s,t;m)."""
        return self.from_word(prod("s", "t", self.m))

    def z(self) -> DihedralElement:
        """Centre generator z_e = (st)^k, k = lcm(m,2)/2."""
        k = math.lcm(self.m, 2) // 2
        return self.from_word(tuple(w for _ in range(k) for w in (("s", 1), ("t", 1))))


@lru_cache(maxsize=None)
def dihedral_group(m: int) -> DihedralGroup:
    return DihedralGroup(m)


def dihedral_normal_form(m: int, word: Iterable[Letter]) -> DihedralElement:
    """Reduced (gamma form, length) pair for a word over {s, t, s^-1, t^-1}."""
    return dihedral_group(m).from_word(word)


def is_in_cyclic(m: int, g: DihedralElement, u: DihedralElement) -> Optional[int]:
    """Return j with g = u^j if it exists, else None.

    u must be a conjugate of a generator (ell(u) = 1); then the only
    candidate exponent is j = ell(g).
    """
    if u.ell != 1:
        raise DomainError(f"is_in_cyclic needs ell(u) = 1, got {u.ell}")
    j = g.ell
    return j if u ** j == g else None


def special_elements(m: int) -> Tuple[Word, Word, int]:
    """The words (x_e, z_e, k) with z_e = (st)^k, k = lcm(m,2)/2.

    Asserts the quasi-centre relation z = x^2 (m odd) / z = x (m even)
    through the normal forms.
    """
    grp = dihedral_group(m)
    k = math.lcm(m, 2) // 2
    x_word = prod("s", "t", m)
    z_word = tuple(w for _ in range(k) for w in (("s", 1), ("t", 1)))
    x = grp.from_word(x_word)
    z = grp.from_word(z_word)
    expected = x * x if m % 2 else x
    assert z == expected, f"quasi-centre relation failed for m={m}"
    assert z.ell == math.lcm(m, 2) and z.gamma == ()
    return x_word, z_word, k


def unit_residues(m: int) -> list:
    """All r in [0, m) with 2r+1 a unit mod m (dihedral-twist exponents)."""
    if m < 3:
        raise DomainError(f"unit_residues needs m >= 3, got {m}")
    return [r for r in range(m) if math.gcd(2 * r + 1, m) == 1]


class CoxDihedralElement:
    """Element of the finite dihedral group W(e) of order 2m.

    Realized as the affine map x -> sign*x + shift on Z/m, with the
    reflections s: x -> -x and t: x -> -x + 1.
    """

    __slots__ = ("m", "sign", "shift")

    def __init__(self, m: int, sign: int, shift: int):
        self.m = m
        self.sign = sign
        self.shift = shift % m

    def __mul__(self, other: "CoxDihedralElement") -> "CoxDihedralElement":
        return CoxDihedralElement(
            self.m, self.sign * other.sign, self.sign * other.shift + self.shift
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoxDihedralElement)
            and (self.m, self.sign, self.shift) == (other.m, other.sign, other.shift)
        )

    def __hash__(self) -> int:
        return hash((self.m, self.sign, self.shift))

    def is_identity(self) -> bool:
        return self.sign == 1 and self.shift == 0

    def __repr__(self) -> str:
        return f"CoxDihedralElement(m={self.m}, sign={self.sign}, shift={self.shift})"


def cox_dihedral(m: int, word: Iterable[Letter]) -> CoxDihedralElement:
    """Exact evaluation in W(e) = D_2m; the projection oracle for G(e).

    Inverse signs are accepted and ignored (generators are involutions).
    """
    acc = CoxDihedralElement(m, 1, 0)
    gens = {"s": CoxDihedralElement(m, -1, 0), "t": CoxDihedralElement(m, -1, 1)}
    for name, _sign in word:
        if name not in gens:
            raise DomainError(f"letter {name!r} outside alphabet {{s,t}}")
        acc = acc * gens[name]
    return acc
