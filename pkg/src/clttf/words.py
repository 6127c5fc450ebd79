"""Shared word utilities: signed letters over named generators.

A word is a tuple of (name, sign) pairs with sign in {+1, -1}.  Coxeter
code uses plain tuples of names instead (every generator is an
involution there); the helpers for that live in the coxeter module.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]


def prod(a: str, b: str, m: int) -> Word:
    """The alternating word aba... of length m, all letters positive."""
    return tuple(((a, b)[i % 2], 1) for i in range(m))


def inverse(word: Iterable[Letter]) -> Word:
    return tuple((name, -sign) for name, sign in reversed(tuple(word)))


def free_reduce(word: Iterable[Letter]) -> Word:
    """Cancel adjacent x x^-1 pairs until none remain."""
    out: list[Letter] = []
    for name, sign in word:
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


def concat(*words: Iterable[Letter]) -> Word:
    merged: list[Letter] = []
    for w in words:
        merged.extend(w)
    return free_reduce(merged)


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    """Parse a space-separated word; a ^-1 suffix marks an inverse letter.

    >>> parse_word("a b^-1 a")
    (('a', 1), ('b', -1), ('a', 1))
    """
    letters: list[Letter] = []
    for tok in text.split():
        if tok.endswith("^-1"):
            name, sign = tok[:-3], -1
        elif tok.endswith("^1"):
            name, sign = tok[:-2], 1
        else:
            name, sign = tok, 1
        if not name:
            raise ValueError(f"empty letter in word: {text!r}")
        if alphabet is not None and name not in alphabet:
            raise ValueError(f"unknown letter {name!r}")
        letters.append((name, sign))
    return tuple(letters)


def format_word(word: Iterable[Letter]) -> str:
    return " ".join(name if sign == 1 else f"{name}^-1" for name, sign in word)
