"""Hot kernel for dihedral free-product reduction, with selectable backend.

A group element of the rank-2 Artin group G(e) is tracked as its image
in Gamma = G(e)/<z_e> (an alternating syllable word over two cyclic free
factors) together with its abelianized length.  Folding a letter word
into that syllable form is the inner loop of the soundness sweeps and
of the link-ball search, so it is compiled with numba when available.

Backend selection: environment variable ``CLTTF_KERNEL`` set to
``numba`` or ``python``; default is numba when importable, else the
numpy/python path.  Both implement the identical reduction.

Syllable encoding (flat int64 pairs ``f, e``):
  f = 0  "A" factor: <x> of order 2 for m odd, <s> infinite for m even
  f = 1  "B" factor: <rho> = <st> of order m (m odd) or m/2 (m even)
Letter codes: 0 = s, 1 = t, 2 = s^-1, 3 = t^-1.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("CLTTF_KERNEL", "").strip().lower()

_HAVE_NUMBA = False
if _CHOICE != "python":
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _CHOICE == "numba":
            raise
        _HAVE_NUMBA = False


def _normalize(f: int, e: int, order_a: int, order_b: int) -> int:
    if f == 1:
        k = order_b
        r = e % k
        if 2 * r > k:
            r -= k
        return r
    if order_a != 0:
        return e % order_a
    return e


def _py_eval_letters(letters, gens, glens, order_a, order_b, buf):
    n = 0
    for L in letters:
        glen = glens[L]
        for i in range(0, glen, 2):
            f = gens[L, i]
            e = gens[L, i + 1]
            if n >= 2 and buf[n - 2] == f:
                e2 = buf[n - 1] + e
                if f == 1:
                    k = order_b
                    e2 = e2 % k
                    if 2 * e2 > k:
                        e2 -= k
                elif order_a != 0:
                    e2 = e2 % order_a
                n -= 2
                if e2 != 0:
                    buf[n] = f
                    buf[n + 1] = e2
                    n += 2
            else:
                buf[n] = f
                buf[n + 1] = e
                n += 2
    return n


def _py_coset_min(ga, na, gell, gen, glen, ginv, ginvlen, window, order_a, order_b, buf, best):
    """Minimal (syllable count, flat word, ell) over ga * gen^j, |j| <= window.

    Returns (best_n, best_ell); the winning word is left in best[:best_n].
    Used for canonical coset representatives: gen has infinite order in the
    free product, so the minimizer is unique.
    """
    # cur = ga * ginv^window
    n = 0
    for i in range(na):
        buf[n] = ga[i]
        n += 1
    for _ in range(window):
        for i in range(0, ginvlen, 2):
            f = ginv[i]
            e = ginv[i + 1]
            if n >= 2 and buf[n - 2] == f:
                e2 = buf[n - 1] + e
                if f == 1:
                    e2 = e2 % order_b
                    if 2 * e2 > order_b:
                        e2 -= order_b
                elif order_a != 0:
                    e2 = e2 % order_a
                n -= 2
                if e2 != 0:
                    buf[n] = f
                    buf[n + 1] = e2
                    n += 2
            else:
                buf[n] = f
                buf[n + 1] = e
                n += 2
    ell = gell - window
    best_n = -1
    best_ell = 0
    for _step in range(2 * window + 1):
        take = best_n < 0 or n < best_n
        if not take and n == best_n:
            for i in range(n):
                if buf[i] != best[i]:
                    take = buf[i] < best[i]
                    break
        if take:
            best_n = n
            best_ell = ell
            for i in range(n):
                best[i] = buf[i]
        # cur = cur * gen
        for i in range(0, glen, 2):
            f = gen[i]
            e = gen[i + 1]
            if n >= 2 and buf[n - 2] == f:
                e2 = buf[n - 1] + e
                if f == 1:
                    e2 = e2 % order_b
                    if 2 * e2 > order_b:
                        e2 -= order_b
                elif order_a != 0:
                    e2 = e2 % order_a
                n -= 2
                if e2 != 0:
                    buf[n] = f
                    buf[n + 1] = e2
                    n += 2
            else:
                buf[n] = f
                buf[n + 1] = e
                n += 2
        ell += 1
    return best_n, best_ell


if _HAVE_NUMBA:
    _nb_eval_letters = njit(cache=True)(_py_eval_letters)
    _nb_coset_min = njit(cache=True)(_py_coset_min)


def backend_name() -> str:
    return "numba" if _HAVE_NUMBA else "python"


class LetterFolder:
    """Folds coded letter sequences into reduced syllable tuples for one m."""

    def __init__(self, m: int, gen_gammas):
        # gen_gammas: four flat tuples, one per letter code
        self.m = m
        self.order_a = 2 if m % 2 == 1 else 0
        self.order_b = m if m % 2 == 1 else m // 2
        maxlen = max(len(g) for g in gen_gammas)
        self._gens = np.zeros((4, maxlen), dtype=np.int64)
        self._glens = np.zeros(4, dtype=np.int64)
        for i, g in enumerate(gen_gammas):
            self._gens[i, : len(g)] = g
            self._glens[i] = len(g)
        self._maxgen = maxlen

    def fold(self, letter_codes) -> tuple:
        letters = np.asarray(letter_codes, dtype=np.int64)
        buf = np.empty(2 + self._maxgen * max(1, len(letters)), dtype=np.int64)
        if _HAVE_NUMBA:
            n = _nb_eval_letters(
                letters, self._gens, self._glens, self.order_a, self.order_b, buf
            )
        else:
            n = _py_eval_letters(
                letters, self._gens, self._glens, self.order_a, self.order_b, buf
            )
        return tuple(int(x) for x in buf[:n])

    def coset_min(self, gamma: tuple, ell: int, gen_code: int, window: int):
        """Canonical representative of the right coset g<gen> as (gamma, ell)."""
        ga = np.asarray(gamma, dtype=np.int64)
        gen = self._gens[gen_code]
        ginv = self._gens[gen_code + 2]
        size = len(gamma) + 2 * (window + 1) * self._maxgen + 4
        buf = np.empty(size, dtype=np.int64)
        best = np.empty(size, dtype=np.int64)
        fn = _nb_coset_min if _HAVE_NUMBA else _py_coset_min
        n, best_ell = fn(
            ga, len(gamma), ell,
            gen, int(self._glens[gen_code]),
            ginv, int(self._glens[gen_code + 2]),
            window, self.order_a, self.order_b, buf, best,
        )
        return tuple(int(x) for x in best[:n]), int(best_ell)
