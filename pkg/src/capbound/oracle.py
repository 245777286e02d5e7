"""Exact counts of admissible arrays, and closed-form capacities.

Counts are exact Python integers.  Label arrays are counted once each even
when a presentation generates them through several edge arrays: arrays are
built one column at a time while tracking the set of horizontal-strip states
compatible with the labels read so far, which is a subset construction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .constraints import Constraint1D, Presentation2D, strip
from .graph import check_size

__all__ = [
    "ArrayCount",
    "count_arrays_2d",
    "count_arrays_isotropic",
    "count_words",
    "exact_capacity",
    "chg2_phases",
    "enumerate_words",
]


@dataclass(frozen=True)
class ArrayCount:
    """Number of admissible arrays of the given shape."""

    dims: tuple
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be nonnegative")


def _label_matrices(g):
    """One sparse 0/1 successor matrix per label that occurs on an edge."""
    V = g.num_vertices
    order = np.argsort(g.label, kind="stable")
    lab, src, dst = g.label[order], g.src[order], g.dst[order]
    cuts = np.flatnonzero(np.diff(lab)) + 1
    return [sp.csr_matrix((np.ones(len(s)), (s, d)), shape=(V, V))
            for s, d in zip(np.split(src, cuts), np.split(dst, cuts))]


def _count_label_words(g, n: int) -> int:
    """Distinct label words of length ``n`` on paths of ``g``, exactly.

    A word is tracked by the set of vertices where a path reading it can end;
    words with the same set have the same extensions, so only the number of
    words per set is kept.
    """
    V = g.num_vertices
    if n == 0:
        return 1
    if V == 0:
        return 0
    mats = _label_matrices(g)
    sets = [np.arange(V, dtype=np.int64)]
    counts = [1]
    for _ in range(n):
        lens = np.array([len(x) for x in sets])
        S = sp.csr_matrix((np.ones(lens.sum()), np.concatenate(sets),
                           np.concatenate([[0], np.cumsum(lens)])), shape=(len(sets), V))
        acc: dict = {}
        for M in mats:
            R = (S @ M).tocsr()
            R.sort_indices()
            ip, ind = R.indptr, R.indices.astype(np.int64)
            for i in np.flatnonzero(np.diff(ip)).tolist():
                key = ind[ip[i]:ip[i + 1]].tobytes()
                acc[key] = acc.get(key, 0) + counts[i]
        check_size("subset states of the oracle", len(acc))
        sets = [np.frombuffer(k, dtype=np.int64) for k in acc]
        counts = list(acc.values())
    return sum(counts)


def count_arrays_2d(s: Presentation2D, m: int, n: int) -> ArrayCount:
    """Number of ``m x n`` label arrays of a two-dimensional constraint.

    Columns are read left to right as symbols of the height-``m`` horizontal
    strip; the number of arrays is the number of distinct label words of
    length ``n`` of that strip.
    """
    if m < 0 or n < 0:
        raise ValueError("dimensions must be nonnegative")
    if m == 0 or n == 0:
        return ArrayCount((m, n), 1)
    g = strip(s, m, "horizontal").presentation
    return ArrayCount((m, n), _count_label_words(g, n))


def count_words(c: Constraint1D, n: int) -> int:
    """Number of words of length ``n`` in a 1D constraint."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _count_label_words(c.presentation, n)


def _dfa_words(c: Constraint1D, n: int):
    """All words of length ``n`` as label-index tuples, with end states."""
    dfa = c.dfa
    out = [((), 0)]
    for _ in range(n):
        nxt = []
        for w, st in out:
            for a in range(dfa.shape[1]):
                t = dfa[st, a]
                if t >= 0:
                    nxt.append((w + (a,), t))
        out = nxt
        check_size("words of the oracle", len(out))
    return out


def count_arrays_isotropic(c: Constraint1D, D: int, n: int) -> ArrayCount:
    """Number of ``n x ... x n`` (``D`` axes) arrays with every axis line in ``c``.

    The array is built slice by slice along the first axis.  Each slice is
    itself an admissible ``(D - 1)``-dimensional array; the state is the tuple
    of automaton states of the lines running along the first axis.
    """
    if D < 1 or n < 0:
        raise ValueError("need D >= 1 and n >= 0")
    if n == 0:
        return ArrayCount((0,) * D, 1)
    check_size("cells of the oracle array", n ** D)
    dfa = c.dfa
    if D == 1:
        return ArrayCount((n,), len(_dfa_words(c, n)))
    slices = _admissible_arrays(c, D - 1, n)
    cells = n ** (D - 1)
    layer = Counter({(0,) * cells: 1})
    for _ in range(n):
        nxt: Counter = Counter()
        for states, cnt in layer.items():
            for sl in slices:
                new = tuple(dfa[st, a] for st, a in zip(states, sl))
                if min(new) >= 0:
                    nxt[new] += cnt
        check_size("states of the oracle", len(nxt))
        layer = nxt
    return ArrayCount((n,) * D, sum(layer.values()))


def _admissible_arrays(c: Constraint1D, D: int, n: int) -> list[tuple]:
    """Flattened (row-major) admissible arrays of shape ``(n,) * D``."""
    if D == 1:
        return [w for w, _ in _dfa_words(c, n)]
    dfa = c.dfa
    slices = _admissible_arrays(c, D - 1, n)
    cells = n ** (D - 1)
    partial = [((), (0,) * cells)]
    for _ in range(n):
        nxt = []
        for arr, states in partial:
            for sl in slices:
                new = tuple(dfa[st, a] for st, a in zip(states, sl))
                if min(new) >= 0:
                    nxt.append((arr + sl, new))
        partial = nxt
        check_size("arrays of the oracle", len(partial))
    return [arr for arr, _ in partial]


def exact_capacity(family: str, D: int) -> Fraction:
    """Known capacities: ``chg2`` has ``2 ** -D`` and ``odd`` has ``1/2``."""
    if D < 1:
        raise ValueError("D must be positive")
    if family == "chg2":
        return Fraction(1, 2 ** D)
    if family == "odd":
        return Fraction(1, 2)
    raise ValueError(f"no closed form for family {family!r}")


def _sign(x) -> int:
    if isinstance(x, str):
        x = int(x)
    if x not in (1, -1):
        raise ValueError(f"entries must be +1 or -1, got {x!r}")
    return int(x)


def chg2_phases(word: Sequence) -> frozenset:
    """Which alternation phases a sign word satisfies.

    ``phase0`` holds when ``a[i] == -a[i + 1]`` for every even ``i`` and
    ``phase1`` when it holds for every odd ``i``.  The result is nonempty
    exactly when the running sums stay in a window of three values.
    """
    a = [_sign(x) for x in word]
    out = set()
    for ph in (0, 1):
        if all(a[i] == -a[i + 1] for i in range(ph, len(a) - 1, 2)):
            out.add(f"phase{ph}")
    return frozenset(out)


def enumerate_words(c: Constraint1D, max_len: int) -> list[tuple]:
    """All words of length at most ``max_len``, in lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    check_size("words to enumerate", sum(len(c.alphabet) ** k for k in range(max_len + 1)))
    alph = list(c.alphabet)
    order = sorted(range(len(alph)), key=lambda i: str(alph[i]))
    out = []
    for L in range(max_len + 1):
        for w, _ in _dfa_words(c, L):
            out.append(tuple(alph[a] for a in w))
    rank = {i: r for r, i in enumerate(order)}
    idx = {a: i for i, a in enumerate(alph)}
    return sorted(out, key=lambda w: [rank[idx[x]] for x in w])

