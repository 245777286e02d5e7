"""Brute-force array counts straight from the constraint definitions."""

import itertools
from math import inf

import numpy as np

from capbound.constraints import builtin_1d, membership

# 2x2 window rules, (a, b, c, d) read row by row; all are closed under
# lowering entries, so padding the top row and left column with 0 is optimal
WINDOW_RULES = {
    "nak": lambda a, b, c, d: a + b + c + d <= 1,
    "rwim": lambda a, b, c, d: (a + b + c + d <= 1) | ((a == c) & (b == d) & (a != b)),
}
AXIAL_FACTORS = {
    "hard-square": lambda: builtin_1d("rll", 1, inf),
    "even2": lambda: builtin_1d("even"),
    "chg2_2d": lambda: builtin_1d("chg", 2),
    "chg3_2d": lambda: builtin_1d("chg", 3),
}


def all_arrays(m, n):
    bits = (np.arange(2 ** (m * n))[:, None] >> np.arange(m * n)[::-1]) & 1
    return bits.reshape(-1, m, n)


def count_window(name, m, n):
    arr = all_arrays(m, n)
    pad = np.zeros((len(arr), m + 1, n + 1), dtype=np.int64)
    pad[:, 1:, 1:] = arr
    rule = WINDOW_RULES[name]
    ok = np.ones(len(arr), bool)
    for i in range(m):
        for j in range(n):
            ok &= rule(pad[:, i, j], pad[:, i, j + 1], pad[:, i + 1, j], pad[:, i + 1, j + 1])
    return int(ok.sum())


def count_axial(name, m, n):
    c = AXIAL_FACTORS[name]()
    alph = list(c.alphabet)
    good = {L: {w for w in itertools.product(range(2), repeat=L)
                if membership([alph[x] for x in w], c)} for L in (m, n)}
    total = 0
    for arr in all_arrays(m, n):
        if all(tuple(r) in good[n] for r in arr) and all(tuple(col) in good[m] for col in arr.T):
            total += 1
    return total


def brute_count(name, m, n):
    return count_window(name, m, n) if name in WINDOW_RULES else count_axial(name, m, n)
