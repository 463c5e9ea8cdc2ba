"""Shared helpers: independent brute-force oracles and instance generators."""

import random

import pytest

from klcf.core import Text


def random_text(rng: random.Random, n1: int, n2: int, sigma: int) -> Text:
    s1 = [rng.randrange(sigma) for _ in range(n1)]
    s2 = [rng.randrange(sigma) for _ in range(n2)]
    return Text.from_symbols(s1, s2)


def brute_klcf(text: Text, k: int) -> tuple[int, int, int]:
    """Independent cubic-ish reference: try every window pair directly.

    Returns (length, i1, i2) with the lexicographically smallest witness.
    Only for tiny inputs.
    """
    s1 = text.s1.tolist()
    s2 = text.s2.tolist()
    n1, n2 = len(s1), len(s2)
    best = (0, 1, 1)
    for i1 in range(n1):
        for i2 in range(n2):
            mism = 0
            length = 0
            for t in range(min(n1 - i1, n2 - i2)):
                if s1[i1 + t] != s2[i2 + t]:
                    mism += 1
                    if mism > k:
                        break
                length = t + 1
                cand = (length, i1 + 1, i2 + 1)
                if cand[0] > best[0] or (cand[0] == best[0]
                                         and (cand[1], cand[2]) < (best[1], best[2])):
                    best = cand
    return best


def naive_lce_forward(concat, p: int, q: int) -> int:
    """Character-by-character forward extension (1-based positions)."""
    n = len(concat)
    t = 0
    while p + t <= n and q + t <= n and concat[p + t - 1] == concat[q + t - 1]:
        t += 1
    return t


def naive_lce_backward(concat, p: int, q: int) -> int:
    t = 0
    while p - t >= 1 and q - t >= 1 and concat[p - t - 1] == concat[q - t - 1]:
        t += 1
    return t


def two_pointer_window(bits, k: int) -> tuple[int, int, int]:
    """Longest window with at most k set bits: (length, start, end), 1-based;
    (0, 1, 0) when nothing fits."""
    best = (0, 1, 0)
    s = 0
    ones = 0
    for e, bit in enumerate(bits):
        ones += bit
        while ones > k:
            ones -= bits[s]
            s += 1
        if e - s + 1 > best[0]:
            best = (e - s + 1, s + 1, e + 1)
    return best


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
