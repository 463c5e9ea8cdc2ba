"""Input model, result type, reference oracle, and match verification.

Positions are 1-based throughout the public API. A match of length ``l``
pairs ``s1[i1 .. i1+l-1]`` with ``s2[i2 .. i2+l-1]`` and is valid for a
mismatch budget ``k`` when the two windows differ in at most ``k`` aligned
positions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class ResourceLimitError(Exception):
    """An algorithm would exceed its configured memory budget."""


@dataclass(frozen=True)
class MatchSpan:
    """A reported common substring with its mismatch offsets.

    ``mismatches`` holds the offsets t in [0, length) where
    ``s1[i1+t] != s2[i2+t]``, sorted ascending.
    """

    length: int
    i1: int
    i2: int
    mismatches: tuple[int, ...] = ()


class Text:
    """Two sequences over a dense integer alphabet plus their concatenation.

    Symbols are densified to [0, sigma) where sigma counts the distinct
    symbols actually occurring in either sequence.  ``concat`` is
    s1 . SEP1 . s2 . SEP2 with the two sentinels sigma and sigma+1, so no
    exact extension can cross a sequence boundary.
    """

    __slots__ = ("s1", "s2", "n1", "n2", "sigma", "concat", "alphabet")

    def __init__(self, s1: np.ndarray, s2: np.ndarray, sigma: int, alphabet=None):
        self.s1 = s1
        self.s2 = s2
        self.n1 = len(s1)
        self.n2 = len(s2)
        self.sigma = sigma
        sep1, sep2 = sigma, sigma + 1
        self.concat = np.concatenate(
            [s1, [sep1], s2, [sep2]]).astype(np.int64)
        self.alphabet = alphabet  # dense value -> original symbol, or None

    @classmethod
    def from_symbols(cls, s1, s2) -> "Text":
        """Build a Text from two iterables of integers, densifying them."""
        a1 = np.asarray(list(s1), dtype=np.int64)
        a2 = np.asarray(list(s2), dtype=np.int64)
        alphabet = np.unique(np.concatenate([a1, a2]))
        d1 = np.searchsorted(alphabet, a1)
        d2 = np.searchsorted(alphabet, a2)
        return cls(d1, d2, len(alphabet), alphabet)

    @classmethod
    def from_strings(cls, s1: str, s2: str) -> "Text":
        return cls.from_symbols([ord(c) for c in s1], [ord(c) for c in s2])

    def __repr__(self):
        return f"Text(n1={self.n1}, n2={self.n2}, sigma={self.sigma})"


def mismatch_offsets(text: Text, i1: int, i2: int, length: int) -> tuple[int, ...]:
    """Offsets where the two aligned windows differ (direct comparison)."""
    if length == 0:
        return ()
    a = text.s1[i1 - 1:i1 - 1 + length]
    b = text.s2[i2 - 1:i2 - 1 + length]
    return tuple(np.flatnonzero(a != b).tolist())


def make_span(text: Text, length: int, i1: int, i2: int) -> MatchSpan:
    """MatchSpan with its mismatch list recomputed from the text."""
    return MatchSpan(length, i1, i2, mismatch_offsets(text, i1, i2, length))


def better_span(a: MatchSpan, b: MatchSpan) -> MatchSpan:
    """Pick the longer span; ties go to the smaller (i1, i2)."""
    if b.length > a.length:
        return b
    if b.length == a.length and (b.i1, b.i2) < (a.i1, a.i2):
        return b
    return a


def trivial_span(text: Text, k: int) -> MatchSpan:
    """Best span when no exact common symbol exists: length min(k, n1, n2) at (1, 1)."""
    m = min(k, text.n1, text.n2)
    return make_span(text, m, 1, 1)


def klcf_oracle(text: Text, k: int) -> MatchSpan:
    """Longest common substring with at most k mismatches, by sliding window.

    Walks every diagonal of the (virtual) n1 x n2 alignment matrix keeping a
    window with at most k mismatch offsets in a deque.  O(n1*n2) time,
    O(k) extra space.  Among maximum-length matches the one with the
    lexicographically smallest (i1, i2) is reported.
    """
    n1, n2 = text.n1, text.n2
    if n1 == 0 or n2 == 0:
        return MatchSpan(0, 1, 1, ())
    s1 = text.s1.tolist()
    s2 = text.s2.tolist()
    best_len, best_i1, best_i2 = 0, 1, 1
    for d in range(-(n1 - 1), n2):
        i1 = -d if d < 0 else 0  # 0-based diagonal start
        i2 = i1 + d
        diag_len = min(n1 - i1, n2 - i2)
        window = deque()
        s = 0
        for e in range(diag_len):
            if s1[i1 + e] != s2[i2 + e]:
                window.append(e)
                if len(window) > k:
                    s = window.popleft() + 1
            length = e - s + 1
            if length > best_len or (
                length == best_len
                and (i1 + s + 1, i2 + s + 1) < (best_i1, best_i2)
            ):
                best_len = length
                best_i1 = i1 + s + 1
                best_i2 = i2 + s + 1
    return make_span(text, best_len, best_i1, best_i2)


def verify_match(text: Text, span: MatchSpan, k: int) -> bool:
    """True iff the span's windows differ in at most k positions and the
    recorded mismatch list is exactly the differing offsets.

    An out-of-bounds span raises ValueError (distinct from returning False).
    """
    if span.length < 0 or k < 0:
        raise ValueError(f"negative length or budget: {span.length}, {k}")
    if span.i1 < 1 or span.i2 < 1:
        raise ValueError(f"positions are 1-based: ({span.i1}, {span.i2})")
    if span.i1 + span.length - 1 > text.n1 or span.i2 + span.length - 1 > text.n2:
        raise ValueError(
            f"span ({span.i1}, {span.i2}, len {span.length}) exceeds "
            f"lengths ({text.n1}, {text.n2})")
    if span.length == 0 and (span.i1 > text.n1 + 1 or span.i2 > text.n2 + 1):
        raise ValueError("empty span anchored past the end of a sequence")
    actual = mismatch_offsets(text, span.i1, span.i2, span.length)
    return len(actual) <= k and tuple(span.mismatches) == actual


def klcf_bounds(ell0: int, k: int, n1: int, n2: int) -> tuple[int, int]:
    """Bounds on the optimum length given the exact-match optimum ell0.

    Any window of length min(n1, n2, k) fits the budget, and a window with
    at most k mismatches splits into k+1 exact runs, so
    max(ell0, min(min(n1,n2), k)) <= l_k <= min(min(n1,n2), (k+1)*ell0 + k).
    """
    n = min(n1, n2)
    lower = max(ell0, min(n, k))
    upper = min(n, (k + 1) * ell0 + k)
    return lower, upper
