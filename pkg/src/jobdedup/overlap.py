"""Character-block overlap scores (text overlap and skill overlap).

Blocks are found by recursive longest-common-substring decomposition:
take the longest common substring (ties: smallest source start, then
smallest target start), keep it if it reaches the minimum length, recurse
on the text to the left and to the right of the match. Blocks therefore
never overlap and the directional score is at most 1.

The search is exact. Small pieces use a quadratic DP; larger pieces use a
double rolling hash with numpy-vectorized probes and a binary search over
the block length, which keeps two 10k-character texts well under the
250 ms budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .preprocess import NormalizedPosting

MIN_BLOCK_LEN = 15

_MOD1 = (1 << 31) - 1
_MOD2 = (1 << 29) - 3
_BASE1 = 131
_BASE2 = 137
_SMALL_AREA = 2048  # below this, the plain DP beats the hashed search


@dataclass(frozen=True)
class MatchBlock:
    a_start: int
    b_start: int
    length: int


@dataclass(frozen=True)
class OverlapResult:
    blocks: tuple[MatchBlock, ...]
    forward: float
    backward: float
    final: float


class _Hasher:
    """Prefix rolling hashes of one string under two independent moduli."""

    def __init__(self, s: str):
        n = len(s)
        p1 = [0] * (n + 1)
        p2 = [0] * (n + 1)
        h1 = h2 = 0
        for i, c in enumerate(s):
            v = ord(c)
            h1 = (h1 * _BASE1 + v) % _MOD1
            h2 = (h2 * _BASE2 + v) % _MOD2
            p1[i + 1] = h1
            p2[i + 1] = h2
        self.p1 = np.array(p1, dtype=np.int64)
        self.p2 = np.array(p2, dtype=np.int64)
        pw1 = [1] * (n + 1)
        pw2 = [1] * (n + 1)
        for i in range(1, n + 1):
            pw1[i] = pw1[i - 1] * _BASE1 % _MOD1
            pw2[i] = pw2[i - 1] * _BASE2 % _MOD2
        self.pw1 = pw1
        self.pw2 = pw2

    def keys(self, lo: int, hi: int, length: int) -> np.ndarray:
        """Combined hash keys of all substrings of `length` starting in [lo, hi-length]."""
        h1 = (self.p1[lo + length:hi + 1] - self.p1[lo:hi - length + 1] * self.pw1[length]) % _MOD1
        h2 = (self.p2[lo + length:hi + 1] - self.p2[lo:hi - length + 1] * self.pw2[length]) % _MOD2
        return (h1 << 32) + h2


def _lcs_small(a: str, b: str, alo: int, ahi: int, blo: int, bhi: int) -> tuple[int, int, int]:
    """Quadratic-DP longest common substring of a[alo:ahi] and b[blo:bhi]."""
    best_len = 0
    best = (0, 0, 0)
    prev = [0] * (bhi - blo + 1)
    for i in range(alo, ahi):
        cur = [0] * (bhi - blo + 1)
        ca = a[i]
        for j in range(blo, bhi):
            if ca == b[j]:
                length = prev[j - blo] + 1
                cur[j - blo + 1] = length
                # strict > keeps the earliest (a_start, b_start) on ties
                if length > best_len:
                    best_len = length
                    best = (i - length + 1, j - length + 1, length)
        prev = cur
    return best


def _lcs_hashed(
    a: str, b: str, ha: _Hasher, hb: _Hasher, alo: int, ahi: int, blo: int, bhi: int
) -> tuple[int, int, int]:
    lo, hi = 1, min(ahi - alo, bhi - blo)
    best = 0
    while lo <= hi:
        mid = (lo + hi) // 2
        if np.intersect1d(ha.keys(alo, ahi, mid), hb.keys(blo, bhi, mid)).size:
            best = mid
            lo = mid + 1
        else:
            hi = mid - 1
    if best == 0:
        return (0, 0, 0)
    keys_a = ha.keys(alo, ahi, best)
    keys_b = hb.keys(blo, bhi, best)
    common = np.intersect1d(keys_a, keys_b)
    i = int(np.nonzero(np.isin(keys_a, common))[0][0])
    j = int(np.nonzero(keys_b == keys_a[i])[0][0])
    a0, b0 = alo + i, blo + j
    if a[a0:a0 + best] != b[b0:b0 + best]:  # double-hash collision, ~2^-60
        return _lcs_small(a, b, alo, ahi, blo, bhi)
    return (a0, b0, best)


def matching_blocks(a: str, b: str, min_len: int = MIN_BLOCK_LEN) -> list[MatchBlock]:
    """Non-overlapping common blocks of length >= min_len, sorted by a_start."""
    if min_len < 1:
        raise ValueError("min_len must be >= 1")
    if not a or not b:
        return []
    ha, hb = _Hasher(a), _Hasher(b)
    out: list[MatchBlock] = []
    stack = [(0, len(a), 0, len(b))]
    while stack:
        alo, ahi, blo, bhi = stack.pop()
        if alo >= ahi or blo >= bhi:
            continue
        if (ahi - alo) * (bhi - blo) <= _SMALL_AREA:
            i, j, length = _lcs_small(a, b, alo, ahi, blo, bhi)
        else:
            i, j, length = _lcs_hashed(a, b, ha, hb, alo, ahi, blo, bhi)
        if length == 0:
            continue
        if length >= min_len:
            out.append(MatchBlock(i, j, length))
        stack.append((alo, i, blo, j))
        stack.append((i + length, ahi, j + length, bhi))
    out.sort(key=lambda blk: blk.a_start)
    return out


def directional_overlap(source: str, target: str, min_len: int = MIN_BLOCK_LEN) -> float:
    """Total matched length over source length; 0 for an empty source."""
    if not source:
        return 0.0
    total = sum(blk.length for blk in matching_blocks(source, target, min_len))
    return total / len(source)


def _overlap_pair(text_a: str, text_b: str, min_len: int) -> OverlapResult:
    if not text_a or not text_b:
        return OverlapResult((), 0.0, 0.0, 0.0)
    forward_blocks = matching_blocks(text_a, text_b, min_len)
    forward = sum(blk.length for blk in forward_blocks) / len(text_a)
    backward = directional_overlap(text_b, text_a, min_len)
    return OverlapResult(tuple(forward_blocks), forward, backward, (forward + backward) / 2)


def tos(a: "NormalizedPosting", b: "NormalizedPosting", min_len: int = MIN_BLOCK_LEN) -> OverlapResult:
    """Text overlap score over the full normalized descriptions."""
    return _overlap_pair(a.norm_description, b.norm_description, min_len)


def sos(a: "NormalizedPosting", b: "NormalizedPosting", min_len: int = MIN_BLOCK_LEN) -> OverlapResult:
    """Skill overlap score over the extracted skill texts."""
    return _overlap_pair(a.skill_text, b.skill_text, min_len)
