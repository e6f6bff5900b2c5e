"""Exact set difference ``A - B = {a - b}`` by number-theoretic transform.

Each set becomes a 0/1 coefficient vector and the difference set is the
support of one polynomial product.  Coefficients count pairs, so they are
at most ``U + 1``; the product modulo the NTT prime is therefore exact
whenever ``U + 1`` is below the prime.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

PRIME = 998_244_353          # 119 * 2**23 + 1
ROOT = 3
MAX_LENGTH = 1 << 23


@dataclass(frozen=True)
class IntSet:
    """Integers in ``[offset, offset + bound]`` stored as a membership mask."""

    bound: int
    mask: np.ndarray
    offset: int = 0

    @classmethod
    def of(cls, values: Iterable[int], bound: int, offset: int = 0) -> "IntSet":
        vals = np.fromiter((int(v) - offset for v in values), dtype=np.int64)
        if vals.size and (vals.min() < 0 or vals.max() > bound):
            raise ValueError("value outside the universe")
        mask = np.zeros(bound + 1, dtype=bool)
        mask[vals] = True
        return cls(bound, mask, offset)

    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask) + self.offset

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, v: int) -> bool:
        i = v - self.offset
        return 0 <= i <= self.bound and bool(self.mask[i])


def _powers(w: int, m: int) -> np.ndarray:
    out = np.ones(m, dtype=np.int64)
    step, filled = w, 1
    while filled < m:
        take = min(filled, m - filled)
        out[filled:filled + take] = out[:take] * step % PRIME
        step = step * step % PRIME
        filled += take
    return out


def _bit_reverse(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def ntt(a: np.ndarray, invert: bool = False) -> np.ndarray:
    """Iterative radix-2 transform over Z/PRIME; ``len(a)`` a power of two."""
    n = a.size
    a = (np.asarray(a, dtype=np.int64) % PRIME)[_bit_reverse(n)]
    length = 2
    while length <= n:
        w = pow(ROOT, (PRIME - 1) // length, PRIME)
        if invert:
            w = pow(w, PRIME - 2, PRIME)
        half = length // 2
        tw = _powers(w, half)
        blocks = a.reshape(-1, length)
        lo = blocks[:, :half]
        hi = blocks[:, half:] * tw % PRIME
        a = np.concatenate([(lo + hi) % PRIME, (lo - hi) % PRIME], axis=1).reshape(-1)
        length *= 2
    if invert:
        a = a * pow(n, PRIME - 2, PRIME) % PRIME
    return a


def convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Cyclic-free product of two non-negative integer sequences modulo PRIME."""
    size = 1
    while size < f.size + g.size - 1:
        size *= 2
    if size > MAX_LENGTH:
        raise ValueError("transform length exceeds the prime's two-adic order")
    fa = np.zeros(size, dtype=np.int64)
    ga = np.zeros(size, dtype=np.int64)
    fa[:f.size] = f
    ga[:g.size] = g
    return ntt(ntt(fa) * ntt(ga) % PRIME, invert=True)[:f.size + g.size - 1]


def set_difference(a: IntSet, b: IntSet) -> IntSet:
    """``{x - y : x in a, y in b}`` as an IntSet over ``[-U, U]`` (offset ``-U``)."""
    if a.offset != b.offset:
        raise ValueError("both sets must share the same universe")
    u = max(a.bound, b.bound)
    if u + 1 >= PRIME:
        raise ValueError("universe too large for exact counting")
    f = np.zeros(u + 1, dtype=np.int64)
    g = np.zeros(u + 1, dtype=np.int64)
    f[np.flatnonzero(a.mask)] = 1
    g[u - np.flatnonzero(b.mask)] = 1
    prod = convolve(f, g)          # index i + (u - j) for x = i, y = j
    mask = np.zeros(2 * u + 1, dtype=bool)
    mask[:prod.size] = prod != 0
    return IntSet(2 * u, mask, -u)


def set_difference_naive(a: Iterable[int], b: Iterable[int]) -> set[int]:
    bs = list(b)
    return {x - y for x in a for y in bs}
