"""Deterministic tree families: labelled paths, palindrome-rich combs, random trees.

Random trees draw from numpy's PCG64 bit generator, consuming its raw 64-bit
output stream directly.  The raw stream of a named bit generator is fixed
across platforms and numpy versions (unlike the higher-level ``Generator``
methods), so ``gen_random(n, sigma, seed)`` is reproducible everywhere.
A raw draw ``x`` is mapped to ``range(m)`` as ``(x * m) >> 64``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass

import numpy as np

from .tree import LabeledTree

SYMBOLS = string.ascii_lowercase + string.ascii_uppercase + string.digits


def symbols(sigma: int) -> str:
    if not 1 <= sigma <= len(SYMBOLS):
        raise ValueError(f"alphabet size must be in 1..{len(SYMBOLS)}")
    return SYMBOLS[:sigma]


def gen_path(n: int, pattern: str) -> LabeledTree:
    """A path of ``n`` edges whose labels cycle through ``pattern``."""
    if n < 1:
        raise ValueError("a path needs at least one edge")
    if not pattern:
        raise ValueError("pattern must be non-empty")
    return LabeledTree(n + 1, [(i, i + 1, pattern[i % len(pattern)]) for i in range(n)])


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p ** 0.5) + 1))


@dataclass(frozen=True)
class CombShape:
    """Junction positions and spine gaps of the comb for prime ``p``."""

    p: int
    junctions: tuple[int, ...]
    gaps: tuple[int, ...]

    @property
    def n_edges(self) -> int:
        return sum(self.gaps) + len(self.junctions) * self.p


def comb_shape(p: int) -> CombShape:
    """Junction ``k`` sits at spine offset ``2pk + (k*k mod p)`` for ``k = 1..p-1``."""
    if p < 5 or not is_prime(p):
        raise ValueError("comb needs a prime p >= 5")
    junctions = tuple(2 * p * k + (k * k) % p for k in range(1, p))
    gaps = tuple(b - a for a, b in zip(junctions, junctions[1:]))
    return CombShape(p, junctions, gaps)


def gen_comb(p: int) -> LabeledTree:
    """Spine of '0' edges with a tooth of ``p`` '1' edges at every junction.

    Consecutive junctions are ``gaps[k]`` spine edges apart; both end
    junctions carry teeth.  Spine nodes come first in spine order.
    """
    shape = comb_shape(p)
    spine_len = sum(shape.gaps)
    edges = [(i, i + 1, "0") for i in range(spine_len)]
    nxt = spine_len + 1
    offsets = np.concatenate([[0], np.cumsum(shape.gaps)]).tolist()
    for at in offsets:
        prev = at
        for _ in range(p):
            edges.append((prev, nxt, "1"))
            prev, nxt = nxt, nxt + 1
    return LabeledTree(nxt, edges)


def _raw_draws(seed: int, count: int) -> list[int]:
    gen = np.random.PCG64(seed)
    return [int(x) for x in gen.random_raw(count)] if count else []


def gen_random(n: int, sigma: int, seed: int) -> LabeledTree:
    """Random recursive tree with ``n`` edges and uniform labels.

    Node ``i`` (for ``i = 1..n``) attaches to a uniform node among ``0..i-1``.
    Each new node consumes two raw draws, first the parent then the label.
    """
    if n < 1:
        raise ValueError("a tree needs at least one edge")
    alphabet = symbols(sigma)
    draws = _raw_draws(seed, 2 * n)
    edges = []
    for i in range(1, n + 1):
        x, y = draws[2 * i - 2], draws[2 * i - 1]
        edges.append(((x * i) >> 64, i, alphabet[(y * sigma) >> 64]))
    return LabeledTree(n + 1, edges)
