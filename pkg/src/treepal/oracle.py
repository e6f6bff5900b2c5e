"""Brute-force reference answers by enumerating every simple path."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .tree import LabeledTree, PalTriple

DEFAULT_LIMIT = 2000


class OracleLimitError(RuntimeError):
    """The tree is larger than the oracle is allowed to enumerate."""


@dataclass
class PalSet:
    """Distinct palindromes, each with one witness path ``(u, v)``."""

    entries: dict[str, tuple[int, int]] = field(default_factory=dict)

    def add(self, word: str, u: int, v: int) -> None:
        self.entries.setdefault(word, (u, v))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    @property
    def words(self) -> set[str]:
        return set(self.entries)

    def pairs(self) -> set[tuple[int, str]]:
        return {(len(w), w) for w in self.entries}

    def triple(self, word: str, tree: LabeledTree) -> PalTriple:
        """Convert a witness path into the half-path triple form."""
        u, v = self.entries[word]
        half = (len(word) + 1) // 2
        mid = tree.path_nodes(u, v)[half]
        return PalTriple(len(word), u, mid)


def _guard(tree: LabeledTree, limit: int | None) -> None:
    if limit is not None and tree.n_edges > limit:
        raise OracleLimitError(f"{tree.n_edges} edges exceed the oracle limit of {limit}")


def oracle_all(tree: LabeledTree, limit: int | None = DEFAULT_LIMIT) -> PalSet:
    """All distinct non-empty palindromes read along simple paths."""
    _guard(tree, limit)
    adj = tree.adjacency()
    sym = tree.alphabet
    out = PalSet()
    for s in range(tree.n):
        stack = [(s, -1, "")]
        while stack:
            x, par, w = stack.pop()
            if w and w not in out.entries and w == w[::-1]:
                out.entries[w] = (s, x)
            for y, c in adj[x]:
                if y != par:
                    stack.append((y, x, w + sym[c]))
    return out


def oracle_all_cubic(tree: LabeledTree, limit: int | None = DEFAULT_LIMIT) -> PalSet:
    """Independent cross-check: path words rebuilt from scratch per node pair."""
    _guard(tree, limit)
    out = PalSet()
    for u in range(tree.n):
        for v in range(tree.n):
            if u != v:
                w = tree.path_value(u, v)
                if w == w[::-1]:
                    out.add(w, u, v)
    return out


def oracle_through(tree: LabeledTree, r: int, limit: int | None = DEFAULT_LIMIT) -> PalSet:
    """Distinct palindromes on simple paths that contain node ``r``."""
    _guard(tree, limit)
    adj = tree.adjacency()
    sym = tree.alphabet
    towards: list[tuple[int, int, str]] = [(r, -1, "")]   # node, branch, word node->r
    stack = [(r, -1, -1, "")]
    while stack:
        x, par, branch, w = stack.pop()
        for y, c in adj[x]:
            if y != par:
                b = y if x == r else branch
                wy = sym[c] + w
                towards.append((y, b, wy))
                stack.append((y, x, b, wy))
    out = PalSet()
    for x, bx, wx in towards:
        for y, by, wy in towards:
            if x == y or (bx == by and bx != -1):
                continue
            word = wx + wy[::-1]
            if word == word[::-1]:
                out.add(word, x, y)
    return out


def oracle_test(tree: LabeledTree, k: int, limit: int | None = DEFAULT_LIMIT) -> bool:
    return any(len(w) == k for w in oracle_all(tree, limit))


def oracle_longest(tree: LabeledTree,
                   limit: int | None = DEFAULT_LIMIT) -> tuple[int, PalTriple | None]:
    pals = oracle_all(tree, limit)
    if not len(pals):
        return 0, None
    best = max(pals, key=lambda w: (len(w), w))
    return len(best), pals.triple(best, tree)
