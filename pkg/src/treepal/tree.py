"""Edge-labelled trees, path words and the even-length expansion.

Nodes are numbered ``0..n-1`` internally; the text format and the CLI use
1-based ids.  Labels are interned to small integers in sorted symbol order
so that every index built on top of a tree is deterministic.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .arrays import floor_log2

SENTINEL = "\x00"


class TreeFormatError(ValueError):
    """Malformed tree input; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.reason = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateEdgeError(TreeFormatError):
    pass


class SelfLoopError(TreeFormatError):
    pass


class NodeRangeError(TreeFormatError):
    pass


class LabelError(TreeFormatError):
    pass


class CycleError(TreeFormatError):
    pass


class DisconnectedTreeError(TreeFormatError):
    pass


class PalTriple(NamedTuple):
    """One palindrome occurrence.

    ``length`` is the palindrome length and the path from ``u`` to ``v``
    has ``ceil(length / 2)`` edges; its word is the first half of the
    palindrome (the middle letter included for odd lengths).
    """

    length: int
    u: int
    v: int


def is_label(symbol: str) -> bool:
    return isinstance(symbol, str) and len(symbol) == 1 and symbol.isprintable() \
        and not symbol.isspace()


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def _check_edges(n: int, edges: Sequence[tuple[int, int, str]],
                 lines: Sequence[int | None] | None = None,
                 labels_checked: bool = True) -> None:
    if n < 1:
        raise TreeFormatError("a tree needs at least one node", lines[0] if lines else None)
    seen: set[tuple[int, int]] = set()
    uf = _UnionFind(n)
    for i, (u, v, c) in enumerate(edges):
        where = lines[i] if lines else None
        if not (0 <= u < n and 0 <= v < n):
            raise NodeRangeError(f"node id out of range 1..{n}", where)
        if u == v:
            raise SelfLoopError(f"self-loop at node {u + 1}", where)
        if labels_checked and not is_label(c):
            raise LabelError(f"label {c!r} is not a single printable character", where)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {u + 1}-{v + 1}", where)
        seen.add(key)
        if not uf.union(u, v):
            raise CycleError(f"edge {u + 1}-{v + 1} closes a cycle", where)
    if len(edges) != n - 1:
        raise DisconnectedTreeError(
            f"{len(edges)} edges cannot connect {n} nodes", lines[-1] if lines else None)


class LabeledTree:
    """An undirected tree whose edges carry one-character labels.

    ``edges`` holds ``(u, v, symbol)`` with 0-based node ids.  Rooted views
    (parent pointers, depths, binary lifting) use node 0 as the root and
    are built on first use.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int, str]], *,
                 alphabet: Sequence[str] | None = None, validate: bool = True):
        edges = [(int(u), int(v), str(c)) for u, v, c in edges]
        if validate:
            _check_edges(n, edges, labels_checked=alphabet is None)
        self.n = int(n)
        self.edges = tuple(edges)
        if alphabet is None:
            alphabet = sorted({c for _, _, c in edges})
        self.alphabet: tuple[str, ...] = tuple(alphabet)
        self._code = {c: i for i, c in enumerate(self.alphabet)}
        self.edge_labels = np.array([self._code[c] for _, _, c in edges], dtype=np.int64)
        self._rooted = None
        self._lift = None
        self._adj = None

    # basic views ---------------------------------------------------------
    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def sigma(self) -> int:
        """Number of distinct label codes."""
        return len(self.alphabet)

    def code(self, symbol: str) -> int:
        return self._code[symbol]

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per node, the list of ``(neighbour, label code)``."""
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
            for (u, v, _), c in zip(self.edges, self.edge_labels.tolist()):
                adj[u].append((v, c))
                adj[v].append((u, c))
            self._adj = adj
        return self._adj

    def _root_at_zero(self):
        if self._rooted is None:
            parent = np.zeros(self.n, dtype=np.int64)
            plabel = np.full(self.n, -1, dtype=np.int64)
            depth = np.zeros(self.n, dtype=np.int64)
            adj = self.adjacency()
            seen = [False] * self.n
            seen[0] = True
            queue = deque([0])
            par, lab, dep = [0] * self.n, [-1] * self.n, [0] * self.n
            while queue:
                x = queue.popleft()
                for y, c in adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        par[y], lab[y], dep[y] = x, c, dep[x] + 1
                        queue.append(y)
            parent[:] = par
            plabel[:] = lab
            depth[:] = dep
            self._rooted = (parent, plabel, depth)
        return self._rooted

    @property
    def parent(self) -> np.ndarray:
        """Parent of every node when rooted at node 0 (the root maps to itself)."""
        return self._root_at_zero()[0]

    @property
    def parent_label(self) -> np.ndarray:
        """Label code of the edge to the parent (-1 for the root)."""
        return self._root_at_zero()[1]

    @property
    def depth(self) -> np.ndarray:
        return self._root_at_zero()[2]

    def _jumps(self) -> list[np.ndarray]:
        if self._lift is None:
            parent, _, depth = self._root_at_zero()
            table = [parent]
            top = int(depth.max()) if self.n else 0
            while (1 << len(table)) <= top:
                prev = table[-1]
                table.append(prev[prev])
            self._lift = table
        return self._lift

    # queries -------------------------------------------------------------
    def ancestor(self, nodes, steps):
        """Ancestor of each node ``steps`` levels up (rooted at node 0)."""
        nodes = np.array(nodes, dtype=np.int64, copy=True)
        steps = np.broadcast_to(np.asarray(steps, dtype=np.int64), nodes.shape)
        for k, table in enumerate(self._jumps()):
            bit = ((steps >> k) & 1).astype(bool)
            nodes[bit] = table[nodes[bit]]
        return nodes

    def lca(self, u, v):
        u = np.atleast_1d(np.asarray(u, dtype=np.int64))
        v = np.atleast_1d(np.asarray(v, dtype=np.int64))
        depth = self.depth
        du, dv = depth[u], depth[v]
        swap = du < dv
        u, v = np.where(swap, v, u), np.where(swap, u, v)
        u = self.ancestor(u, np.abs(du - dv))
        table = self._jumps()
        for k in range(len(table) - 1, -1, -1):
            differ = table[k][u] != table[k][v]
            u = np.where(differ, table[k][u], u)
            v = np.where(differ, table[k][v], v)
        return np.where(u == v, u, self.parent[u])

    def distance(self, u, v):
        w = self.lca(u, v)
        d = self.depth
        return d[np.atleast_1d(u)] + d[np.atleast_1d(v)] - 2 * d[w]

    def walk(self, src, dst, steps):
        """Node reached after ``steps`` edges on the path from src to dst."""
        src = np.atleast_1d(np.asarray(src, dtype=np.int64))
        dst = np.atleast_1d(np.asarray(dst, dtype=np.int64))
        steps = np.broadcast_to(np.asarray(steps, dtype=np.int64), src.shape)
        w = self.lca(src, dst)
        d = self.depth
        up_len = d[src] - d[w]
        total = up_len + d[dst] - d[w]
        if np.any(steps > total) or np.any(steps < 0):
            raise ValueError("walk leaves the path")
        going_up = steps <= up_len
        out = np.empty_like(src)
        out[going_up] = self.ancestor(src[going_up], steps[going_up])
        down = ~going_up
        out[down] = self.ancestor(dst[down], total[down] - steps[down])
        return out

    def path_nodes(self, u: int, v: int) -> list[int]:
        parent, _, depth = self._root_at_zero()
        left, right = [u], [v]
        while left[-1] != right[-1]:
            if depth[left[-1]] >= depth[right[-1]]:
                left.append(int(parent[left[-1]]))
            else:
                right.append(int(parent[right[-1]]))
        return left + right[-2::-1]

    def path_codes(self, u: int, v: int) -> list[int]:
        """Label codes along the simple path from u to v."""
        parent, plabel, depth = self._root_at_zero()
        up_part, down_part = [], []
        while u != v:
            if depth[u] >= depth[v]:
                up_part.append(int(plabel[u]))
                u = int(parent[u])
            else:
                down_part.append(int(plabel[v]))
                v = int(parent[v])
        return up_part + down_part[::-1]

    def path_value(self, u: int, v: int) -> str:
        """The word read along the simple path from u to v ("" when u == v)."""
        return "".join(self.alphabet[c] for c in self.path_codes(u, v))

    def decode(self, codes: Iterable[int]) -> str:
        return "".join(self.alphabet[c] for c in codes)

    def serialize(self) -> str:
        lines = [str(self.n)]
        lines += [f"{u + 1} {v + 1} {c}" for u, v, c in self.edges]
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"LabeledTree(n={self.n}, alphabet={''.join(self.alphabet)!r})"


def parse_tree(text: str) -> LabeledTree:
    """Parse the line-oriented edge-list format.

    The first non-comment line holds ``n``; each further line is ``u v c``
    with 1-based node ids.  Lines starting with ``#`` and blank lines are
    ignored.
    """
    n = None
    header_line = None
    edges: list[tuple[int, int, str]] = []
    where: list[int | None] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1 or not fields[0].isdigit():
                raise TreeFormatError("expected the node count", lineno)
            n, header_line = int(fields[0]), lineno
            if n < 1:
                raise TreeFormatError("a tree needs at least one node", lineno)
            continue
        if len(fields) != 3:
            if len(fields) > 3:
                raise LabelError("expected 'u v c' with a one-character label", lineno)
            raise TreeFormatError("expected 'u v c'", lineno)
        u, v, c = fields
        try:
            ui, vi = int(u), int(v)
        except ValueError:
            raise TreeFormatError("node ids must be integers", lineno) from None
        if not is_label(c):
            raise LabelError(f"label {c!r} is not a single printable character", lineno)
        edges.append((ui - 1, vi - 1, c))
        where.append(lineno)
    if n is None:
        raise TreeFormatError("empty input", 1)
    _check_edges(n, edges, where or [header_line])
    return LabeledTree(n, edges, validate=False)


def read_tree(path: str | Path) -> LabeledTree:
    return parse_tree(Path(path).read_text())


def tree_from_path_word(word: str) -> LabeledTree:
    """A path whose edges spell ``word`` from node 0 to node len(word)."""
    return LabeledTree(len(word) + 1, [(i, i + 1, c) for i, c in enumerate(word)])


# --------------------------------------------------------------------------
# even-length expansion


@dataclass(frozen=True)
class ExpandedTree:
    """Every edge ``(u, v, c)`` replaced by the path ``$ c c $``.

    Original nodes keep their ids; edge ``i`` contributes the three inner
    nodes ``n + 3i``, ``n + 3i + 1`` and ``n + 3i + 2`` (next to u, middle,
    next to v).  The separator symbol has the largest label code.
    """

    source: LabeledTree
    tree: LabeledTree

    @property
    def separator(self) -> int:
        return self.tree.sigma - 1

    def is_original(self, x) -> np.ndarray | bool:
        return np.asarray(x) < self.source.n

    def origin(self, x: int) -> int | tuple[int, int]:
        """The original node, or the original edge endpoints of an inner node."""
        n = self.source.n
        if x < n:
            return x
        u, v, _ = self.source.edges[(x - n) // 3]
        return (u, v)


def expand_even(tree: LabeledTree) -> ExpandedTree:
    n = tree.n
    edges = []
    for i, (u, v, c) in enumerate(tree.edges):
        a, b, d = n + 3 * i, n + 3 * i + 1, n + 3 * i + 2
        edges += [(u, a, SENTINEL), (a, b, c), (b, d, c), (d, v, SENTINEL)]
    alphabet = tree.alphabet + (SENTINEL,)
    big = LabeledTree(n + 3 * tree.n_edges, edges, alphabet=alphabet, validate=False)
    return ExpandedTree(tree, big)


def expand_triple(expanded: ExpandedTree, t: PalTriple) -> PalTriple:
    """The occurrence in the expanded tree that represents ``t``."""
    v = int(expanded.tree.walk([t.u], [t.v], [2 * t.length])[0]) if t.length else t.u
    return PalTriple(4 * t.length, t.u, v)


def contract_many(expanded: ExpandedTree, lengths: np.ndarray, us: np.ndarray,
                  vs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised inverse of :func:`expand_triple`.

    Expects occurrences of length divisible by 4 that start at an original
    node; the half endpoint then lies on an original node or on the middle
    inner node of an edge.
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    n = expanded.source.n
    if np.any(lengths % 4) or np.any(us >= n):
        raise ValueError("not the image of an original occurrence")
    out_v = vs.copy()
    inner = vs >= n
    if inner.any():
        rel = vs[inner] - n
        if np.any(rel % 3 != 1):
            raise ValueError("half endpoint is not an edge midpoint")
        ends = np.array([(u, v) for u, v, _ in expanded.source.edges], dtype=np.int64)
        e = ends[rel // 3]
        src = expanded.source
        d0 = src.distance(us[inner], e[:, 0])
        d1 = src.distance(us[inner], e[:, 1])
        out_v[inner] = np.where(d0 > d1, e[:, 0], e[:, 1])
    return lengths // 4, us, out_v


def contract_triple(expanded: ExpandedTree, t: PalTriple) -> PalTriple:
    ell, u, v = contract_many(expanded, [t.length], [t.u], [t.v])
    return PalTriple(int(ell[0]), int(u[0]), int(v[0]))


def palindrome_of(tree: LabeledTree, t: PalTriple) -> str:
    """Materialise the palindrome described by ``t``."""
    half = tree.path_value(t.u, t.v)
    return half + (half[::-1] if t.length % 2 == 0 else half[-2::-1])


def log_table(limit: int) -> np.ndarray:
    """``floor(log2(h))`` for ``h`` in ``1..limit`` (index 0 is unused)."""
    table = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        table[1:] = floor_log2(np.arange(1, limit + 1))
    return table
