"""Constant-time queries on a family of tries.

:class:`LinearIndex` answers level-ancestor queries with jump pointers
plus ladders, and computes the shortest period of root words with a KMP
automaton run over each trie.

:class:`CodeIndex` assigns equal integer names to equal upward words of
length ``2**k`` (a dictionary of basic factors over the whole family,
built together with the names of the reversed words).  Any upward segment
is then named by the two overlapping power-of-two blocks that cover it.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .arrays import RowIndex, depth_buckets, fixed_point
from .dtree import DTree, DTreeFamily
from .tree import log_table


class CodeTriple(NamedTuple):
    """Name of an upward segment: its length and two block codes."""

    length: int
    first: int
    second: int


def _asarray(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=np.int64))


class LinearIndex:
    """Level ancestors, distances and periods on a :class:`DTreeFamily`."""

    def __init__(self, family: DTreeFamily):
        self.family = family
        depth, parent = family.depth, family.parent
        n = family.n_nodes
        self.max_depth = int(depth.max()) if n else 0
        self.log = log_table(max(self.max_depth, 1))
        levels = int(self.log[self.max_depth]) + 1 if self.max_depth else 1
        jump = np.empty((levels, n), dtype=np.int64)
        if n:
            jump[0] = parent
        for k in range(1, levels):
            jump[k] = jump[k - 1][jump[k - 1]]
        self.jump = jump
        self._build_ladders()
        self._border_depth = np.full(n, -1, dtype=np.int64)
        self._sides_with_borders: set[int] = set()

    def _build_ladders(self) -> None:
        fam = self.family
        depth, parent = fam.depth, fam.parent
        n = fam.n_nodes
        height = np.zeros(n, dtype=np.int64)
        order, bounds = depth_buckets(depth) if n else (np.zeros(0, np.int64), np.zeros(1, np.int64))
        for d in range(bounds.size - 2, 0, -1):
            vs = order[bounds[d]:bounds[d + 1]]
            np.maximum.at(height, parent[vs], height[vs] + 1)
        nonroot = np.flatnonzero(depth > 0)
        pick = nonroot[np.lexsort((nonroot, -height[nonroot], parent[nonroot]))]
        firsts = np.ones(pick.size, dtype=bool)
        firsts[1:] = parent[pick[1:]] != parent[pick[:-1]]
        long_child = np.full(n, -1, dtype=np.int64)
        long_child[parent[pick[firsts]]] = pick[firsts]
        idx = np.arange(n, dtype=np.int64)
        is_head = (depth == 0) | (long_child[parent] != idx)
        head = fixed_point(np.where(is_head, idx, parent))
        heads = np.flatnonzero(is_head)
        path_len = height[heads] + 1
        ext = np.minimum(path_len, depth[heads])
        start = np.concatenate([[0], np.cumsum(path_len + ext)])
        path_of_head = np.full(n, -1, dtype=np.int64)
        path_of_head[heads] = np.arange(heads.size)
        p = path_of_head[head]
        bottom_depth = depth[head] + height[head]
        pos = start[p] + (bottom_depth - depth)
        ladder = np.empty(int(start[-1]), dtype=np.int64)
        ladder[pos] = idx
        # extend each path upwards by as many ancestors as it is long
        hp = np.repeat(np.arange(heads.size), ext)
        t = np.arange(hp.size) - np.repeat(np.cumsum(ext) - ext, ext) + 1
        slots = np.repeat(start[:-1] + path_len, ext) + t - 1
        ladder[slots] = self._up_binary(heads[hp], t)
        self.ladder = ladder
        self.pos = pos
        self.height = height

    def _up_binary(self, u: np.ndarray, h: np.ndarray) -> np.ndarray:
        u = u.copy()
        for k in range(self.jump.shape[0]):
            bit = ((h >> k) & 1).astype(bool)
            u[bit] = self.jump[k][u[bit]]
        return u

    def up(self, u, h) -> np.ndarray:
        """Ancestor of ``u`` at distance ``h`` (requires ``h <= depth(u)``)."""
        u = _asarray(u)
        h = np.broadcast_to(_asarray(h), u.shape)
        out = u.copy()
        m = h > 0
        if m.any():
            hm = h[m]
            k = self.log[hm]
            w = self.jump[k, u[m]]
            out[m] = self.ladder[self.pos[w] + hm - (1 << k)]
        return out

    def up_naive(self, u: int, h: int) -> int:
        for _ in range(h):
            u = int(self.family.parent[u])
        return u

    def lca(self, u, v) -> np.ndarray:
        u, v = _asarray(u), _asarray(v)
        d = self.family.depth
        du, dv = d[u], d[v]
        u = self.up(u, np.maximum(du - dv, 0))
        v = self.up(v, np.maximum(dv - du, 0))
        for k in range(self.jump.shape[0] - 1, -1, -1):
            differ = self.jump[k, u] != self.jump[k, v]
            u = np.where(differ, self.jump[k, u], u)
            v = np.where(differ, self.jump[k, v], v)
        return np.where(u == v, u, self.family.parent[u])

    def dist(self, u, v) -> np.ndarray:
        """Edge distance between two nodes of the same side."""
        d = self.family.depth
        u, v = _asarray(u), _asarray(v)
        return d[u] + d[v] - 2 * d[self.lca(u, v)]

    def is_ancestor(self, a, u) -> np.ndarray:
        a, u = _asarray(a), _asarray(u)
        d = self.family.depth
        ok = (d[a] <= d[u]) & (self.family.side[a] == self.family.side[u])
        res = np.zeros(u.size, dtype=bool)
        res[ok] = self.up(u[ok], d[u[ok]] - d[a[ok]]) == a[ok]
        return res

    def center(self, dtree: DTree, u: int, v: int) -> tuple[str, int]:
        """Middle node of the path from left node ``u`` to right node ``v``.

        For odd lengths the node nearer to ``u`` is returned.
        """
        d = self.family.depth
        a, b = int(d[u]), int(d[v])
        half = (a + b) // 2
        if half <= a:
            return "left", int(self.up(u, half)[0])
        return "right", int(self.up(v, a + b - half)[0])

    # periods -------------------------------------------------------------
    def _compute_borders(self, s: int) -> None:
        """Longest proper border of every root word of side ``s``.

        The trie is walked depth first while the current root path is kept
        on a stack; KMP fallback transitions are memoised per
        ``(node, label)`` so the whole side costs O(size * sigma).
        """
        fam = self.family
        dep, lab = fam.depth, fam.label
        kids, start = fam.children_lists()
        root = int(fam.side_root[s])
        border: dict[int, int] = {root: root}
        memo: dict[tuple[int, int], int] = {}
        path = [root]
        stack = [int(x) for x in kids[start[root]:start[root + 1]]]
        while stack:
            u = stack.pop()
            d = int(dep[u])
            del path[d:]
            path.append(u)
            c = int(lab[u])
            if d == 1:
                b = root
            else:
                x = border[path[d - 1]]
                below = path[int(dep[x]) + 1]
                if lab[below] == c:
                    b = below
                elif x == root:
                    b = root
                else:
                    chain = []
                    while True:
                        key = (x, c)
                        if key in memo:
                            b = memo[key]
                            break
                        chain.append(key)
                        y = border[x]
                        below = path[int(dep[y]) + 1]
                        if lab[below] == c:
                            b = below
                            break
                        if y == root:
                            b = root
                            break
                        x = y
                    for key in chain:
                        memo[key] = b
            border[u] = b
            stack.extend(int(y) for y in kids[start[u]:start[u + 1]])
        nodes = np.fromiter(border.keys(), dtype=np.int64, count=len(border))
        bnodes = np.fromiter(border.values(), dtype=np.int64, count=len(border))
        self._border_depth[nodes] = dep[bnodes]
        self._sides_with_borders.add(s)

    def per_len(self, u) -> np.ndarray:
        """Shortest period of the word on the root path of ``u`` (0 at a root)."""
        u = _asarray(u)
        for s in np.unique(self.family.side[u]).tolist():
            if s not in self._sides_with_borders:
                self._compute_borders(s)
        return self.family.depth[u] - self._border_depth[u]


def shortest_period(word) -> int:
    """Shortest period of a sequence by the KMP failure function."""
    n = len(word)
    if n == 0:
        return 0
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    return n - fail[-1]


class CodeIndex:
    """Names for upward segments and the palindrome tests built on them."""

    def __init__(self, family: DTreeFamily, linear: LinearIndex):
        self.family = family
        self.linear = linear
        depth = family.depth
        n = family.n_nodes
        levels = linear.jump.shape[0]
        fwd = np.full((levels, n), -1, dtype=np.int64)
        rev = np.full((levels, n), -1, dtype=np.int64)
        fwd[0] = np.where(depth >= 1, family.label, -1)
        rev[0] = fwd[0]
        names = max(family.sigma, 1)
        for k in range(levels - 1):
            u = np.flatnonzero(depth >= (1 << (k + 1)))
            w = linear.jump[k, u]
            f_pair = fwd[k, u] * names + fwd[k, w]
            r_pair = rev[k, w] * names + rev[k, u]
            uniq, inv = np.unique(np.concatenate([f_pair, r_pair]), return_inverse=True)
            fwd[k + 1, u] = inv[:u.size]
            rev[k + 1, u] = inv[u.size:]
            names = max(int(uniq.size), 1)
        self.fwd, self.rev = fwd, rev
        nodes = np.arange(n, dtype=np.int64)
        h, c1, c2 = self.segment(nodes, depth)
        self._root_words = RowIndex([family.side, h, c1, c2])
        half = depth // 2
        a, b, c = self.segment(nodes, half)
        ra, rb, rc = self.reversed_segment(linear.up(nodes, depth - half), half)
        self.pal = (a == ra) & (b == rb) & (c == rc)

    # naming ----------------------------------------------------------------
    def segment(self, u, h) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Name of the upward word of length ``h`` starting at ``u``."""
        u = _asarray(u)
        h = np.broadcast_to(_asarray(h), u.shape)
        c1 = np.full(u.size, -1, dtype=np.int64)
        c2 = np.full(u.size, -1, dtype=np.int64)
        m = h > 0
        if m.any():
            hm, um = h[m], u[m]
            k = self.linear.log[hm]
            c1[m] = self.fwd[k, um]
            c2[m] = self.fwd[k, self.linear.up(um, hm - (1 << k))]
        return h.copy(), c1, c2

    def reversed_segment(self, u, h) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Name of the reverse of the upward word of length ``h`` from ``u``."""
        u = _asarray(u)
        h = np.broadcast_to(_asarray(h), u.shape)
        c1 = np.full(u.size, -1, dtype=np.int64)
        c2 = np.full(u.size, -1, dtype=np.int64)
        m = h > 0
        if m.any():
            hm, um = h[m], u[m]
            k = self.linear.log[hm]
            c1[m] = self.rev[k, self.linear.up(um, hm - (1 << k))]
            c2[m] = self.rev[k, um]
        return h.copy(), c1, c2

    def label(self, u: int, v: int) -> CodeTriple:
        """Name of the word on the path from ``u`` up to its ancestor ``v``."""
        h = int(self.family.depth[u] - self.family.depth[v])
        a, b, c = self.segment([u], [h])
        return CodeTriple(int(a[0]), int(b[0]), int(c[0]))

    def is_equal(self, u1, v1, u2, v2) -> np.ndarray:
        """Do the upward segments ``u1 -> v1`` and ``u2 -> v2`` spell the same word?"""
        d = self.family.depth
        u1, v1, u2, v2 = map(_asarray, (u1, v1, u2, v2))
        a = self.segment(u1, d[u1] - d[v1])
        b = self.segment(u2, d[u2] - d[v2])
        return (a[0] == b[0]) & (a[1] == b[1]) & (a[2] == b[2])

    def is_palindrome_up(self, u, h) -> np.ndarray:
        """Is the upward word of length ``h`` from ``u`` a palindrome?"""
        u = _asarray(u)
        h = np.broadcast_to(_asarray(h), u.shape)
        half = h // 2
        a = self.segment(u, half)
        b = self.reversed_segment(self.linear.up(u, h - half), half)
        return (a[1] == b[1]) & (a[2] == b[2])

    # cross queries ---------------------------------------------------------
    def exists(self, right_side, u, h) -> np.ndarray:
        """A node ``v`` of ``right_side`` with ``W_r(v)`` equal to the reverse of
        the upward word of length ``h`` from ``u``; -1 when there is none."""
        u = _asarray(u)
        h = np.broadcast_to(_asarray(h), u.shape)
        side = np.broadcast_to(_asarray(right_side), u.shape)
        seg = self.segment(u, h)
        return self._root_words.lookup([side, *seg])

    def is_palindrome_cross(self, dtree: DTree, x, y) -> np.ndarray:
        """Is ``W_l(x) + W_r(y)`` a palindrome?"""
        x, y = _asarray(x), _asarray(y)
        d = self.family.depth
        a, b = d[x], d[y]
        out = np.zeros(x.size, dtype=bool)
        big = a >= b
        if big.any():
            xs, ys, bs = x[big], y[big], b[big]
            s1 = self.segment(xs, bs)
            s2 = self.segment(ys, bs)
            out[big] = (s1[1] == s2[1]) & (s1[2] == s2[2]) & \
                self.pal[self.linear.up(xs, bs)]
        small = ~big
        if small.any():
            xs, ys, as_ = x[small], y[small], a[small]
            s1 = self.segment(ys, as_)
            s2 = self.segment(xs, as_)
            out[small] = (s1[1] == s2[1]) & (s1[2] == s2[2]) & \
                self.pal[self.linear.up(ys, as_)]
        return out
