"""Small numpy building blocks shared by the tree indexes.

Everything here works on flat integer arrays that describe rooted forests
(``parent[v] == v`` marks a root) so that whole forests can be processed
level by level without per-node Python loops.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import breadth_first_order


def floor_log2(values: np.ndarray) -> np.ndarray:
    """Exact floor(log2(x)) for positive integers below 2**53."""
    values = np.asarray(values)
    _, exp = np.frexp(values.astype(np.float64))
    return (exp - 1).astype(np.int64)


def fixed_point(nxt: np.ndarray) -> np.ndarray:
    """Follow ``nxt`` pointers until every chain reaches a self-loop."""
    nxt = np.asarray(nxt, dtype=np.int64).copy()
    while True:
        nn = nxt[nxt]
        if np.array_equal(nn, nxt):
            return nxt
        nxt = nn


def forest_depths(parent: np.ndarray) -> np.ndarray:
    """Depth of every vertex by pointer jumping (roots have depth 0)."""
    parent = np.asarray(parent, dtype=np.int64)
    idx = np.arange(parent.size, dtype=np.int64)
    dist = (parent != idx).astype(np.int64)
    nxt = parent.copy()
    while True:
        nn = nxt[nxt]
        if np.array_equal(nn, nxt):
            return dist
        dist = dist + dist[nxt]
        nxt = nn


def depth_buckets(depth: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vertices sorted by depth plus bucket boundaries.

    Bucket ``d`` is ``order[bounds[d]:bounds[d + 1]]``.
    """
    depth = np.asarray(depth)
    order = np.argsort(depth, kind="stable")
    top = int(depth.max()) if depth.size else -1
    bounds = np.searchsorted(depth[order], np.arange(top + 2))
    return order, bounds


def orient_forest(n_vertices: int, ends_a: np.ndarray, ends_b: np.ndarray,
                  roots: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Root every component of an undirected forest at the given vertex.

    Returns ``(parent, depth)`` where roots are their own parent.
    """
    roots = np.asarray(roots, dtype=np.int64)
    sup = n_vertices
    rows = np.concatenate([ends_a, ends_b, np.full(roots.size, sup, dtype=np.int64)])
    cols = np.concatenate([ends_b, ends_a, roots])
    graph = sparse.csr_matrix(
        (np.ones(rows.size, dtype=np.int8), (rows, cols)),
        shape=(sup + 1, sup + 1))
    order, pred = breadth_first_order(graph, sup, directed=True,
                                      return_predecessors=True)
    if order.size != n_vertices + 1:
        raise ValueError("forest has a component without a root")
    parent = pred[:n_vertices].astype(np.int64)
    parent[roots] = roots
    return parent, forest_depths(parent)


def subtree_sizes(parent: np.ndarray, depth: np.ndarray) -> np.ndarray:
    """Number of vertices in every rooted subtree."""
    size = np.ones(parent.size, dtype=np.int64)
    order, bounds = depth_buckets(depth)
    for d in range(bounds.size - 2, 0, -1):
        vs = order[bounds[d]:bounds[d + 1]]
        np.add.at(size, parent[vs], size[vs])
    return size


class RowIndex:
    """Exact lookup of integer rows in a static table.

    Rows are packed into one int64 key when the column ranges fit in 62
    bits; otherwise they fall back to big-endian byte strings, which sort
    in the same order.  Lookups are a single ``searchsorted``.
    """

    def __init__(self, columns: Sequence[np.ndarray]):
        cols = [np.asarray(c, dtype=np.int64) for c in columns]
        self.n_rows = cols[0].size if cols else 0
        if self.n_rows:
            self._lo = np.array([c.min() for c in cols], dtype=np.int64)
            self._hi = np.array([c.max() for c in cols], dtype=np.int64)
        else:
            self._lo = np.zeros(len(cols), dtype=np.int64)
            self._hi = np.full(len(cols), -1, dtype=np.int64)
        widths = [int(h - l + 1).bit_length() for l, h in zip(self._lo, self._hi)]
        self._shifts = None
        if sum(widths) <= 62:
            shifts, acc = [], 0
            for w in reversed(widths):
                shifts.append(acc)
                acc += w
            self._shifts = shifts[::-1]
        keys = self._pack(cols)
        self._order = np.argsort(keys, kind="stable")
        self._keys = keys[self._order]

    def _pack(self, cols: list[np.ndarray]) -> np.ndarray:
        rel = [c - l for c, l in zip(cols, self._lo)]
        if self._shifts is not None:
            out = np.zeros(rel[0].size if rel else 0, dtype=np.int64)
            for c, s in zip(rel, self._shifts):
                out |= c << s
            return out
        mat = np.ascontiguousarray(np.stack(rel, axis=1).astype(">u8"))
        return mat.view(np.dtype((np.void, 8 * len(rel)))).ravel()

    def lookup(self, columns: Sequence[np.ndarray]) -> np.ndarray:
        """Row index of each query row in the table, or -1."""
        cols = [np.asarray(c, dtype=np.int64) for c in columns]
        m = cols[0].size
        out = np.full(m, -1, dtype=np.int64)
        if m == 0 or self.n_rows == 0:
            return out
        ok = np.ones(m, dtype=bool)
        for c, l, h in zip(cols, self._lo, self._hi):
            ok &= (c >= l) & (c <= h)
        if not ok.any():
            return out
        keys = self._pack([c[ok] for c in cols])
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, self.n_rows - 1)
        hit = self._keys[pos] == keys
        sel = np.flatnonzero(ok)
        out[sel[hit]] = self._order[pos[hit]]
        return out


def first_of_unique_rows(columns: Sequence[np.ndarray]) -> np.ndarray:
    """Indices of the first occurrence of every distinct row."""
    cols = [np.asarray(c, dtype=np.int64) for c in columns]
    if cols[0].size == 0:
        return np.zeros(0, dtype=np.int64)
    index = RowIndex(cols)
    keys = index._keys
    firsts = np.ones(keys.size, dtype=bool)
    firsts[1:] = keys[1:] != keys[:-1]
    return np.sort(index._order[firsts])
