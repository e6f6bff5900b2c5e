"""Deterministic double trees and the centroid family that covers a tree.

A *side* is a deterministic trie: paths leaving a centre node ``r`` inside
one part of the tree, with equal-labelled children merged.  A D-tree
pairs a left side with a right side that share the centre; its path words
are ``W_l(x) + W_r(y)``, that is the upward word from ``x`` to the centre
followed by the downward word to ``y``.

:func:`decompose_family` builds every side of a recursive centroid
decomposition at once.  Each round handles all current pieces together:
it roots them, finds their centroids, splits the centroid components into
two balanced groups, and merges each group into a trie level by level.
Nodes of all sides live in one set of flat arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import orient_forest, fixed_point, subtree_sizes, depth_buckets
from .tree import LabeledTree

FAMILY_EDGE_FACTOR = 8


class InvariantError(AssertionError):
    """A structural guarantee of the construction was violated."""


def split_components(sizes) -> tuple[list[int], list[int]]:
    """Greedy two-way split of component sizes.

    Components go, largest first, to the currently lighter group (ties to
    the first).  Returns the component indices of each group.
    """
    sizes = [int(s) for s in sizes]
    order = sorted(range(len(sizes)), key=lambda i: -sizes[i])
    groups: tuple[list[int], list[int]] = ([], [])
    load = [0, 0]
    for i in order:
        g = 0 if load[0] <= load[1] else 1
        groups[g].append(i)
        load[g] += sizes[i]
    total = sum(sizes)
    if len(sizes) >= 2 and 4 * max(load) > 3 * total:
        raise InvariantError(f"group of size {max(load)} exceeds 3/4 of {total}")
    return groups


@dataclass(frozen=True)
class DTree:
    """One double tree of a family: two sides sharing a centre."""

    family: "DTreeFamily" = field(repr=False, compare=False)
    left: int
    right: int
    center: int

    @property
    def size(self) -> int:
        """Node count with the shared centre counted once."""
        s = self.family.side_sizes
        return int(s[self.left] + s[self.right] - 1)

    @property
    def n_edges(self) -> int:
        s = self.family.side_sizes
        return int(s[self.left] + s[self.right] - 2)

    @property
    def root_left(self) -> int:
        return int(self.family.side_root[self.left])

    @property
    def root_right(self) -> int:
        return int(self.family.side_root[self.right])

    def left_nodes(self) -> np.ndarray:
        return self.family.side_nodes(self.left)

    def right_nodes(self) -> np.ndarray:
        return self.family.side_nodes(self.right)

    def word_codes(self, x: int, y: int) -> list[int]:
        """Label codes of ``W_l(x) + W_r(y)``."""
        fam = self.family
        return fam.upward_codes(x) + fam.upward_codes(y)[::-1]


@dataclass(eq=False)
class DTreeFamily:
    """All sides of a decomposition, stored as one forest of tries."""

    source: LabeledTree
    parent: np.ndarray
    label: np.ndarray
    depth: np.ndarray
    side: np.ndarray
    origin: np.ndarray
    side_root: np.ndarray
    dtrees: list[DTree]
    levels: int = 0
    level_stats: list[dict] = field(default_factory=list)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_nodes(self) -> int:
        return int(self.parent.size)

    @property
    def n_sides(self) -> int:
        return int(self.side_root.size)

    @property
    def sigma(self) -> int:
        return self.source.sigma

    @property
    def side_sizes(self) -> np.ndarray:
        if "sizes" not in self._cache:
            self._cache["sizes"] = np.bincount(self.side, minlength=self.n_sides)
        return self._cache["sizes"]

    @property
    def side_height(self) -> np.ndarray:
        if "height" not in self._cache:
            h = np.zeros(self.n_sides, dtype=np.int64)
            np.maximum.at(h, self.side, self.depth)
            self._cache["height"] = h
        return self._cache["height"]

    @property
    def total_edges(self) -> int:
        return int(sum(d.n_edges for d in self.dtrees))

    def side_nodes(self, s: int) -> np.ndarray:
        if "by_side" not in self._cache:
            order = np.argsort(self.side, kind="stable")
            bounds = np.searchsorted(self.side[order], np.arange(self.n_sides + 1))
            self._cache["by_side"] = (order, bounds)
        order, bounds = self._cache["by_side"]
        return order[bounds[s]:bounds[s + 1]]

    def _child_table(self):
        if "child" not in self._cache:
            nonroot = np.flatnonzero(self.depth > 0)
            keys = self.parent[nonroot] * self.sigma + self.label[nonroot]
            order = np.argsort(keys)
            self._cache["child"] = (keys[order], nonroot[order])
        return self._cache["child"]

    def child(self, u, c) -> np.ndarray:
        """Child of ``u`` along label code ``c``, or -1."""
        keys, nodes = self._child_table()
        q = np.atleast_1d(np.asarray(u, dtype=np.int64)) * self.sigma \
            + np.atleast_1d(np.asarray(c, dtype=np.int64))
        pos = np.minimum(np.searchsorted(keys, q), max(keys.size - 1, 0))
        if keys.size == 0:
            return np.full(q.size, -1, dtype=np.int64)
        return np.where(keys[pos] == q, nodes[pos], -1)

    def children_lists(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR layout of children: ``kids[start[u]:start[u + 1]]``."""
        if "csr" not in self._cache:
            nonroot = np.flatnonzero(self.depth > 0)
            order = nonroot[np.argsort(self.parent[nonroot], kind="stable")]
            start = np.searchsorted(self.parent[order], np.arange(self.n_nodes + 1))
            self._cache["csr"] = (order, start)
        return self._cache["csr"]

    def subtree(self, u: int) -> list[int]:
        """Nodes of the subtree below ``u`` in breadth-first order."""
        kids, start = self.children_lists()
        out = [u]
        i = 0
        while i < len(out):
            x = out[i]
            out.extend(kids[start[x]:start[x + 1]].tolist())
            i += 1
        return out

    def upward_codes(self, x: int) -> list[int]:
        out = []
        while self.depth[x] > 0:
            out.append(int(self.label[x]))
            x = int(self.parent[x])
        return out

    def upward_word(self, x: int) -> str:
        return self.source.decode(self.upward_codes(x))

    def partner(self) -> np.ndarray:
        """Right side paired with each left side."""
        if "partner" not in self._cache:
            p = np.full(self.n_sides, -1, dtype=np.int64)
            for d in self.dtrees:
                p[d.left] = d.right
            self._cache["partner"] = p
        return self._cache["partner"]


class _Builder:
    """Accumulates trie nodes of many sides in creation order."""

    def __init__(self):
        self.chunks: list[tuple[np.ndarray, ...]] = []
        self.next_id = 0
        self.side_roots: list[np.ndarray] = []
        self.next_side = 0

    def add(self, parent, label, depth, side, origin) -> np.ndarray:
        m = len(parent)
        ids = np.arange(self.next_id, self.next_id + m, dtype=np.int64)
        self.next_id += m
        self.chunks.append((np.asarray(parent, np.int64), np.asarray(label, np.int64),
                            np.broadcast_to(np.asarray(depth, np.int64), (m,)).copy(),
                            np.asarray(side, np.int64), np.asarray(origin, np.int64)))
        return ids

    def new_sides(self, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        k = centers.size
        sides = np.arange(self.next_side, self.next_side + k, dtype=np.int64)
        self.next_side += k
        roots = self.add(np.zeros(k), np.full(k, -1), 0, sides, centers)
        roots_parent = self.chunks[-1][0]
        roots_parent[:] = roots
        self.side_roots.append(roots)
        return sides, roots

    def finish(self, source, dtrees_raw, levels, stats) -> DTreeFamily:
        if self.chunks:
            cols = [np.concatenate([c[i] for c in self.chunks]) for i in range(5)]
        else:
            cols = [np.zeros(0, dtype=np.int64) for _ in range(5)]
        roots = np.concatenate(self.side_roots) if self.side_roots else np.zeros(0, np.int64)
        side_root = np.empty(self.next_side, dtype=np.int64)
        side_root[cols[3][roots]] = roots
        fam = DTreeFamily(source, *cols, side_root=side_root, dtrees=[],
                          levels=levels, level_stats=stats)
        fam.dtrees = [DTree(fam, int(a), int(b), int(c)) for a, b, c in dtrees_raw]
        return fam


def _edge_labels(tree: LabeledTree, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    par, lab = tree.parent, tree.parent_label
    return np.where(par[a] == b, lab[a], lab[b])


def _edge_ids(tree: LabeledTree, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(tree.parent[a] == b, a, b)


def _determinize(builder: _Builder, tree: LabeledTree, vnode: np.ndarray,
                 parent: np.ndarray, depth: np.ndarray, vside: np.ndarray,
                 side_root_of: np.ndarray) -> None:
    """Merge every rooted vertex forest into tries, one side per vertex group.

    ``vside[v]`` is the side of non-root vertex ``v``; ``side_root_of`` maps
    a side to its (already created) trie root.
    """
    sigma = tree.sigma
    order, bounds = depth_buckets(depth)
    cls = np.full(vnode.size, -1, dtype=np.int64)
    for d in range(1, bounds.size - 1):
        vs = order[bounds[d]:bounds[d + 1]]
        pv = parent[vs]
        pc = side_root_of[vside[vs]] if d == 1 else cls[pv]
        lab = _edge_labels(tree, vnode[vs], vnode[pv])
        uk, first, inv = np.unique(pc * sigma + lab, return_index=True, return_inverse=True)
        origin = np.full(uk.size, np.iinfo(np.int64).max, dtype=np.int64)
        np.minimum.at(origin, inv, vnode[vs])
        ids = builder.add(uk // sigma, uk % sigma, d, vside[vs][first], origin)
        cls[vs] = ids[inv]


def _centroids(vnode, vpiece, m_of_piece, parent, depth, n_pieces):
    size = subtree_sizes(parent, depth)
    nonroot = np.flatnonzero(depth > 0)
    down = np.zeros(vnode.size, dtype=np.int64)
    np.maximum.at(down, parent[nonroot], size[nonroot])
    worst = np.maximum(down, m_of_piece[vpiece] - size)
    pick = np.lexsort((vnode, worst, vpiece))
    first = np.searchsorted(vpiece[pick], np.arange(n_pieces))
    cent = pick[first]
    if np.any(2 * worst[cent] > m_of_piece):
        raise InvariantError("centroid leaves a component larger than half the piece")
    return cent, worst[cent]


def centroid(tree: LabeledTree, within=None) -> int:
    """Centroid of the subtree induced by ``within`` (default: all nodes).

    Ties go to the smallest node id.
    """
    if within is None:
        nodes = np.arange(tree.n)
    else:
        nodes = np.unique(np.asarray(list(within), dtype=np.int64))
    if nodes.size == 0:
        raise ValueError("centroid of an empty node set")
    local = np.full(tree.n, -1, dtype=np.int64)
    local[nodes] = np.arange(nodes.size)
    a = np.arange(1, tree.n)
    b = tree.parent[a]
    keep = (local[a] >= 0) & (local[b] >= 0)
    if keep.sum() != nodes.size - 1:
        raise ValueError("node set does not induce a connected subtree")
    parent, depth = orient_forest(nodes.size, local[a[keep]], local[b[keep]], np.array([0]))
    cent, _ = _centroids(nodes, np.zeros(nodes.size, np.int64),
                         np.array([nodes.size]), parent, depth, 1)
    return int(nodes[cent[0]])


def _split_all(cpiece: np.ndarray, csize: np.ndarray) -> np.ndarray:
    """Greedy split of the components of every piece (input sorted by piece)."""
    group = np.zeros(cpiece.size, dtype=np.int64)
    bounds = np.flatnonzero(np.diff(cpiece)) + 1
    starts = np.concatenate([[0], bounds])
    ends = np.concatenate([bounds, [cpiece.size]])
    counts = ends - starts
    two = starts[counts == 2]
    if two.size:
        # two components: the larger (first on ties) goes to group 0
        swap = csize[two + 1] > csize[two]
        group[two] = swap.astype(np.int64)
        group[two + 1] = (~swap).astype(np.int64)
    if np.any(counts == 1):
        raise InvariantError("centroid of a piece with two or more edges has one component")
    sizes_list = csize.tolist()
    for s, e in zip(starts[counts > 2].tolist(), ends[counts > 2].tolist()):
        g0, g1 = split_components(sizes_list[s:e])
        for i in g1:
            group[s + i] = 1
    return group


def decompose_family(tree: LabeledTree) -> DTreeFamily:
    """Recursive centroid decomposition into D-trees.

    Every round processes all pieces at once.  Pieces are sets of tree
    edges (an edge is named by its child endpoint when the tree is rooted
    at node 0); pieces with fewer than two edges are dropped.
    """
    n = tree.n
    builder = _Builder()
    dtrees_raw: list[tuple[int, int, int]] = []
    stats: list[dict] = []
    edges = np.arange(1, n, dtype=np.int64)
    piece = np.zeros(edges.size, dtype=np.int64)
    if edges.size < 2:
        edges = edges[:0]
    levels = 0
    while edges.size:
        levels += 1
        e_cnt = edges.size
        ends = np.concatenate([piece * n + edges, piece * n + tree.parent[edges]])
        vkey, inv = np.unique(ends, return_inverse=True)
        vnode, vpiece = vkey % n, vkey // n
        ea, eb = inv[:e_cnt], inv[e_cnt:]
        n_pieces = int(vpiece[-1]) + 1
        m = np.bincount(vpiece, minlength=n_pieces)
        first = np.searchsorted(vpiece, np.arange(n_pieces))
        parent, depth = orient_forest(vnode.size, ea, eb, first)
        cent, worst = _centroids(vnode, vpiece, m, parent, depth, n_pieces)

        parent, depth = orient_forest(vnode.size, ea, eb, cent)
        nxt = np.where(depth <= 1, np.arange(vnode.size), parent)
        comp = fixed_point(nxt)
        nonroot = depth > 0
        csize = np.bincount(comp[nonroot], minlength=vnode.size)
        comps = np.flatnonzero(depth == 1)
        comps = comps[np.lexsort((comps, vpiece[comps]))]
        cgroup = _split_all(vpiece[comps], csize[comps])
        group = np.full(vnode.size, -1, dtype=np.int64)
        group[comps] = cgroup
        vgroup = group[comp]

        centers = vnode[cent]
        sides, _ = builder.new_sides(np.repeat(centers, 2))
        base = int(sides[0])
        vside = base + 2 * vpiece + np.maximum(vgroup, 0)
        side_root_of = np.zeros(builder.next_side, dtype=np.int64)
        side_root_of[sides] = builder.side_roots[-1]
        _determinize(builder, tree, vnode, parent, depth, vside, side_root_of)
        for p in range(n_pieces):
            s0, s1 = base + 2 * p, base + 2 * p + 1
            c = int(centers[p])
            dtrees_raw.append((s0, s1, c))
            dtrees_raw.append((s1, s0, c))

        gsize = np.bincount(2 * vpiece[nonroot] + vgroup[nonroot], minlength=2 * n_pieces)
        stats.append({
            "pieces": n_pieces,
            "edges": int(e_cnt),
            "max_component_ratio": float(np.max(worst / m)),
            "max_group_ratio": float(np.max(
                np.maximum(gsize[0::2], gsize[1::2]) / (m - 1))),
        })

        vs = np.flatnonzero(nonroot)
        new_edges = _edge_ids(tree, vnode[vs], vnode[parent[vs]])
        new_piece = 2 * vpiece[vs] + vgroup[vs]
        counts = np.bincount(new_piece, minlength=2 * n_pieces)
        keep = counts[new_piece] >= 2
        edges = new_edges[keep]
        _, piece = np.unique(new_piece[keep], return_inverse=True)
        piece = piece.astype(np.int64)
    fam = builder.finish(tree, dtrees_raw, levels, stats)
    limit = FAMILY_EDGE_FACTOR * max(n - 1, 1) * (math.ceil(math.log2(max(n - 1, 1))) + 1)
    if fam.total_edges > limit:
        raise InvariantError(f"family has {fam.total_edges} edges, above {limit}")
    return fam


def build_psi(tree: LabeledTree, r: int) -> DTreeFamily:
    """The naive double tree: all paths from ``r`` merged into one trie,
    used as both the left and the right side."""
    builder = _Builder()
    a = np.arange(1, tree.n, dtype=np.int64)
    b = tree.parent[a]
    parent, depth = orient_forest(tree.n, a, b, np.array([r]))
    sides, roots = builder.new_sides(np.array([r]))
    vside = np.zeros(tree.n, dtype=np.int64)
    _determinize(builder, tree, np.arange(tree.n), parent, depth, vside, roots)
    return builder.finish(tree, [(0, 0, r)], 1, [])


@dataclass
class SoundnessReport:
    passed: bool
    checked: int
    counterexample: tuple[int, int, int] | None = None   # (dtree index, x, y)

    def __bool__(self) -> bool:
        return self.passed


def sample_soundness(family: DTreeFamily, samples: int = 10_000, seed: int = 0) -> SoundnessReport:
    """Check random D-tree paths against real source paths.

    For a random D-tree and random nodes ``x`` (left) and ``y`` (right),
    the source path between their origins must spell ``W_l(x) + W_r(y)``.
    Stops at the first mismatch.
    """
    if not family.dtrees:
        return SoundnessReport(True, 0)
    rng = np.random.default_rng(seed)
    src = family.source
    picks = rng.integers(len(family.dtrees), size=samples)
    fx, fy = rng.random(samples), rng.random(samples)
    for i in range(samples):
        k = int(picks[i])
        d = family.dtrees[k]
        left, right = d.left_nodes(), d.right_nodes()
        x = int(left[int(fx[i] * left.size)])
        y = int(right[int(fy[i] * right.size)])
        want = d.word_codes(x, y)
        got = src.path_codes(int(family.origin[x]), int(family.origin[y]))
        if want != got:
            return SoundnessReport(False, i + 1, (k, x, y))
    return SoundnessReport(True, samples)
