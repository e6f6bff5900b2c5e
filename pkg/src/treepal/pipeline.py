"""Reporting, testing and maximising palindromes of a labelled tree.

Odd palindromes are turned into even ones by the ``$ c c $`` expansion, so
only even palindromes of the expanded tree are searched.  Each is found in
the D-tree whose centre lies on its path, from the endpoint on the side
that contains its midpoint, and is described by a pair ``(x, h)``: the
palindrome is ``H + reverse(H)`` for the upward word ``H`` of length ``h``
from the left node ``x``.

For a left node ``u`` at depth ``a``, every palindrome starting at ``u`` with
its midpoint on the left corresponds to a palindromic root word of an
ancestor ``u'`` at depth ``c``.  The first ``a - c`` letters above ``u`` must
reappear reversed as a root word of the partner side.  Only the deepest
``2 alpha`` and shallowest ``alpha`` such ancestors are scanned; the
palindromes in between have a long periodic centre and come out of the
spine trees instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .arrays import fixed_point, forest_depths, first_of_unique_rows
from .dtree import DTree, DTreeFamily, InvariantError, decompose_family
from .spine import induced_palindromes, spine_decomposition, spine_parameters
from .toolbox import CodeIndex, LinearIndex
from .tree import (ExpandedTree, LabeledTree, PalTriple, contract_many,
                   expand_even, palindrome_of)


@dataclass
class ReportSet:
    """Distinct palindromes as ``(length, u, v)`` half-path witnesses."""

    tree: LabeledTree
    length: np.ndarray
    u: np.ndarray
    v: np.ndarray
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.length.size)

    def __iter__(self) -> Iterator[PalTriple]:
        for ell, u, v in zip(self.length.tolist(), self.u.tolist(), self.v.tolist()):
            yield PalTriple(ell, u, v)

    def words(self) -> list[str]:
        return [palindrome_of(self.tree, t) for t in self]

    def pairs(self) -> set[tuple[int, str]]:
        return {(len(w), w) for w in self.words()}


PAIR_BUDGET = 1 << 22


def _min_start_rows(rows: np.ndarray) -> np.ndarray:
    """Keep, per distinct ``(c1, c2, h)``, the distinct rows with minimal ``u``."""
    if rows.shape[1] == 0:
        return rows
    c1, c2, h, u, x = rows
    order = np.lexsort((x, u, h, c2, c1))
    rows = rows[:, order]
    c1, c2, h, u, x = rows
    new_key = np.ones(c1.size, dtype=bool)
    new_key[1:] = (c1[1:] != c1[:-1]) | (c2[1:] != c2[:-1]) | (h[1:] != h[:-1])
    group = np.cumsum(new_key) - 1
    min_u = u[new_key][group]
    fresh = np.ones(c1.size, dtype=bool)
    fresh[1:] = new_key[1:] | (u[1:] != u[:-1]) | (x[1:] != x[:-1])
    return rows[:, (u == min_u) & fresh]


class _Chains:
    """Palindromic ancestors of every node, split by depth residue.

    ``marked`` nodes have palindromic root words and depth in a fixed
    residue class; each node points to its nearest marked ancestor-or-self
    and marked nodes are linked to the next marked ancestor.
    """

    def __init__(self, family: DTreeFamily, pal: np.ndarray, modulus: int,
                 alpha_of_node: np.ndarray):
        n = family.n_nodes
        idx = np.arange(n, dtype=np.int64)
        depth, parent = family.depth, family.parent
        is_root = depth == 0
        self.start = {}
        self.xpar = np.full(n, -1, dtype=np.int64)
        self.count = np.zeros(n, dtype=np.int64)
        self.top = idx.copy()
        for residue in range(0, modulus, 2):
            marked = pal & (depth % modulus == residue)
            fp = fixed_point(np.where(marked | is_root, idx, parent))
            nearest = np.where(marked[fp], fp, -1)
            self.start[residue] = nearest
            m = np.flatnonzero(marked & ~is_root)
            self.xpar[m] = nearest[parent[m]]
        marked_any = np.zeros(n, dtype=bool)
        for nearest in self.start.values():
            marked_any[nearest[nearest >= 0]] = True
        par = np.where(self.xpar >= 0, self.xpar, idx)
        self.count = np.where(marked_any, forest_depths(par) + 1, 0)
        nxt = np.where(marked_any & (self.count > alpha_of_node), par, idx)
        self.top = fixed_point(nxt)


class PalindromeIndex:
    """Everything needed to report or test palindromes of one tree."""

    def __init__(self, tree: LabeledTree):
        self.tree = tree
        self.expanded: ExpandedTree = expand_even(tree)
        self.family: DTreeFamily = decompose_family(self.expanded.tree)
        self.linear = LinearIndex(self.family)
        self.codes = CodeIndex(self.family, self.linear)
        fam = self.family
        sizes = fam.side_sizes
        self.partner = fam.partner()
        dsize = np.zeros(fam.n_sides, dtype=np.int64)
        has = self.partner >= 0
        dsize[has] = sizes[has] + sizes[self.partner[has]] - 1
        self.dtree_size = dsize
        self.alpha_side = np.array([spine_parameters(int(s))[0] for s in dsize], dtype=np.int64)
        self.center_of_side = fam.origin[fam.side_root]
        self._chains = None
        self.spine_stats: dict = {}

    # -- helpers ------------------------------------------------------------
    @property
    def separator(self) -> int:
        return self.expanded.separator

    def _witnesses(self, x: np.ndarray, h: np.ndarray):
        """Source-tree half paths for family pairs ``(x, h)``."""
        fam = self.family
        u = fam.origin[x]
        centre = self.center_of_side[fam.side[x]]
        v = self.expanded.tree.walk(u, centre, h) if x.size else u
        return contract_many(self.expanded, 2 * h, u, v)

    def chains(self) -> _Chains:
        if self._chains is None:
            alpha = self.alpha_side[self.family.side]
            self._chains = _Chains(self.family, self.codes.pal, 4, alpha)
        return self._chains

    # -- window scan ----------------------------------------------------------
    def scan_chunks(self, nodes: np.ndarray, modulus: int = 4,
                    chains: _Chains | None = None,
                    budget: int = PAIR_BUDGET) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Window scan from the given left nodes, yielding pairs ``(x, h)``.

        Nodes are processed in chunks holding at most ``budget`` candidate
        ancestors, which bounds memory on highly periodic inputs.
        """
        fam = self.family
        ch = chains if chains is not None else self.chains()
        depth = fam.depth
        a = depth[nodes]
        st = np.full(nodes.size, -1, dtype=np.int64)
        for residue, nearest in ch.start.items():
            sel = (2 * a) % modulus == residue
            st[sel] = nearest[nodes[sel]]
        keep = st >= 0
        nodes, st = nodes[keep], st[keep]
        al = self.alpha_side[fam.side[nodes]]
        total = ch.count[st]
        work = np.cumsum(np.minimum(total, 3 * al))
        cuts = np.searchsorted(work, np.arange(budget, int(work[-1]) if work.size else 0,
                                               budget))
        bounds = np.unique(np.concatenate([[0], cuts, [nodes.size]]))
        for lo, hi in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
            yield self._scan_slice(nodes[lo:hi], st[lo:hi], al[lo:hi], total[lo:hi], ch)

    def _scan_slice(self, nodes, st, al, total, ch):
        got_i, got_c = [], []

        def walk(idx, cur, steps, record_end=None):
            while idx.size:
                got_i.append(idx)
                got_c.append(cur)
                steps = steps - 1
                cur = ch.xpar[cur]
                done = steps <= 0
                if record_end is not None:
                    record_end[idx[done]] = cur[done]
                keep = ~done
                idx, cur, steps = idx[keep], cur[keep], steps[keep]

        everyone = np.arange(nodes.size)
        after = np.full(nodes.size, -1, dtype=np.int64)
        walk(everyone, st, np.minimum(2 * al, total), after)
        rest = np.flatnonzero(total > 2 * al)
        if rest.size:
            k = total[rest] - 2 * al[rest]
            begin = np.where(k > al[rest], ch.top[st[rest]], after[rest])
            walk(rest, begin, np.minimum(al[rest], k))
        if not got_i:
            return np.zeros(0, np.int64), np.zeros(0, np.int64)
        depth = self.family.depth
        u = nodes[np.concatenate(got_i)]
        anc = np.concatenate(got_c)
        b = depth[u] - depth[anc]
        ok = b == 0
        q = ~ok
        if q.any():
            side = self.family.side[u[q]]
            ok[q] = self.codes.exists(self.partner[side], u[q], b[q]) >= 0
        return u[ok], depth[u[ok]] - depth[anc[ok]] // 2

    def scan(self, nodes: np.ndarray, modulus: int = 4,
             chains: _Chains | None = None) -> tuple[np.ndarray, np.ndarray]:
        parts = list(self.scan_chunks(nodes, modulus, chains))
        if not parts:
            return np.zeros(0, np.int64), np.zeros(0, np.int64)
        return (np.concatenate([p[0] for p in parts]),
                np.concatenate([p[1] for p in parts]))

    # -- spines ----------------------------------------------------------------
    def spine_pairs(self, dtrees: list[DTree] | None = None) -> tuple[np.ndarray, np.ndarray]:
        fam = self.family
        if dtrees is None:
            height = fam.side_height
            deep = [d for d in fam.dtrees
                    if height[d.left] >= self.alpha_side[d.left]
                    and height[d.right] >= self.alpha_side[d.left]]
        else:
            deep = dtrees
        xs, hs = [], []
        n_spines = 0
        spine_nodes = 0
        for d in deep:
            spines = spine_decomposition(d, self.linear)
            n_spines += len(spines)
            spine_nodes += sum(s.size for s in spines)
            for s in spines:
                for x, h in induced_palindromes(s, self.codes):
                    xs.append(x)
                    hs.append(h)
        self.spine_stats = {"spine_trees": n_spines, "spine_nodes": spine_nodes}
        return np.array(xs, dtype=np.int64), np.array(hs, dtype=np.int64)

    # -- public operations --------------------------------------------------
    def _candidates(self, x: np.ndarray, h: np.ndarray) -> np.ndarray:
        """Rows ``[c1, c2, h, u, x]`` of expanded-image palindromes, keeping per
        distinct word only the rows whose start node ``u`` is smallest."""
        fam = self.family
        keep = (fam.label[x] == self.separator) & (h % 2 == 0) & (h > 0)
        x, h = x[keep], h[keep]
        seg = self.codes.segment(x, h)
        rows = np.stack([seg[1], seg[2], h, fam.origin[x], x])
        return _min_start_rows(rows)

    def report_all(self) -> ReportSet:
        fam = self.family
        nodes = np.flatnonzero((fam.label == self.separator) & (fam.depth > 0))
        kept = []
        scanned = 0
        for x, h in self.scan_chunks(nodes):
            scanned += x.size
            kept.append(self._candidates(x, h))
        x2, h2 = self.spine_pairs()
        kept.append(self._candidates(x2, h2))
        rows = _min_start_rows(np.concatenate(kept, axis=1))
        c1, c2, h, _, x = rows
        ell, u, v = self._witnesses(x, h)
        # for each distinct word keep the smallest (u, v) witness
        order = np.lexsort((v, u, c2, c1, h))
        c1, c2, ell, u, v = c1[order], c2[order], ell[order], u[order], v[order]
        first = first_of_unique_rows([ell, c1, c2])
        sel = first[np.lexsort((c2[first], c1[first], ell[first]))]
        stats = {
            "expanded_nodes": self.expanded.tree.n,
            "family_nodes": fam.n_nodes,
            "family_edges": fam.total_edges,
            "recursion_depth": fam.levels,
            "scan_pairs": int(scanned),
            "spine_pairs": int(x2.size),
            **self.spine_stats,
        }
        return ReportSet(self.tree, ell[sel], u[sel], v[sel], stats)

    def test(self, k: int) -> PalTriple | None:
        """A witness palindrome of length ``k``, or None."""
        if k < 1:
            raise ValueError("palindrome length must be at least 1")
        if k > self.tree.n_edges:
            return None
        fam = self.family
        big = 4 * k
        nodes = np.flatnonzero((fam.label == self.separator) & (fam.depth >= 2 * k))
        if nodes.size == 0:
            return None
        a = fam.depth[nodes]
        ok = np.zeros(nodes.size, dtype=bool)
        inside = a >= big
        if inside.any():
            ok[inside] = self.codes.is_palindrome_up(nodes[inside], big)
        cross = ~inside
        if cross.any():
            u = nodes[cross]
            b = big - a[cross]
            good = self.codes.pal[self.linear.up(u, b)]
            hit = np.zeros(u.size, dtype=bool)
            if good.any():
                hit[good] = self.codes.exists(self.partner[fam.side[u[good]]],
                                              u[good], b[good]) >= 0
            ok[cross] = hit
        found = np.flatnonzero(ok)
        if found.size == 0:
            return None
        x = nodes[found]
        ell, u, v = self._witnesses(x, np.full(x.size, 2 * k, dtype=np.int64))
        best = np.lexsort((v, u))[0]
        return PalTriple(int(ell[best]), int(u[best]), int(v[best]))

    def longest(self) -> tuple[int, PalTriple | None]:
        if self.tree.n_edges == 0:
            return 0, None
        best: tuple[int, PalTriple | None] = (0, None)
        for parity in (1, 2):
            # lengths parity, parity + 2, ... ; presence is monotone downwards
            hi = (self.tree.n_edges - parity) // 2  # largest index to try
            lo, found = 0, None
            w = self.test(parity)
            if w is None:
                continue
            found = (parity, w)
            lo += 1
            while lo <= hi:
                mid = (lo + hi) // 2
                w = self.test(parity + 2 * mid)
                if w is None:
                    hi = mid - 1
                else:
                    found = (parity + 2 * mid, w)
                    lo = mid + 1
            if found[0] > best[0]:
                best = found
        return best

    def check_invariants(self) -> dict:
        """Structural checks; raises InvariantError on violation."""
        fam = self.family
        worst_c = max((s["max_component_ratio"] for s in fam.level_stats), default=0.0)
        worst_g = max((s["max_group_ratio"] for s in fam.level_stats), default=0.0)
        if worst_c > 0.5:
            raise InvariantError("centroid component above half")
        if worst_g > 0.75:
            raise InvariantError("split group above three quarters")
        return {"max_component_ratio": worst_c, "max_group_ratio": worst_g,
                "family_edges": fam.total_edges}


def find_palindromes_in_dtree(index: PalindromeIndex, dtree: DTree) -> set[PalTriple]:
    """Even palindromes of one D-tree with their middle on the left side.

    Triples are in family coordinates: ``(length, x, middle node)``.
    """
    fam = index.family
    nodes = dtree.left_nodes()
    nodes = nodes[fam.depth[nodes] > 0]
    alpha = index.alpha_side[fam.side]
    chains = _Chains(fam, index.codes.pal, 2, alpha)
    x1, h1 = index.scan(nodes, modulus=2, chains=chains)
    x2, h2 = index.spine_pairs([dtree])
    x = np.concatenate([x1, x2])
    h = np.concatenate([h1, h2])
    mids = index.linear.up(x, h) if x.size else x
    return {PalTriple(2 * int(a), int(b), int(c)) for a, b, c in zip(h, x, mids) if a > 0}


def report_all(tree: LabeledTree) -> ReportSet:
    return PalindromeIndex(tree).report_all()


def palindrome_test(tree: LabeledTree, k: int) -> PalTriple | None:
    return PalindromeIndex(tree).test(k)


def find_longest(tree: LabeledTree) -> tuple[int, PalTriple | None]:
    return PalindromeIndex(tree).longest()
