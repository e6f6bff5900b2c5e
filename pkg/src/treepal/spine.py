"""Spine trees: the periodic part of a D-tree where palindromes pile up.

A long palindrome whose centre part is periodic is not found by the
window scan of the pipeline.  Each such palindrome runs along a *spine*:
the maximal path through the centre that keeps the short period ``p`` of
the upward word of some left node ``s`` at depth ``alpha``.  The subtrees
hanging below ``s`` on the left and below the matching node ``t`` on the
right are grouped by a label that fixes everything except the distance
travelled along the spine; all admissible distances of a group then come
out of one set difference.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .convolution import IntSet, set_difference
from .dtree import DTree, InvariantError
from .toolbox import CodeIndex, LinearIndex


def spine_parameters(n: int) -> tuple[int, int]:
    """``(alpha, max_period)`` for a D-tree with ``n`` nodes.

    ``alpha`` is ``ceil(2 * sqrt(n))`` and periods up to ``sqrt(n) / 2`` count
    as short.
    """
    alpha = math.isqrt(4 * n - 1) + 1 if n > 0 else 0
    return alpha, math.isqrt(n) // 2


@dataclass
class SpineTree:
    dtree: DTree
    anchor: int                 # left spine node at depth alpha
    anchor_right: int           # right spine node at depth alpha
    spine_left: list[int]       # anchor down to the deepest left spine node
    spine_right: list[int]      # anchor_right down to the deepest right spine node
    period: int
    word: list[int]             # label codes along the whole spine, left to right
    alpha: int
    left_members: np.ndarray
    left_spine: np.ndarray      # nearest spine node of each left member
    right_members: np.ndarray
    right_spine: np.ndarray

    @property
    def left_length(self) -> int:
        """Depth of the deepest left spine node."""
        return self.alpha + len(self.spine_left) - 1

    @property
    def size(self) -> int:
        return int(self.left_members.size + self.right_members.size) + 2 * self.alpha - 1


def _hanging(family, top: int, spine: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """Subtree of ``top`` with the nearest spine node of every member."""
    on_spine = set(spine)
    kids, start = family.children_lists()
    members = [top]
    anchor = {top: top}
    i = 0
    while i < len(members):
        x = members[i]
        for y in kids[start[x]:start[x + 1]].tolist():
            anchor[y] = y if y in on_spine else anchor[x]
            members.append(y)
        i += 1
    return (np.array(members, dtype=np.int64),
            np.array([anchor[x] for x in members], dtype=np.int64))


def spine_decomposition(dtree: DTree, linear: LinearIndex) -> list[SpineTree]:
    fam = dtree.family
    n = dtree.size
    alpha, pmax = spine_parameters(n)
    if pmax < 1 or fam.side_height[dtree.left] < alpha or fam.side_height[dtree.right] < alpha:
        return []
    left = dtree.left_nodes()
    cand = left[fam.depth[left] == alpha]
    if cand.size == 0:
        return []
    per = linear.per_len(cand)
    out = []
    root_right = dtree.root_right
    for s, p in zip(cand[per <= pmax].tolist(), per[per <= pmax].tolist()):
        base = fam.upward_codes(s)               # word from s up to the centre
        pre: list[int] = []                      # prepended letters, in reverse
        spine_left = [s]
        x = s
        while True:
            i = p - 1                            # letter p-1 of the current word
            need = pre[len(pre) - 1 - i] if i < len(pre) else base[i - len(pre)]
            y = int(fam.child(x, need)[0])
            if y < 0:
                break
            pre.append(need)
            spine_left.append(y)
            x = y
        word = pre[::-1] + base
        left_len = len(word)
        y = root_right
        spine_right_all = [y]
        while True:
            need = word[len(word) - p]
            z = int(fam.child(y, need)[0])
            if z < 0:
                break
            word.append(need)
            spine_right_all.append(z)
            y = z
        if len(spine_right_all) - 1 < alpha:
            continue
        spine_right = spine_right_all[alpha:]
        t = spine_right[0]
        lm, ls = _hanging(fam, s, spine_left)
        rm, rs = _hanging(fam, t, spine_right)
        if left_len != alpha + len(spine_left) - 1:
            raise InvariantError("left spine length mismatch")
        out.append(SpineTree(dtree, s, t, spine_left, spine_right, p, word, alpha,
                             lm, ls, rm, rs))
    total = sum(sp.size for sp in out)
    if total > 2 * n:
        raise InvariantError(f"spine trees hold {total} nodes, above twice {n}")
    return out


def induced_palindromes(spine: SpineTree, codes: CodeIndex) -> list[tuple[int, int]]:
    """Even palindromes of the spine tree with their middle on the left.

    Returns ``(x, h)`` pairs: the palindrome is ``H + reverse(H)`` where
    ``H`` is the upward word of length ``h`` from left node ``x``.
    """
    fam = spine.dtree.family
    dep = fam.depth
    p, word = spine.period, spine.word
    left_len = spine.left_length
    n_s = spine.size

    lm, rm = spine.left_members, spine.right_members
    ld = dep[lm] - dep[spine.left_spine]
    rd = dep[rm] - dep[spine.right_spine]
    lpos = left_len - dep[spine.left_spine]
    rpos = left_len + dep[spine.right_spine]

    windows = {tuple(word[i:i + p]): i for i in range(p)}
    right_phase = [-1] * p
    for j in range(p, 2 * p):
        right_phase[j % p] = windows.get(tuple(word[j - p:j][::-1]), -1)
    lphase = lpos % p
    rphase = np.array(right_phase, dtype=np.int64)[rpos % p]

    lkey = codes.segment(lm, ld)
    rkey = codes.segment(rm, rd)
    groups: dict[tuple, tuple[list[int], list[int]]] = defaultdict(lambda: ([], []))
    for i, key in enumerate(zip(ld.tolist(), lkey[1].tolist(), lkey[2].tolist(),
                                lphase.tolist())):
        groups[key][0].append(i)
    for j, key in enumerate(zip(rd.tolist(), rkey[1].tolist(), rkey[2].tolist(),
                                rphase.tolist())):
        if key[3] >= 0 and key in groups:
            groups[key][1].append(j)

    out: list[tuple[int, int]] = []
    small = math.isqrt(n_s)
    for (d, _, _, _), (li, ri) in groups.items():
        if not li or not ri:
            continue
        if len(li) + len(ri) <= small:
            xs = np.repeat(lm[li], len(ri))
            ys = np.tile(rm[ri], len(li))
            a, b = dep[xs], dep[ys]
            ok = ((a + b) % 2 == 0) & (b <= a)
            xs, ys = xs[ok], ys[ok]
            if xs.size:
                hit = codes.is_palindrome_cross(spine.dtree, xs, ys)
                out += zip(xs[hit].tolist(), ((dep[xs[hit]] + dep[ys[hit]]) // 2).tolist())
            continue
        xpos, ypos = lpos[li], rpos[ri]
        universe = len(word)
        diffs = set_difference(IntSet.of(set(ypos.tolist()), universe),
                               IntSet.of(set(xpos.tolist()), universe)).members()
        diffs = diffs[(diffs >= p) & (diffs % 2 == 0)]
        if diffs.size == 0:
            continue
        # one concrete pair settles whether the spine part is palindromic
        delta = int(diffs[0])
        by_pos = {int(q): int(rm[r]) for q, r in zip(ypos.tolist(), ri)}
        for q, i in zip(xpos.tolist(), li):
            if q + delta in by_pos:
                x_rep, y_rep = int(lm[i]), by_pos[q + delta]
                break
        if not codes.is_palindrome_cross(spine.dtree, x_rep, y_rep)[0]:
            continue
        best = min(zip(xpos.tolist(), lm[li].tolist()))
        reach = left_len - best[0]
        for delta in diffs[diffs // 2 <= reach].tolist():
            out.append((best[1], d + delta // 2))
    return out
