from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SAMPLE_CENTER
from treepal.dtree import build_psi, decompose_family
from treepal.generators import gen_random
from treepal.oracle import oracle_all
from treepal.toolbox import CodeIndex, LinearIndex, shortest_period
from treepal.tree import tree_from_path_word


def naive_period(w) -> int:
    n = len(w)
    return next((p for p in range(1, n + 1)
                 if all(w[i] == w[i + p] for i in range(n - p))), 0)


def has_period(w, p: int) -> bool:
    return all(w[i] == w[i + p] for i in range(len(w) - p))


def indices(family):
    linear = LinearIndex(family)
    return linear, CodeIndex(family, linear)


def upward(family, u: int, h: int) -> tuple[int, ...]:
    return tuple(family.upward_codes(u)[:h])


def node_with_word(family, side: int, word: str) -> int:
    codes = [family.source.code(c) for c in word]
    for x in family.side_nodes(side).tolist():
        if family.upward_codes(x) == codes:
            return x
    raise LookupError(word)


# periods --------------------------------------------------------------------

def test_per_len_example():
    fam = build_psi(tree_from_path_word("aabaa"), 0)
    linear, _ = indices(fam)
    deepest = int(np.flatnonzero(fam.depth == 5)[0])
    assert fam.upward_word(deepest) == "aabaa"
    assert int(linear.per_len(deepest)[0]) == 3
    assert int(linear.per_len(int(fam.side_root[0]))[0]) == 0


@pytest.mark.parametrize("seed", range(6))
def test_per_len_matches_naive(seed):
    fam = decompose_family(gen_random(40 + 30 * seed, 1 + seed % 3, seed))
    linear, _ = indices(fam)
    got = linear.per_len(np.arange(fam.n_nodes))
    for u in range(fam.n_nodes):
        assert got[u] == naive_period(fam.upward_codes(u))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=40))
def test_shortest_period_matches_naive(w):
    assert shortest_period(w) == naive_period(w)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=30), st.integers(1, 8), st.integers(1, 8))
def test_gcd_of_two_periods_is_a_period(seed_word, p, q):
    # a word of length p + q - gcd(p, q) forced to have periods p and q
    n = p + q - math.gcd(p, q)
    w = [seed_word[i % len(seed_word)] for i in range(n)]
    for _ in range(3 * n):
        for i in range(n):
            for j in (i + p, i + q):
                if j < n:
                    w[j] = w[i]
    if has_period(w, p) and has_period(w, q):
        assert has_period(w, math.gcd(p, q))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=6), st.integers(2, 10),
       st.integers(0, 30), st.integers(0, 30))
def test_substrings_keep_the_shortest_period(base, reps, a, b):
    u = base * reps
    p = naive_period(u)
    i, j = sorted((a % len(u), b % (len(u) + 1)))
    v = u[i:j]
    if 2 * p <= len(v):
        assert naive_period(v) == p


def test_nested_palindromic_suffixes_give_periods():
    pals = oracle_all(gen_random(60, 2, 4)).words
    for u in pals:
        for v in pals:
            if len(v) < len(u) and u.endswith(v):
                d = len(u) - len(v)
                assert has_period(u, d) and has_period(v, d)


# level ancestors and friends ----------------------------------------------------

def test_up_reaches_root_and_matches_naive():
    fam = decompose_family(gen_random(500, 2, 3))
    linear, _ = indices(fam)
    rng = np.random.default_rng(0)
    u = rng.integers(fam.n_nodes, size=1000)
    roots = fam.side_root[fam.side[u]]
    assert np.array_equal(linear.up(u, fam.depth[u]), roots)
    h = (rng.random(1000) * (fam.depth[u] + 1)).astype(np.int64)
    got = linear.up(u, h)
    for a, b, c in zip(u.tolist(), h.tolist(), got.tolist()):
        assert linear.up_naive(a, b) == c


def test_lca_dist_ancestor():
    fam = build_psi(gen_random(80, 2, 5), 0)
    linear, _ = indices(fam)
    rng = np.random.default_rng(1)
    for _ in range(300):
        u, v = rng.integers(fam.n_nodes, size=2).tolist()
        pu, pv = [u], [v]
        while fam.depth[pu[-1]]:
            pu.append(int(fam.parent[pu[-1]]))
        while fam.depth[pv[-1]]:
            pv.append(int(fam.parent[pv[-1]]))
        common = next(x for x in pu if x in pv)
        assert int(linear.lca(u, v)[0]) == common
        assert int(linear.dist(u, v)[0]) == pu.index(common) + pv.index(common)
        assert bool(linear.is_ancestor(u, v)[0]) == (u in pv)


def test_center_of_cross_path():
    fam = build_psi(tree_from_path_word("abcdefgh"), 4)
    linear, _ = indices(fam)
    d = fam.dtrees[0]
    u = int(np.flatnonzero(fam.depth == 4)[0])
    v = int(np.flatnonzero(fam.depth == 2)[0])
    side, mid = linear.center(d, u, v)
    assert side == "left" and int(linear.dist(u, mid)[0]) == 3


# codes ----------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(4))
def test_labels_are_equality_tokens(seed):
    fam = decompose_family(gen_random(10, 1 + seed % 2, seed))
    linear, codes = indices(fam)
    pairs = []
    for u in range(fam.n_nodes):
        for h in range(int(fam.depth[u]) + 1):
            v = linear.up_naive(u, h)
            pairs.append((codes.label(u, v), upward(fam, u, h)))
    by_token: dict = {}
    by_word: dict = {}
    for token, word in pairs:
        assert by_token.setdefault(token, word) == word
        assert by_word.setdefault(word, token) == token


def test_cross_palindromes_through_sample_center(sample):
    fam = build_psi(sample, SAMPLE_CENTER)
    linear, codes = indices(fam)
    d = fam.dtrees[0]
    # acaaca = W_l(x) + W_r(y) with W_l(x) = "acaa" and W_r(y) = "ca"
    x = node_with_word(fam, d.left, "acaa")
    y = node_with_word(fam, d.right, "ac")
    assert codes.is_palindrome_cross(d, x, y)[0]
    # caac = "caa" + "c"
    x = node_with_word(fam, d.left, "caa")
    y = node_with_word(fam, d.right, "c")
    assert codes.is_palindrome_cross(d, x, y)[0]
    y = node_with_word(fam, d.right, "a")
    assert not codes.is_palindrome_cross(d, x, y)[0]
    root = int(fam.side_root[0])
    assert codes.is_palindrome_cross(d, root, root)[0]


def test_exists_finds_right_word(sample):
    fam = build_psi(sample, SAMPLE_CENTER)
    _, codes = indices(fam)
    d = fam.dtrees[0]
    x = node_with_word(fam, d.left, "caa")
    w = int(codes.exists(d.right, x, 1)[0])
    assert w >= 0 and fam.upward_word(w) == "c"
    assert int(codes.exists(d.right, x, 2)[0]) == -1     # no right word "ac"
    x = node_with_word(fam, d.left, "acaa")
    w = int(codes.exists(d.right, x, 2)[0])
    assert w >= 0 and fam.upward_word(w) == "ac"


def test_cross_palindrome_matches_naive_on_random_pairs():
    fam = decompose_family(gen_random(150, 2, 8))
    _, codes = indices(fam)
    rng = np.random.default_rng(2)
    for _ in range(40):
        d = fam.dtrees[int(rng.integers(len(fam.dtrees)))]
        left, right = d.left_nodes(), d.right_nodes()
        xs = left[rng.integers(left.size, size=250)]
        ys = right[rng.integers(right.size, size=250)]
        got = codes.is_palindrome_cross(d, xs, ys)
        for x, y, g in zip(xs.tolist(), ys.tolist(), got.tolist()):
            w = d.word_codes(x, y)
            assert g == (w == w[::-1])


def test_palindrome_flags_and_segments():
    fam = decompose_family(gen_random(60, 2, 6))
    linear, codes = indices(fam)
    for u in range(fam.n_nodes):
        w = fam.upward_codes(u)
        assert codes.pal[u] == (w == w[::-1])
        for h in range(len(w) + 1):
            assert bool(codes.is_palindrome_up(u, h)[0]) == (w[:h] == w[:h][::-1])
