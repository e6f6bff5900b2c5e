from __future__ import annotations

import math
import random

import numpy as np
import pytest

from conftest import SAMPLE_CENTER, SAMPLE_THROUGH, is_pal
from treepal.dtree import (InvariantError, build_psi, centroid, decompose_family,
                           sample_soundness, split_components)
from treepal.generators import gen_path, gen_random
from treepal.oracle import oracle_through
from treepal.tree import LabeledTree, expand_even


def components_without(tree: LabeledTree, r: int) -> list[int]:
    adj = tree.adjacency()
    seen = {r}
    sizes = []
    for start, _ in adj[r]:
        stack, count = [start], 0
        seen.add(start)
        while stack:
            x = stack.pop()
            count += 1
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        sizes.append(count)
    return sizes


def cross_words(family, dtree) -> set[tuple[int, ...]]:
    return {tuple(dtree.word_codes(int(x), int(y)))
            for x in dtree.left_nodes() for y in dtree.right_nodes()}


def simple_path_words(tree: LabeledTree) -> set[tuple[int, ...]]:
    return {tuple(tree.path_codes(u, v)) for u in range(tree.n) for v in range(tree.n)}


# centroid -------------------------------------------------------------------

def test_centroid_of_short_path():
    assert centroid(gen_path(2, "a")) == 1


def test_centroid_of_star():
    star = LabeledTree(6, [(3, i, "a") for i in (0, 1, 2, 4, 5)])
    assert centroid(star) == 3


@pytest.mark.parametrize("seed", range(10))
def test_centroid_components_at_most_half(seed):
    t = gen_random(99, 2, seed)
    r = centroid(t)
    assert max(components_without(t, r)) <= math.ceil(t.n / 2)


def test_centroid_rejects_empty_subset():
    with pytest.raises(ValueError):
        centroid(gen_path(3, "a"), within=[])


# split --------------------------------------------------------------------

def test_split_examples():
    a, b = split_components([5, 5])
    assert sorted([a, b]) == [[0], [1]]
    a, b = split_components([6, 3, 3])
    assert {sum([6, 3, 3][i] for i in g) for g in (a, b)} == {6}


def test_split_bound_on_random_lists():
    rng = random.Random(1)
    for _ in range(1000):
        k = rng.randint(2, 12)
        sizes = [rng.randint(1, 20) for _ in range(k)]
        total = sum(sizes)
        if 2 * max(sizes) > total:
            continue
        a, b = split_components(sizes)
        assert sorted(a + b) == list(range(k))
        assert 4 * max(sum(sizes[i] for i in a), sum(sizes[i] for i in b)) <= 3 * total


def test_split_bound_is_enforced():
    with pytest.raises(InvariantError):
        split_components([10, 1])


# build_psi -------------------------------------------------------------------

def test_psi_of_sample_center_merges_c_children(sample):
    psi = build_psi(sample, SAMPLE_CENTER)
    root = int(psi.side_root[0])
    kids = np.flatnonzero((psi.parent == root) & (psi.depth == 1))
    labels = sorted(sample.alphabet[c] for c in psi.label[kids])
    assert labels == ["a", "b", "c"]        # two c-edges at the centre became one
    # the merged c-branch also merges its two b-children
    assert psi.n_nodes == sample.n - 2


def test_psi_contains_every_palindrome_through_center(sample):
    psi = build_psi(sample, SAMPLE_CENTER)
    d = psi.dtrees[0]
    words = {sample.decode(w) for w in cross_words(psi, d)}
    pals = {w for w in words if w and is_pal(w)}
    assert oracle_through(sample, SAMPLE_CENTER).words <= pals
    assert SAMPLE_THROUGH <= pals


def test_psi_of_path_endpoint_has_no_merges():
    t = gen_path(7, "ab")
    psi = build_psi(t, 0)
    assert psi.n_nodes == t.n
    assert psi.dtrees[0].left == psi.dtrees[0].right   # mirrored copy of one side


def test_psi_of_false_palindrome_tree_is_unsound(false_pal):
    psi = build_psi(false_pal, 0)
    words = {false_pal.decode(w) for w in cross_words(psi, psi.dtrees[0])}
    assert "baaaab" in words
    report = sample_soundness(psi, 2000, 0)
    assert not report and report.counterexample is not None


# decompose_family ----------------------------------------------------------

def test_single_edge_family_is_empty():
    fam = decompose_family(gen_path(1, "a"))
    assert fam.dtrees == []
    assert sample_soundness(fam)


def test_false_palindrome_absent_from_family(false_pal):
    fam = decompose_family(false_pal)
    code = [false_pal.code(c) for c in "baaaab"]
    for d in fam.dtrees:
        assert tuple(code) not in cross_words(fam, d)


def test_family_is_deterministic_trie():
    fam = decompose_family(gen_random(300, 3, 2))
    nonroot = np.flatnonzero(fam.depth > 0)
    keys = fam.parent[nonroot] * fam.sigma + fam.label[nonroot]
    assert np.unique(keys).size == keys.size
    assert np.all(fam.depth[nonroot] == fam.depth[fam.parent[nonroot]] + 1)
    assert np.all(fam.side[nonroot] == fam.side[fam.parent[nonroot]])


def test_family_edge_budget_at_512():
    fam = decompose_family(gen_random(512, 2, 0))
    assert fam.total_edges <= 8 * 512 * 10


def test_recursion_depth_is_logarithmic():
    for n in (50, 400, 2000):
        fam = decompose_family(gen_random(n, 2, n))
        assert fam.levels <= math.log(n + 1, 4 / 3) + 1
        for stats in fam.level_stats:
            assert stats["max_component_ratio"] <= 0.5
            assert stats["max_group_ratio"] <= 0.75


def test_dtree_sides_mirror_each_other():
    fam = decompose_family(gen_random(40, 2, 9))
    pairs = {(d.left, d.right, d.center) for d in fam.dtrees}
    assert all((r, l, c) in pairs for l, r, c in pairs)


@pytest.mark.parametrize("seed", range(40))
def test_family_sound_and_complete_up_to_reversal(seed):
    t = gen_random(2 + seed % 9, 1 + seed % 3, seed)
    fam = decompose_family(t)
    real = simple_path_words(t)
    found_left = set()
    for d in fam.dtrees:
        for x in d.left_nodes().tolist():
            for y in d.right_nodes().tolist():
                w = tuple(d.word_codes(x, y))
                assert w in real
                if fam.depth[x] >= fam.depth[y]:
                    found_left.add(w)
    # a path whose midpoint lies on the right side is present reversed
    even = {w for w in real if w and len(w) % 2 == 0}
    assert all(w in found_left or w[::-1] in found_left for w in even)
    assert {w for w in even if w == w[::-1]} <= found_left


@pytest.mark.parametrize("seed", range(5))
def test_sampled_soundness_on_expanded_trees(seed):
    t = expand_even(gen_random(80, 2, seed)).tree
    report = sample_soundness(decompose_family(t), 3000, seed)
    assert report and report.checked == 3000
