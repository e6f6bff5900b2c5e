from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SAMPLE_CENTER, SAMPLE_THROUGH, SAMPLE_WORDS, is_pal, word_palindromes
from treepal.dtree import centroid
from treepal.generators import gen_comb, gen_path, gen_random
from treepal.oracle import (OracleLimitError, oracle_all, oracle_all_cubic, oracle_longest,
                            oracle_test, oracle_through)
from treepal.tree import palindrome_of, tree_from_path_word


def test_sample_set(sample):
    pals = oracle_all(sample)
    assert pals.words == SAMPLE_WORDS and len(pals) == 12


def test_witnesses_spell_their_words(sample):
    pals = oracle_all(sample)
    for w, (u, v) in pals.entries.items():
        assert sample.path_value(u, v) == w and is_pal(w)
        assert palindrome_of(sample, pals.triple(w, sample)) == w


def test_through_center(sample):
    got = {w for w in oracle_through(sample, SAMPLE_CENTER) if len(w) >= 2}
    assert got == SAMPLE_THROUGH


def test_through_leaf_of_unary_path():
    t = gen_path(3, "a")
    assert oracle_through(t, 0).words == {"a", "aa", "aaa"}


def test_through_is_subset():
    t = gen_random(50, 2, 11)
    assert oracle_through(t, centroid(t)).words <= oracle_all(t).words


def test_test_and_longest(sample):
    assert oracle_test(sample, 6)
    assert not oracle_test(sample, 7)
    length, witness = oracle_longest(sample)
    assert length == 6 and palindrome_of(sample, witness) == "acaaca"


def test_limit_guard():
    t = gen_path(30, "ab")
    with pytest.raises(OracleLimitError):
        oracle_all(t, limit=29)
    assert len(oracle_all(t, limit=30)) > 0
    assert len(oracle_all(t, limit=None)) > 0


def test_comb5_count_is_pinned():
    t = gen_comb(5)
    assert len(oracle_all(t)) == 65
    assert oracle_all_cubic(t).words == oracle_all(t).words


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="abc", min_size=1, max_size=25))
def test_path_word_matches_classic_enumeration(word):
    assert oracle_all(tree_from_path_word(word)).words == word_palindromes(word)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(1, 3), st.integers(0, 2**32))
def test_independent_rewrites_agree(n, sigma, seed):
    t = gen_random(n, sigma, seed)
    pals = oracle_all(t)
    assert oracle_all_cubic(t).words == pals.words
    assert len(pals) >= max(1, len(t.alphabet))
    for r in (0, t.n - 1):
        assert oracle_through(t, r).words <= pals.words
