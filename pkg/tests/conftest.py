from __future__ import annotations

import pytest

from treepal.tree import parse_tree

# Two-branch example tree; its distinct palindromes are listed in SAMPLE_WORDS.
SAMPLE_TEXT = """13
1 3 c
2 4 a
4 5 b
3 6 b
4 6 c
6 7 a
6 8 c
7 9 a
9 10 c
10 11 a
8 12 b
12 13 c
"""
SAMPLE_WORDS = {"a", "b", "c", "aa", "aca", "acaaca", "bcb", "bccb", "caac", "cbc", "cbcbc", "cc"}
# Node 6 (0-based 5) and the palindromes of length >= 2 through it.
SAMPLE_CENTER = 5
SAMPLE_THROUGH = {"bcb", "bccb", "aca", "cbc", "caac", "cc", "cbcbc", "aa", "acaaca"}

# Rooting this tree at node 1 and merging equal labels creates "baaaab",
# which is not a simple path of the tree.
FALSE_PAL_TEXT = "7\n1 2 a\n1 3 b\n2 4 a\n2 5 b\n4 6 a\n6 7 b\n"


def is_pal(w) -> bool:
    return list(w) == list(w)[::-1]


def word_palindromes(w: str) -> set[str]:
    return {w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1) if is_pal(w[i:j])}


@pytest.fixture
def sample():
    return parse_tree(SAMPLE_TEXT)


@pytest.fixture
def false_pal():
    return parse_tree(FALSE_PAL_TEXT)
