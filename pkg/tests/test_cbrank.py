from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyramsey.cbrank import (
    LabeledTree,
    SetDescription,
    all_descriptions,
    cb_rank,
    chain,
    derivative,
    disjoint_union,
    has_accumulation,
    iterated_rank,
    leaf,
    level_extract,
    materialize,
    random_description,
    structural_rank,
)
from polyramsey.errors import MalformedInputError, PreconditionError


def D(text):
    return SetDescription.parse(text)


def test_derivative_examples():
    assert derivative(leaf()).empty
    assert derivative(D("[[]]")) == leaf()
    d = D("[[[]]]")
    assert derivative(d) == D("[[]]")
    assert (cb_rank(d), cb_rank(derivative(d))) == (3, 2)


def test_rank_examples():
    assert cb_rank(SetDescription()) == 0
    assert cb_rank(leaf()) == 1 and cb_rank(D("[[]]")) == 2
    c4 = SetDescription((chain(4),))
    assert cb_rank(c4) == iterated_rank(c4) == 5


def test_union_examples():
    d = D("[[]][]")
    assert cb_rank(disjoint_union(d, SetDescription())) == cb_rank(d)
    assert cb_rank(disjoint_union(D("[[]]"), D("[[[]]]"))) == 3


def test_parse_round_trip_and_errors():
    text = "[[][[]]][]"
    assert str(D(text)) == text
    for bad in ["[", "]", "[[]", "x"]:
        with pytest.raises(MalformedInputError):
            D(bad)


def test_description_count():
    # ordered forests with n nodes number Catalan(n)
    assert sum(1 for _ in all_descriptions(6)) == 1 + 1 + 2 + 5 + 14 + 42 + 132


def test_exhaustive_small():
    for d in all_descriptions(6):
        r = structural_rank(d)
        assert r == iterated_rank(d)
        assert cb_rank(derivative(d)) == max(r - 1, 0)
        assert (r < 2) == (not has_accumulation(d))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**31))
def test_random_descriptions(seed):
    rng = np.random.default_rng(seed)
    d1, d2 = random_description(rng, 40), random_description(rng, 40)
    assert structural_rank(d1) == iterated_rank(d1)
    u = disjoint_union(d1, d2)
    assert cb_rank(u) == max(cb_rank(d1), cb_rank(d2)) <= cb_rank(d1) + cb_rank(d2)


def test_materialize_examples():
    assert materialize(leaf(), 3) == [Fraction(0)]
    pts = materialize(D("[[]]"), 3)
    assert len(pts) == 4 and pts[0] == 0 and all(0 < p < 1 for p in pts[1:])
    for w in range(1, 5):
        assert len(materialize(SetDescription((chain(2),)), w)) == 1 + w + w * w
    with pytest.raises(PreconditionError):
        materialize(leaf(), 0)


def test_materialize_accumulation_shadow():
    # with more copies the approximants crowd the limit point
    pts = materialize(D("[[]]"), 10)
    assert min(pts[1:]) == Fraction(1, 2 ** 11)


def test_level_extract_examples():
    t = LabeledTree.full("AAAAA", 2)
    label, sub = level_extract(t, 2, 2)
    assert label == "A" and sub.height == 2
    t = LabeledTree.full("ABAABA", 2)
    label, sub = level_extract(t, 3, 2)
    assert label == "A" and sub.height == 3
    with pytest.raises(PreconditionError):
        level_extract(t, 1, 1)


def test_level_extract_reconnects_ancestry():
    t = LabeledTree.full("BAB", 2)
    label, sub = level_extract(t, 1, 1)
    assert label == "B" and sub.height == 1
    # nodes of level 2 under the leftmost B-node of level 0: all four grandchildren
    assert sub.parents[1] == (0, 0, 0, 0)


def test_level_extract_exhaustive():
    for h in range(9):
        for bits in range(1 << (h + 1)):
            labels = ["A" if bits >> i & 1 else "B" for i in range(h + 1)]
            t = LabeledTree.full(labels, 2)
            for k in range(h + 1):
                label, sub = level_extract(t, k, h - k)
                assert sub.height == (k if label == "A" else h - k)
                assert set(sub.labels) == {label}


def test_labeled_tree_validation():
    with pytest.raises(MalformedInputError):
        LabeledTree(("A", "C"), ((0,), (0,)))
    with pytest.raises(MalformedInputError):
        LabeledTree(("A", "B", "A"), ((0,), (0, 0), (0, 0)))
