import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from polyramsey import MalformedInputError, PairColoring, bound_tables, max_polychromatic, rainbow_extract
from polyramsey.cbrank import LabeledTree, SetDescription
from polyramsey.characteristics import FiniteFunction, Slalom
from polyramsey.generators import (
    ShrinkingMap,
    first_dyadic_intervals,
    first_dyadic_points,
    ie_coloring,
    nowhere_dense_coloring,
    nwd_transfer,
    orbit_split,
    random_coloring,
)
from polyramsey.search import EdgePartition
from polyramsey.serialize import dumps, from_data, loads, to_data, unary_coloring_data


def round_trips(obj):
    text = dumps(obj)
    back = loads(text)
    return back == obj and dumps(back) == text


def test_round_trip_each_kind():
    c = random_coloring(26, 2, 3)
    _, cert = rainbow_extract(c, 2)
    _, system = nowhere_dense_coloring([Fraction(i, 17) for i in range(1, 9)], 4)
    objs = [
        c, cert, bound_tables(3, 5, 4), max_polychromatic(random_coloring(7, 2, 1), all_optimal=True),
        EdgePartition.from_coloring(random_coloring(5, 2, 2)), system,
        nwd_transfer(first_dyadic_points(8), first_dyadic_intervals(8), 8),
        SetDescription.parse("[[[]][]][]"), LabeledTree.full("ABB", 3),
        FiniteFunction((0, 4, 4)), Slalom((frozenset({1}), frozenset()), (2, 2)),
    ]
    for obj in objs:
        assert round_trips(obj), type(obj).__name__


def test_unary_coloring_round_trip():
    f = ShrinkingMap({frozenset({0, 1, 2}): frozenset({0, 1}), frozenset({0, 1}): frozenset({0})})
    split = orbit_split(f)
    chi = ie_coloring(split, f.family)
    assert loads(dumps(unary_coloring_data(chi))) == chi


def test_overflow_cells_survive():
    t = bound_tables(3, 6, 4)
    back = loads(dumps(t))
    assert back.g == t.g and back.overflow == t.overflow


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 12), st.integers(1, 4), st.integers(0, 2**31))
def test_coloring_round_trip(n, k, seed):
    assert round_trips(random_coloring(n, k, seed))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 100), max_size=20))
def test_function_round_trip(xs):
    assert round_trips(FiniteFunction(tuple(xs)))


@pytest.mark.parametrize("doc", [
    "not json",
    "[]",
    '{"kind": "nope"}',
    '{"kind": "coloring", "n": 3, "k": 2}',
    '{"kind": "coloring", "n": 3, "k": 2, "pairs": [[0, 1, 0], [0, 2, 1]]}',
    '{"kind": "coloring", "n": 3, "k": 2, "pairs": [[0, 1, 0], [0, 1, 0], [0, 2, 1], [1, 2, 2]]}',
    '{"kind": "coloring", "n": 3, "k": 2, "pairs": [[0, 1, 0], [0, 5, 1], [1, 2, 2]]}',
    '{"kind": "coloring", "n": 3, "k": 1, "pairs": [[0, 1, 0], [0, 2, 0], [1, 2, 2]]}',
    '{"kind": "coloring", "n": "3", "k": 2, "pairs": []}',
    '{"kind": "function", "table": [1, -2]}',
    '{"kind": "set-description", "forest": "[["}',
    '{"kind": "transfer", "t": [["1/2"]], "F": []}',
])
def test_malformed(doc):
    with pytest.raises(MalformedInputError):
        loads(doc)


def test_pairs_in_any_order():
    c = random_coloring(5, 2, 4)
    d = to_data(c)
    d["pairs"] = list(reversed(d["pairs"]))
    assert from_data(d) == c
    d["pairs"] = [[b, a, col] for a, b, col in d["pairs"]]
    assert from_data(d) == c


def test_stable_text():
    c = PairColoring.all_distinct(3)
    assert json.loads(dumps(c)) == {"kind": "coloring", "n": 3, "k": 1, "pairs": [[0, 1, 0], [0, 2, 1], [1, 2, 2]]}
