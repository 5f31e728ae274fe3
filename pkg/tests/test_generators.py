from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from polyramsey import PreconditionError, bound_of, classify_subset, max_polychromatic
from polyramsey.coloring import Verdict
from polyramsey.generators import (
    Interval,
    ShrinkingMap,
    edge_graph_coloring,
    edge_list,
    escape_violations,
    first_dyadic_intervals,
    first_dyadic_points,
    fraenkel_coloring,
    ie_coloring,
    interval_system_violations,
    nowhere_dense_coloring,
    nwd_transfer,
    orbit_split,
    random_coloring,
    random_matching_coloring,
    transfer_violations,
    unary_bound,
)


def fs(*xs):
    return frozenset(xs)


def test_fraenkel_fibers_m2():
    c = fraenkel_coloring(2)
    fibers = {frozenset(v) for v in c.fibers.values()}
    assert fibers == {fs((0, 3), (1, 2)), fs((0, 2), (1, 3)), fs((0, 1)), fs((2, 3))}
    assert classify_subset(c, range(4)).verdict is Verdict.NEITHER
    assert all(bound_of(fraenkel_coloring(m)) == 2 for m in range(2, 7))


def test_fraenkel_optimum_law():
    for m in range(2, 6):
        r = max_polychromatic(fraenkel_coloring(m), all_optimal=True)
        assert r.optimum == m + 1
        for w in r.all_optimal:
            assert sum(1 for i in range(m) if {2 * i, 2 * i + 1} <= set(w)) <= 1


def test_edge_graph_base_4():
    c = edge_graph_coloring(4)
    E = edge_list(4)
    idx = {e: i for i, e in enumerate(E)}
    matchings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    assert len({c.color(idx[a], idx[b]) for a, b in matchings}) == 1
    tri = [(idx[a], idx[b]) for a, b in combinations([(0, 1), (0, 2), (1, 2)], 2)]
    assert len({c.color(*p) for p in tri}) == 1
    assert bound_of(c) == 3 and c.n == 6


def test_edge_graph_identification():
    for v in range(4, 7):
        c = edge_graph_coloring(v)
        idx = {e: i for i, e in enumerate(edge_list(v))}
        for a, b, x, d in combinations(range(v), 4):
            assert c.color(idx[(a, b)], idx[(x, d)]) == c.color(idx[(a, d)], idx[(b, x)])


def test_edge_graph_poly_sets_triangle_free():
    for v in range(3, 6):
        c = edge_graph_coloring(v)
        E = edge_list(v)
        for r in range(3, len(E) + 1):
            for Y in combinations(range(len(E)), r):
                if classify_subset(c, Y).polychromatic:
                    edges = {E[i] for i in Y}
                    for t in combinations(range(v), 3):
                        assert not set(combinations(t, 2)) <= edges


def test_random_coloring():
    assert set(random_coloring(6, 1, 3).colors) == set(range(15))
    assert random_coloring(10, 2, 7) == random_coloring(10, 2, 7)
    assert bound_of(random_coloring(10, 2, 7)) <= 2
    with pytest.raises(PreconditionError):
        random_coloring(5, 0, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 4), st.integers(0, 2**31))
def test_random_coloring_respects_bound(n, k, seed):
    assert bound_of(random_coloring(n, k, seed)) <= k


def test_random_matching_coloring_is_2_bounded():
    c = random_matching_coloring(30, 4)
    m = c.materialize()
    assert bound_of(m) <= 2
    assert random_matching_coloring(30, 4).coloring_id == c.coloring_id


def test_dyadics():
    assert first_dyadic_points(5) == [Fraction(1, 2), Fraction(1, 4), Fraction(3, 4), Fraction(1, 8), Fraction(3, 8)]
    ivs = first_dyadic_intervals(4)
    assert ivs[0] == Interval(0, 1) and ivs[1] == Interval(0, Fraction(1, 2))


def test_nwd_depth_zero_is_all_distinct():
    c, system = nowhere_dense_coloring(first_dyadic_points(6), 0)
    assert bound_of(c) == 1 and system.depth == 0


@pytest.mark.parametrize("points", [first_dyadic_points(16), [Fraction(i, 17) for i in range(1, 17)]])
def test_nwd_system(points):
    c, system = nowhere_dense_coloring(points, 8)
    assert interval_system_violations(system) == []
    assert bound_of(c) <= 2
    r = max_polychromatic(c, all_optimal=True)
    for w in r.all_optimal:
        assert escape_violations(c, system, w) == []


def test_nwd_identified_pairs_share_a_triple():
    c, _ = nowhere_dense_coloring([Fraction(i, 17) for i in range(1, 17)], 8)
    shared = [v for v in c.fibers.values() if len(v) == 2]
    assert shared
    for e, f in shared:
        assert e[1] == f[1]  # both pairs end at the same x


def test_nwd_rejects_bad_input():
    with pytest.raises(PreconditionError):
        nowhere_dense_coloring([Fraction(1, 2)] * 3, 2)
    with pytest.raises(PreconditionError):
        nowhere_dense_coloring([Fraction(1, 2), Fraction(1, 3)], 2)


def test_escape_detects_planted_violation():
    c, system = nowhere_dense_coloring([Fraction(i, 17) for i in range(1, 17)], 8)
    (n, pq, iv) = next((n, pq, iv) for n in range(system.depth) for pq, iv in system.b[n].items()
                       if any(system.S[x] in iv and x > pq[1] for x in range(len(system.S))))
    x = next(x for x in range(len(system.S)) if system.S[x] in iv and x > pq[1])
    assert escape_violations(c, system, [*pq, x])
    assert not classify_subset(c, [*pq, x]).polychromatic


def test_transfer_constant_G():
    q = Fraction(1, 3)
    out = nwd_transfer([q] * 32, first_dyadic_intervals(32), 32)
    assert all(q not in t for t in out.t)
    assert len(set(out.F)) == 32
    assert transfer_violations([q] * 32, out) == []


def test_transfer_injective_dyadics():
    G = first_dyadic_points(32)
    out = nwd_transfer(G, first_dyadic_intervals(32), 32)
    assert len(set(out.F)) == 32
    assert transfer_violations(G, out) == []


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from(first_dyadic_points(31)), min_size=32, max_size=32))
def test_transfer_property(G):
    out = nwd_transfer(G, first_dyadic_intervals(32), 32)
    assert transfer_violations(G, out) == []
    assert len(set(out.F)) == len(out.F)


def test_orbit_split_example():
    x1, x2, x3 = fs(0, 1, 2, 3), fs(0, 1, 2), fs(0, 1)
    x4, x5 = fs(1, 2, 3), fs(1, 2)
    split = orbit_split(ShrinkingMap({x1: x2, x2: x3, x4: x5}))
    assert split.domain == {x1}
    assert split.f0[x1] == x3 and split.f1[x1] == x2
    chi = ie_coloring(split, [x1, x2, x3, x4, x5])
    assert chi[x2] == chi[x3] and unary_bound(chi) == 2
    assert len({chi[x] for x in (x1, x4, x5)}) == 3


def test_orbit_split_empty_and_long_chain():
    split = orbit_split(ShrinkingMap({}))
    assert not split.f0 and not split.f1 and not split.domain
    assert ie_coloring(split, [fs(1), fs(2)]) == {fs(1): fs(fs(1)), fs(2): fs(fs(2))}
    chain = [frozenset(range(j)) for j in range(6, 1, -1)]
    split = orbit_split(ShrinkingMap(dict(zip(chain, chain[1:]))))
    assert split.domain == set(chain[:2])
    assert not set(split.f0.values()) & set(split.f1.values())


def test_shrinking_map_validation():
    with pytest.raises(PreconditionError):
        ShrinkingMap({fs(0, 1): fs(0, 1)})
    with pytest.raises(PreconditionError):
        ShrinkingMap({fs(0, 1): fs(0), fs(0, 2): fs(0)})


@st.composite
def shrinking_maps(draw):
    # disjoint chains of initial segments of private blocks
    lengths = draw(st.lists(st.integers(1, 7), min_size=0, max_size=4))
    mapping, base = {}, 0
    for L in lengths:
        sets = [frozenset(range(base, base + j + 1)) for j in range(L)]
        for j in range(1, L):
            mapping[sets[j]] = sets[j - 1]
        base += L
    return ShrinkingMap(mapping)


@settings(max_examples=100, deadline=None)
@given(shrinking_maps())
def test_ie_coloring_properties(f):
    split = orbit_split(f)
    family = f.family
    chi = ie_coloring(split, family)
    assert unary_bound(chi) <= 2
    for x in split.domain:
        assert chi[split.f0[x]] == chi[split.f1[x]]
        assert split.f0[x] < x and split.f1[x] < x


def test_ie_exhaustive_small():
    # every injective proper-subset map on subsets of {0,1,2} with at most 4 arrows
    universe = [frozenset(s) for r in range(4) for s in combinations(range(3), r)]
    arrows = [(x, y) for x in universe for y in universe if y < x]
    count = 0
    for r in range(5):
        for chosen in combinations(arrows, r):
            src = [x for x, _ in chosen]
            dst = [y for _, y in chosen]
            if len(set(src)) < r or len(set(dst)) < r:
                continue
            split = orbit_split(ShrinkingMap(dict(chosen)))
            chi = ie_coloring(split, universe)
            assert unary_bound(chi) <= 2
            count += 1
    assert count == 522

