"""Explicit colorings: Fraenkel pairs, edge graphs, interval systems, orbit splitting, random."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .coloring import ImplicitColoring, PairColoring, pair_count, pair_index
from .errors import InternalInvariantError, PreconditionError


def fraenkel_coloring(m: int) -> PairColoring:
    """Pairs a_i = 2i, b_i = 2i+1 with {a_i,b_j} ~ {a_j,b_i} and {a_i,a_j} ~ {b_i,b_j}.

    Each color is the lexicographic index of the least pair in its fiber.
    """
    if m < 1:
        raise PreconditionError("m must be >= 1")
    n = 2 * m

    def fn(x: int, y: int) -> int:
        i, j = x // 2, y // 2
        if i == j:
            return pair_index(n, x, y)
        if x % 2 == y % 2:
            return pair_index(n, 2 * i, 2 * j)
        return pair_index(n, 2 * i, 2 * j + 1)

    return PairColoring.from_function(n, fn, 2)


def edge_list(v: int) -> list[tuple[int, int]]:
    return list(combinations(range(v), 2))


def edge_graph_coloring(v: int) -> PairColoring:
    """Points are the edges of K_v; two edges are colored by the union of their endpoints (a bitmask)."""
    if v < 3:
        raise PreconditionError("v must be >= 3")
    edges = edge_list(v)

    def fn(x: int, y: int) -> int:
        a, b = edges[x]
        c, d = edges[y]
        return (1 << a) | (1 << b) | (1 << c) | (1 << d)

    return PairColoring.from_function(len(edges), fn, 4)


def random_coloring(n: int, k: int, seed: int, size_weights: Optional[Sequence[float]] = None) -> PairColoring:
    """Seeded k-bounded coloring: shuffle the pairs, then cut the shuffled list into fibers.

    ``size_weights[s-1]`` is the relative frequency of fibers of size s; the
    default makes every fiber as large as allowed.
    """
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if n < 0:
        raise PreconditionError("n must be >= 0")
    total = pair_count(n)
    rng = np.random.default_rng(seed)
    order = rng.permutation(total)
    colors = np.empty(total, dtype=np.int64)
    if size_weights is None:
        colors[order] = np.arange(total) // k
    else:
        w = np.asarray(size_weights, dtype=float)
        if len(w) != k or (w < 0).any() or w.sum() <= 0:
            raise PreconditionError("size_weights needs k non-negative entries with positive sum")
        sizes = rng.choice(np.arange(1, k + 1), size=total, p=w / w.sum())
        starts = np.concatenate(([0], np.cumsum(sizes)))
        fiber = np.searchsorted(starts, np.arange(total), side="right") - 1
        colors[order] = fiber
    return PairColoring(n, tuple(colors.tolist()), k)


def _mix(x: int, key: int) -> int:
    x = (x ^ key) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


class _Feistel:
    """Keyed permutation of range(size) by a balanced Feistel network plus cycle walking."""

    def __init__(self, size: int, seed: int, rounds: int = 4):
        self.size = size
        half = max(1, ((size - 1).bit_length() + 1) // 2)
        self.half = half
        self.mask = (1 << half) - 1
        self.keys = [_mix(seed * 1000003 + r, 0x9E3779B97F4A7C15) for r in range(rounds)]

    def _once(self, x: int) -> int:
        left, right = x >> self.half, x & self.mask
        for key in self.keys:
            left, right = right, left ^ (_mix(right, key) & self.mask)
        return (left << self.half) | right

    def __call__(self, x: int) -> int:
        x = self._once(x)
        while x >= self.size:
            x = self._once(x)
        return x


def random_matching_coloring(n: int, seed: int) -> ImplicitColoring:
    """A seeded 2-bounded coloring of a universe too large to tabulate.

    Pair indices are permuted pseudo-randomly and consecutive images share a color.
    """
    perm = _Feistel(max(1, pair_count(n)), seed)

    def fn(a: int, b: int) -> int:
        return perm(pair_index(n, a, b)) >> 1

    return ImplicitColoring(n, fn, 2, f"matching:{n}:{seed}")


# Exact rational intervals


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if not self.lo < self.hi:
            raise PreconditionError(f"empty interval ({self.lo}, {self.hi})")

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    def meets(self, other: "Interval") -> bool:
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def within(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def split(self, parts: int, index: int) -> "Interval":
        w = (self.hi - self.lo) / parts
        return Interval(self.lo + index * w, self.lo + (index + 1) * w)

    def __str__(self):
        return f"({self.lo}, {self.hi})"


def dyadic_intervals() -> Iterator[Interval]:
    """Open intervals in (0,1) with dyadic endpoints, by denominator 2^d, then lexicographically."""
    d = 0
    while True:
        den = 1 << d
        pts = [Fraction(i, den) for i in range(den + 1)]
        batch = []
        for lo, hi in combinations(pts, 2):
            if max(lo.denominator, hi.denominator) == den:
                batch.append(Interval(lo, hi))
        yield from batch
        d += 1


def first_dyadic_intervals(count: int) -> list[Interval]:
    out = []
    for iv in dyadic_intervals():
        if len(out) >= count:
            break
        out.append(iv)
    return out


def dyadic_points() -> Iterator[Fraction]:
    """Dyadic rationals in (0,1), by denominator then size."""
    d = 1
    while True:
        den = 1 << d
        for i in range(1, den, 2):
            yield Fraction(i, den)
        d += 1


def first_dyadic_points(count: int) -> list[Fraction]:
    out = []
    for x in dyadic_points():
        if len(out) >= count:
            break
        out.append(x)
    return out


@dataclass(frozen=True)
class IntervalSystem:
    S: tuple[Fraction, ...]
    c: tuple[Interval, ...]
    # per level n: the surviving indices of S, the chain a_0^n .. a_n^n, the chosen pairs
    S_n: tuple[frozenset[int], ...]
    a: tuple[tuple[Interval, ...], ...]
    chosen: tuple[tuple[Optional[tuple[int, int]], ...], ...]
    b: tuple[Mapping[tuple[int, int], Interval], ...] = field(repr=False)

    @property
    def depth(self) -> int:
        return len(self.c)

    def removed(self, n: int) -> frozenset[int]:
        return frozenset(range(len(self.S))) - self.S_n[n]


def nowhere_dense_coloring(S: Sequence, depth: int,
                           intervals: Optional[Sequence[Interval]] = None) -> tuple[PairColoring, IntervalSystem]:
    """Interval-system coloring of the points of S (indices in list order).

    For p, q before x with S[x] in b_n^{p,q}: chi(p, x) = chi(q, x) = {p, q, x};
    otherwise chi(p, x) = {p, x}. Colors are bitmasks of index sets.
    """
    S = tuple(Fraction(x) for x in S)
    if len(S) < 3:
        raise PreconditionError("S needs at least 3 points")
    if len(set(S)) != len(S):
        raise PreconditionError("points of S must be distinct")
    c = tuple(intervals[:depth]) if intervals is not None else tuple(first_dyadic_intervals(depth))
    if len(c) < depth:
        raise PreconditionError(f"need {depth} intervals, got {len(c)}")
    everything = frozenset(range(len(S)))
    S_n, chains, chosen_all, b_all = [], [], [], []
    for n in range(depth):
        a_cur = c[n]
        chain = [a_cur]
        chosen = []
        for i in range(n):
            pick = None
            for pq in sorted(b_all[i]):
                if a_cur.meets(b_all[i][pq]):
                    pick = pq
                    break
            if pick is not None:
                a_cur = a_cur.intersect(b_all[i][pick])
            chosen.append(pick)
            chain.append(a_cur)
        removed = {x for pq in chosen if pq is not None for x in pq}
        live = everything - removed
        pairs = list(combinations(sorted(live), 2))
        b_n = {}
        if pairs:
            parts = 1
            while parts < len(pairs):
                parts *= 2
            for rank, pq in enumerate(pairs):
                b_n[pq] = a_cur.split(parts, rank)
        S_n.append(frozenset(live))
        chains.append(tuple(chain))
        chosen_all.append(tuple(chosen))
        b_all.append(b_n)

    system = IntervalSystem(S, c, tuple(S_n), tuple(chains), tuple(chosen_all), tuple(b_all))
    assigned: dict[tuple[int, int], int] = {}
    for n in range(depth):
        for (p, q), iv in b_all[n].items():
            for x in range(q + 1, len(S)):
                if S[x] in iv:
                    col = (1 << p) | (1 << q) | (1 << x)
                    for y in (p, q):
                        old = assigned.get((y, x))
                        if old is not None and old != col:
                            raise InternalInvariantError(
                                f"pair ({y}, {x}) colored twice, at level {n} and earlier")
                        assigned[(y, x)] = col

    def fn(y: int, x: int) -> int:
        return assigned.get((y, x), (1 << y) | (1 << x))

    return PairColoring.from_function(len(S), fn, 2), system


def interval_system_violations(system: IntervalSystem) -> list[str]:
    """Check nesting, per-level disjointness and the cross-level clause; return descriptions of failures."""
    bad = []
    for n in range(system.depth):
        chain = system.a[n]
        if chain[0] != system.c[n]:
            bad.append(f"a_0^{n} differs from c_{n}")
        for i in range(1, len(chain)):
            if not chain[i].within(chain[i - 1]):
                bad.append(f"a_{i}^{n} not inside a_{i - 1}^{n}")
        top = chain[-1]
        items = sorted(system.b[n].items())
        for pq, iv in items:
            if not iv.within(top):
                bad.append(f"b_{n}^{pq} not inside a_{n}^{n}")
            if not set(pq) <= system.S_n[n]:
                bad.append(f"b_{n}^{pq} indexed outside S_{n}")
        for (pq, u), (rs, w) in combinations(items, 2):
            if u.meets(w):
                bad.append(f"b_{n}^{pq} meets b_{n}^{rs}")
    flat = [(n, pq, iv) for n in range(system.depth) for pq, iv in system.b[n].items()]
    for (n, pq, u), (m, rs, w) in combinations(flat, 2):
        if n != m and set(pq) & set(rs) and u.meets(w):
            bad.append(f"b_{n}^{pq} meets b_{m}^{rs} with a shared index")
    return bad


def escape_violations(c: PairColoring, system: IntervalSystem, A: Iterable[int]) -> list[tuple[int, tuple[int, int], int]]:
    """Points x of A inside b_n^{p,q} above p, q with p, q in A ∩ S_n (there should be none when A is polychromatic)."""
    A = sorted(set(A))
    inA = set(A)
    out = []
    for n in range(system.depth):
        for (p, q), iv in system.b[n].items():
            if p in inA and q in inA:
                for x in A:
                    if x > q and system.S[x] in iv:
                        out.append((n, (p, q), x))
    return out


@dataclass(frozen=True)
class TransferResult:
    t: tuple[Interval, ...]
    F: tuple[Fraction, ...]


def nwd_transfer(G: Sequence, intervals: Sequence[Interval], window: int) -> TransferResult:
    """Build intervals t_n inside c_n avoiding G(0..n), and an injective F tracking G through them.

    t_n is the leftmost gap of c_n between the points G(0..n). F(n) is G(n)
    when that value is still unused, and otherwise the first fresh point
    G(n) + (hi - G(n)) / 2^j of the intersection (lo, hi) of the earlier t's
    containing G(n).
    """
    G = [Fraction(x) for x in G]
    if len(G) < window:
        raise PreconditionError(f"G is defined on {len(G)} points, window is {window}")
    if len(intervals) < window:
        raise PreconditionError(f"need {window} intervals, got {len(intervals)}")
    ts: list[Interval] = []
    F: list[Fraction] = []
    used: set[Fraction] = set()
    for n in range(window):
        g = G[n]
        lo, hi = g - 1, g + 1
        for t in ts:
            if g in t:
                lo, hi = max(lo, t.lo), min(hi, t.hi)
        if not lo < g < hi:
            raise InternalInvariantError(f"empty intersection at n={n}")
        x = g
        j = 1
        while x in used:
            x = g + (hi - g) / (1 << j)
            j += 1
        F.append(x)
        used.add(x)
        cn = intervals[n]
        cuts = sorted({v for v in G[: n + 1] if v in cn})
        ts.append(Interval(cn.lo, cuts[0] if cuts else cn.hi))
    return TransferResult(tuple(ts), tuple(F))


def transfer_violations(G: Sequence, result: TransferResult) -> list[tuple[int, int]]:
    """Pairs (n, m) where G(n) lies in t_m but F(n) does not."""
    out = []
    for n, (g, f) in enumerate(zip(G, result.F)):
        for m, t in enumerate(result.t):
            if Fraction(g) in t and f not in t:
                out.append((n, m))
    return out


# Orbit splitting of injective shrinking maps


@dataclass(frozen=True)
class ShrinkingMap:
    mapping: Mapping[frozenset, frozenset]

    def __post_init__(self):
        m = {frozenset(k): frozenset(v) for k, v in dict(self.mapping).items()}
        object.__setattr__(self, "mapping", m)
        if len(set(m.values())) != len(m):
            raise PreconditionError("shrinking map is not injective")
        for x, y in m.items():
            if not y < x:
                raise PreconditionError(f"{sorted(y)} is not a proper subset of {sorted(x)}")

    @property
    def family(self) -> frozenset:
        return frozenset(self.mapping) | frozenset(self.mapping.values())

    def chains(self) -> list[list[frozenset]]:
        """Maximal forward chains, one per point outside the range, heads sorted."""
        rng = set(self.mapping.values())
        heads = sorted((x for x in self.mapping if x not in rng), key=_set_key)
        out = []
        for h in heads:
            chain = [h]
            while chain[-1] in self.mapping:
                chain.append(self.mapping[chain[-1]])
            out.append(chain)
        return out


def _set_key(x: frozenset):
    return (-len(x), sorted(x))


@dataclass(frozen=True)
class OrbitSplit:
    f0: Mapping[frozenset, frozenset]
    f1: Mapping[frozenset, frozenset]
    domain: frozenset


def orbit_split(f: ShrinkingMap) -> OrbitSplit:
    """Along each chain y_0 -> y_1 -> ..., send y_j to y_{2j+2} (f0) and y_{2j+1} (f1).

    The domain is the set of y_j for which y_{2j+2} exists. f0 hits only even
    chain positions and f1 only odd ones, so the ranges are disjoint.
    """
    f0, f1 = {}, {}
    for chain in f.chains():
        for j in range(len(chain)):
            if 2 * j + 2 < len(chain):
                f0[chain[j]] = chain[2 * j + 2]
                f1[chain[j]] = chain[2 * j + 1]
    if len(set(f0.values())) != len(f0) or len(set(f1.values())) != len(f1):
        raise InternalInvariantError("orbit split produced a non-injective map")
    if set(f0.values()) & set(f1.values()):
        raise InternalInvariantError("orbit split produced overlapping ranges")
    for x in f0:
        if not (f0[x] < x and f1[x] < x):
            raise InternalInvariantError("orbit split produced a non-subset value")
    return OrbitSplit(f0, f1, frozenset(f0))


def ie_coloring(split: OrbitSplit, family: Iterable[frozenset]) -> dict[frozenset, frozenset]:
    """Unary coloring with chi(f0(x)) = chi(f1(x)); every other set gets its own color.

    Colors are the sets {f0(x), f1(x)} or {y}.
    """
    f0, f1 = split.f0, split.f1
    if len(set(f0.values())) != len(f0) or len(set(f1.values())) != len(f1):
        raise PreconditionError("f0 and f1 must be injective")
    if set(f0.values()) & set(f1.values()):
        raise PreconditionError("f0 and f1 must have disjoint ranges")
    chi = {frozenset(y): frozenset([frozenset(y)]) for y in family}
    for x in split.domain:
        col = frozenset([f0[x], f1[x]])
        chi[f0[x]] = col
        chi[f1[x]] = col
    return chi


def unary_bound(chi: Mapping) -> int:
    counts: dict = {}
    for col in chi.values():
        counts[col] = counts.get(col, 0) + 1
    return max(counts.values(), default=0)
