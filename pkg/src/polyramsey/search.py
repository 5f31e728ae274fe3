"""Exact search: maximum polychromatic / monochromatic sets, rainbow numbers, Ramsey witnesses."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Optional, Sequence, Union

from .coloring import PairColoring, pair_count
from .errors import PreconditionError, SearchCapError

log = logging.getLogger(__name__)

DEFAULT_CAP = 64


@dataclass(frozen=True)
class SearchResult:
    optimum: int
    witness: tuple[int, ...]
    nodes_explored: int
    exhaustive: bool
    all_optimal: Optional[tuple[tuple[int, ...], ...]] = None


class _Budget:
    def __init__(self, limit: Optional[int]):
        self.limit = limit
        self.nodes = 0

    def tick(self) -> bool:
        self.nodes += 1
        return self.limit is None or self.nodes <= self.limit


def _poly_shard(c: PairColoring, first: int, best_size: int, budget: _Budget,
                collect: bool) -> tuple[int, tuple[int, ...], list[tuple[int, ...]], bool]:
    """Best polychromatic set whose least point is ``first``; only sets beating best_size are reported
    (or tying it, when collecting every optimum)."""
    n = c.n
    color = c.color
    best = [best_size, (), []]
    complete = True

    def dfs(chosen, used, links, cands):
        nonlocal complete
        if not budget.tick():
            complete = False
            return
        size = len(chosen)
        if size > best[0] or (collect and size == best[0]):
            if size > best[0]:
                best[0], best[1], best[2] = size, tuple(chosen), []
            best[2].append(tuple(chosen))
        for idx, z in enumerate(cands):
            rest = cands[idx + 1:]
            limit = size + 1 + len(rest)
            if limit < best[0] or (limit == best[0] and not collect):
                break
            zl = links[z]
            new_used = used | zl
            new_links = {}
            survivors = []
            for w in rest:
                wl = links[w]
                zw = color(z, w)
                if zw in new_used or zw in wl or not zl.isdisjoint(wl):
                    continue
                new_links[w] = wl | {zw}
                survivors.append(w)
            chosen.append(z)
            dfs(chosen, new_used, new_links, survivors)
            chosen.pop()
            if not complete:
                return

    cands = list(range(first + 1, n))
    links = {w: frozenset([color(first, w)]) for w in cands}
    dfs([first], frozenset(), links, cands)
    return best[0], best[1], best[2], complete


def max_polychromatic(c: PairColoring, cap: int = DEFAULT_CAP, node_limit: Optional[int] = None,
                      all_optimal: bool = False, shards: Optional[Iterable[int]] = None) -> SearchResult:
    """Largest polychromatic subset, lexicographically least among the largest.

    Branch and bound over sets listed in increasing order, pruning with
    |X| + |candidates ∩ E(X)|. The search is split into shards by least
    point; ``shards`` restricts it to some of them (results merge by size,
    then lexicographically).
    """
    if c.n > cap:
        raise SearchCapError(f"universe {c.n} exceeds search cap {cap}; use rainbow_extract for large universes")
    if c.n == 0:
        return SearchResult(0, (), 1, True, ((),) if all_optimal else None)
    budget = _Budget(node_limit)
    best_size, best, optima = 0, (), []
    exhaustive = True
    order = sorted(set(shards)) if shards is not None else range(c.n)
    for first in order:
        if c.n - first < best_size:
            break
        size, wit, opts, done = _poly_shard(c, first, best_size, budget, all_optimal)
        if size > best_size:
            best_size, best, optima = size, wit, list(opts)
        elif all_optimal:
            optima.extend(opts)
        log.info("shard=%d nodes=%d best=%d", first, budget.nodes, best_size)
        if not done:
            exhaustive = False
            break
    if shards is not None:
        exhaustive = False
    return SearchResult(best_size, best, budget.nodes, exhaustive,
                        tuple(sorted(set(optima))) if all_optimal else None)


def max_monochromatic(c: PairColoring, cap: int = DEFAULT_CAP, node_limit: Optional[int] = None) -> SearchResult:
    """Largest monochromatic subset (sets of size <= 2 count), lexicographically least among the largest."""
    if c.n > cap:
        raise SearchCapError(f"universe {c.n} exceeds search cap {cap}")
    n = c.n
    if n <= 2:
        return SearchResult(n, tuple(range(n)), 1, True)
    budget = _Budget(node_limit)
    best = [2, (0, 1)]
    complete = True

    def dfs(chosen, col, cands):
        nonlocal complete
        if not budget.tick():
            complete = False
            return
        if len(chosen) > best[0]:
            best[0], best[1] = len(chosen), tuple(chosen)
        for idx, z in enumerate(cands):
            if len(chosen) + len(cands) - idx <= best[0]:
                break
            rest = [w for w in cands[idx + 1:] if c.color(z, w) == col]
            chosen.append(z)
            dfs(chosen, col, rest)
            chosen.pop()
            if not complete:
                return

    for a in range(n):
        for b in range(a + 1, n):
            if n - a <= best[0]:
                break
            col = c.color(a, b)
            cands = [w for w in range(b + 1, n) if c.color(a, w) == col and c.color(b, w) == col]
            dfs([a, b], col, cands)
            if not complete:
                return SearchResult(best[0], best[1], budget.nodes, False)
    return SearchResult(best[0], best[1], budget.nodes, True)


# Two-colorings and classical Ramsey witnesses


def ramsey_witness(colors: Union[PairColoring, Sequence[int]], m: int, n: Optional[int] = None) -> Optional[tuple[int, ...]]:
    """Lexicographically least monochromatic m-set, or None when there is none.

    ``colors`` is a PairColoring or a flat sequence of colors in lexicographic
    pair order (then ``n`` is inferred).
    """
    if isinstance(colors, PairColoring):
        n = colors.n
        flat = colors.colors
    else:
        flat = tuple(colors)
        if n is None:
            n = 0
            while pair_count(n) < len(flat):
                n += 1
        if pair_count(n) != len(flat):
            raise PreconditionError(f"{len(flat)} colors do not cover the pairs of any [n]")
    if m <= 1:
        return tuple(range(min(m, n))) if n >= m else None
    if n < m:
        return None
    row = [[0] * n for _ in range(n)]
    idx = 0
    for a in range(n):
        for b in range(a + 1, n):
            row[a][b] = row[b][a] = flat[idx]
            idx += 1

    def dfs(chosen, col, cands):
        if len(chosen) == m:
            return tuple(chosen)
        for i, z in enumerate(cands):
            if len(chosen) + len(cands) - i < m:
                return None
            rest = [w for w in cands[i + 1:] if row[z][w] == col]
            chosen.append(z)
            found = dfs(chosen, col, rest)
            chosen.pop()
            if found:
                return found
        return None

    for a in range(n):
        for b in range(a + 1, n):
            col = row[a][b]
            cands = [w for w in range(b + 1, n) if row[a][w] == col and row[b][w] == col]
            found = dfs([a, b], col, cands)
            if found:
                return found
    return None


def pentagon_coloring() -> PairColoring:
    """The 2-coloring of [5]^2 with the 5-cycle in color 0 and its complement in color 1."""
    return PairColoring.from_function(5, lambda a, b: 0 if (b - a) % 5 in (1, 4) else 1, 5)


# Canonical enumeration of bounded edge partitions


def colex_pos(a: int, b: int) -> int:
    if a > b:
        a, b = b, a
    return b * (b - 1) // 2 + a


@lru_cache(maxsize=None)
def _colex_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((a, b) for b in range(n) for a in range(b))


@dataclass(frozen=True)
class EdgePartition:
    """Pairs of [n] split into blocks of size <= k.

    ``enc[t]`` is the colex position of the first pair in the block of the pair at colex position t.
    """

    n: int
    k: int
    enc: tuple[int, ...]

    def __post_init__(self):
        if len(self.enc) != pair_count(self.n):
            raise PreconditionError("encoding does not cover all pairs")
        for t, lead in enumerate(self.enc):
            if lead > t or self.enc[lead] != lead:
                raise PreconditionError(f"position {t} has an invalid block leader {lead}")
        if self.enc and max(_block_sizes(self.enc).values()) > self.k:
            raise PreconditionError("a block exceeds the bound")

    @property
    def blocks(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        pairs = _colex_pairs(self.n)
        out: dict[int, list] = {}
        for t, lead in enumerate(self.enc):
            out.setdefault(lead, []).append(tuple(sorted(pairs[t])))
        return tuple(tuple(sorted(v)) for _, v in sorted(out.items()))

    def to_coloring(self) -> PairColoring:
        return PairColoring.from_function(self.n, lambda a, b: self.enc[colex_pos(a, b)], self.k)

    @classmethod
    def from_coloring(cls, c: PairColoring, k: Optional[int] = None) -> "EdgePartition":
        first: dict[int, int] = {}
        enc = []
        for t, (a, b) in enumerate(_colex_pairs(c.n)):
            enc.append(first.setdefault(c.color(a, b), t))
        return cls(c.n, k if k is not None else c.declared_bound, tuple(enc))


def _block_sizes(enc: Sequence[int]) -> dict[int, int]:
    sizes: dict[int, int] = {}
    for lead in enc:
        sizes[lead] = sizes.get(lead, 0) + 1
    return sizes


def canonical_check(enc: Sequence[int], n: int) -> tuple[bool, int]:
    """Is ``enc`` lexicographically least over all relabelings of [n]? Also returns the automorphism count
    (meaningful only when canonical)."""
    pairs = _colex_pairs(n)
    blocks: dict[int, list[int]] = {}
    for t, lead in enumerate(enc):
        blocks.setdefault(lead, []).append(t)
    mates = [blocks[lead] for lead in enc]
    src = [-1] * n
    tgt = [-1] * n
    auts = 0

    def dfs(j: int) -> bool:
        nonlocal auts
        if j == n:
            auts += 1
            return True
        base = j * (j - 1) // 2
        for s in range(n):
            if tgt[s] >= 0:
                continue
            tgt[s] = j
            src[j] = s
            verdict = 0  # -1 smaller, 1 larger, 0 equal so far
            for i in range(j):
                t = base + i
                e = colex_pos(src[i], s)
                best = t
                for other in mates[e]:
                    a, b = pairs[other]
                    ta, tb = tgt[a], tgt[b]
                    if ta >= 0 and tb >= 0:
                        p = colex_pos(ta, tb)
                        if p < best:
                            best = p
                if best < enc[t]:
                    verdict = -1
                    break
                if best > enc[t]:
                    verdict = 1
                    break
            if verdict == -1 or (verdict == 0 and not dfs(j + 1)):
                tgt[s] = -1
                src[j] = -1
                return False
            tgt[s] = -1
            src[j] = -1
        return True

    ok = dfs(0)
    return ok, auts


def canonical_form(p: EdgePartition) -> EdgePartition:
    """Least relabeled encoding, by brute force over all permutations (for small n and cross-checks)."""
    from itertools import permutations

    pairs = _colex_pairs(p.n)
    best = None
    for perm in permutations(range(p.n)):
        first: dict[int, int] = {}
        image = [0] * len(pairs)
        for t, (a, b) in enumerate(pairs):
            image[colex_pos(perm[a], perm[b])] = p.enc[t]
        enc = tuple(first.setdefault(lead, t) for t, lead in enumerate(image))
        if best is None or enc < best:
            best = enc
    return EdgePartition(p.n, p.k, best if best is not None else ())


def _extensions(enc: tuple[int, ...], n: int, k: int) -> list[tuple[int, ...]]:
    """All encodings on [n+1] that restrict to ``enc`` on [n]."""
    m = len(enc)
    sizes = _block_sizes(enc)
    out = []
    cur = list(enc)

    def rec(i: int):
        if i == n:
            out.append(tuple(cur))
            return
        t = m + i
        sizes[t] = 1
        cur.append(t)
        rec(i + 1)
        cur.pop()
        del sizes[t]
        for lead in list(sizes):
            if sizes[lead] < k:
                sizes[lead] += 1
                cur.append(lead)
                rec(i + 1)
                cur.pop()
                sizes[lead] -= 1

    rec(0)
    return out


@lru_cache(maxsize=None)
def canonical_partitions(n: int, k: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Canonical encodings of all k-bounded edge partitions of [n], with automorphism counts.

    Orderly generation: the restriction of a canonical encoding to [n-1] is
    canonical, so every class arises by extending a smaller representative.
    """
    if n <= 1:
        return (((), 1),)
    out = []
    for enc, _ in canonical_partitions(n - 1, k):
        for cand in _extensions(enc, n - 1, k):
            ok, auts = canonical_check(cand, n)
            if ok:
                out.append((cand, auts))
    return tuple(out)


def count_bounded_colorings(n: int, k: int) -> int:
    """Number of labelled k-bounded partitions of the C(n,2) pairs (set partitions with blocks <= k)."""
    m = pair_count(n)
    t = [1] + [0] * m
    for j in range(1, m + 1):
        t[j] = sum(comb(j - 1, s - 1) * t[j - s] for s in range(1, min(k, j) + 1))
    return t[m]


def labelled_total(n: int, k: int) -> int:
    return sum(factorial(n) // auts for _, auts in canonical_partitions(n, k))


def _has_poly_set_through(enc: Sequence[int], n: int, m: int, v: int) -> bool:
    """Does some polychromatic m-set of [n] contain v? Colors are encoding entries."""
    if m <= 1:
        return n >= 1
    others = [x for x in range(n) if x != v]

    def col(a, b):
        return enc[colex_pos(a, b)]

    def dfs(chosen, used, cands, need):
        if need == 0:
            return True
        for i, z in enumerate(cands):
            if len(cands) - i < need:
                return False
            zc = [col(x, z) for x in chosen]
            if len(set(zc)) != len(zc) or used.intersection(zc):
                continue
            if dfs(chosen + [z], used | set(zc), cands[i + 1:], need - 1):
                return True
        return False

    return dfs([v], set(), others, m - 1)


@dataclass(frozen=True)
class RainbowNumberResult:
    k: int
    m: int
    value: Optional[int]  # None when the cap is exceeded
    n_max: int
    # canonical classes with no polychromatic m-set, per universe size 1..
    bad_counts: tuple[int, ...]
    certificate: Optional[PairColoring]
    certificate_optimum: Optional[int]

    @property
    def exceeds_cap(self) -> bool:
        return self.value is None


def rainbow_number(k: int, m: int, n_max: int) -> RainbowNumberResult:
    """Least N <= n_max such that every k-bounded coloring of [N]^2 has a polychromatic m-set.

    Colorings with no polychromatic m-set are closed under restriction, so the
    canonical ones on [N] are grown from the canonical ones on [N-1]; only
    m-sets through the new point need testing. The certificate is the first
    bad representative at the largest size that has one, confirmed with
    max_polychromatic.
    """
    if k < 2 or m < 2:
        raise PreconditionError("rainbow_number needs k >= 2 and m >= 2")
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    bad = [()]  # [1] has no m-set at all
    counts = [1]
    for n in range(2, n_max + 1):
        nxt = []
        for enc in bad:
            for cand in _extensions(enc, n - 1, k):
                if _has_poly_set_through(cand, n, m, n - 1):
                    continue
                ok, _ = canonical_check(cand, n)
                if ok:
                    nxt.append(cand)
        log.info("rainbow k=%d m=%d n=%d bad_classes=%d", k, m, n, len(nxt))
        if not nxt:
            cert = EdgePartition(n - 1, k, bad[0]).to_coloring() if n - 1 >= 1 else None
            opt = max_polychromatic(cert).optimum if cert is not None else None
            return RainbowNumberResult(k, m, n, n_max, tuple(counts), cert, opt)
        bad = nxt
        counts.append(len(nxt))
    cert = EdgePartition(n_max, k, bad[0]).to_coloring()
    return RainbowNumberResult(k, m, None, n_max, tuple(counts), cert, max_polychromatic(cert).optimum)


# Weak selecters


@dataclass(frozen=True)
class WeakSelection:
    Y: frozenset
    stages: tuple[tuple[int, ...], ...]
    failed_stage: Optional[int] = None

    @property
    def complete(self) -> bool:
        return self.failed_stage is None


def _norm_pair(p) -> tuple[int, int]:
    a, b = p
    return (a, b) if a < b else (b, a)


def least_clique(edges: set, n: int, size: int) -> Optional[tuple[int, ...]]:
    """Lexicographically least clique of the given size in the graph on [n]."""
    if size <= 1:
        return tuple(range(min(size, n))) if n >= size else None
    adj = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)

    def dfs(chosen, cands):
        if len(chosen) == size:
            return tuple(chosen)
        for i, z in enumerate(cands):
            if len(chosen) + len(cands) - i < size:
                return None
            found = dfs(chosen + [z], [w for w in cands[i + 1:] if w in adj[z]])
            if found:
                return found
        return None

    return dfs([], list(range(n)))


def weak_selecter(X: Iterable, P: Sequence[Iterable], sizes: Sequence[int], n: int) -> WeakSelection:
    """Stage by stage, take the least B with [B]^2 inside X minus the blocks already touched.

    Pairs in no block of P count as singleton blocks. On failure the partial
    selection is returned with the failing stage index.
    """
    X = {_norm_pair(p) for p in X}
    for a, b in X:
        if not (0 <= a < b < n):
            raise PreconditionError(f"pair ({a}, {b}) is not a pair of [{n}]")
    block_of: dict[tuple[int, int], int] = {}
    blocks = []
    for i, blk in enumerate(P):
        blk = {_norm_pair(p) for p in blk}
        for p in blk:
            if p in block_of:
                raise PreconditionError(f"pair {p} lies in two blocks")
            block_of[p] = i
        blocks.append(blk)
    Y: set = set()
    touched: set = set()
    stages = []
    for stage, size in enumerate(sizes):
        Q = set()
        for i in touched:
            Q |= blocks[i]
        Q |= {p for p in Y if p not in block_of}
        B = least_clique(X - Q, n, size)
        if B is None:
            return WeakSelection(frozenset(Y), tuple(stages), stage)
        new = set(combinations(B, 2))
        Y |= new
        touched |= {block_of[p] for p in new if p in block_of}
        stages.append(B)
    return WeakSelection(frozenset(Y), tuple(stages))


def labelled_colorings(n: int, k: int):
    """Every k-bounded coloring of [n]^2 (colors are block leaders in lexicographic pair order)."""
    total = pair_count(n)
    colors: list[int] = []
    sizes: dict[int, int] = {}

    def rec(t: int):
        if t == total:
            yield PairColoring(n, tuple(colors), k)
            return
        sizes[t] = 1
        colors.append(t)
        yield from rec(t + 1)
        colors.pop()
        del sizes[t]
        for lead in list(sizes):
            if sizes[lead] < k:
                sizes[lead] += 1
                colors.append(lead)
                yield from rec(t + 1)
                colors.pop()
                sizes[lead] -= 1

    yield from rec(0)


def canonical_colorings(n: int, k: int):
    """One PairColoring per isomorphism class of k-bounded colorings of [n]^2."""
    for enc, _ in canonical_partitions(n, k):
        yield EdgePartition(n, k, enc).to_coloring()
