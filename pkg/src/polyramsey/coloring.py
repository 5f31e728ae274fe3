"""Bounded pair colorings of a finite universe {0, ..., n-1}.

Pairs are always written ``(a, b)`` with ``a < b`` and are stored in
lexicographic order, so a coloring is a flat tuple of color identifiers.
Color identifiers are opaque naturals; only equality is ever used.
"""

from __future__ import annotations

import enum
import hashlib
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Optional

from .errors import MalformedInputError, PreconditionError

Pair = tuple[int, int]


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, a: int, b: int) -> int:
    """Lexicographic rank of the pair {a, b} among the pairs of [n]."""
    if a > b:
        a, b = b, a
    return a * (2 * n - a - 1) // 2 + (b - a - 1)


def lex_pairs(n: int) -> Iterator[Pair]:
    return combinations(range(n), 2)


@dataclass(frozen=True)
class PairColoring:
    n: int
    colors: tuple[int, ...]
    declared_bound: int

    def __post_init__(self):
        if self.n < 0:
            raise MalformedInputError(f"universe size must be >= 0, got {self.n}")
        if self.declared_bound < 1:
            raise MalformedInputError(f"declared bound must be >= 1, got {self.declared_bound}")
        if len(self.colors) != pair_count(self.n):
            raise MalformedInputError(
                f"expected {pair_count(self.n)} pair colors for n={self.n}, got {len(self.colors)}"
            )
        for col in self.colors:
            if not isinstance(col, int) or isinstance(col, bool) or col < 0:
                raise MalformedInputError(f"color identifiers must be naturals, got {col!r}")
        if self.colors:
            worst, size = Counter(self.colors).most_common(1)[0]
            if size > self.declared_bound:
                raise MalformedInputError(
                    f"color {worst} is used {size} times, declared bound is {self.declared_bound}"
                )

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, int], int], declared_bound: int) -> "PairColoring":
        return cls(n, tuple(fn(a, b) for a, b in lex_pairs(n)), declared_bound)

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[Pair, int], declared_bound: int) -> "PairColoring":
        colors = []
        for a, b in lex_pairs(n):
            if (a, b) in mapping:
                colors.append(mapping[(a, b)])
            elif (b, a) in mapping:
                colors.append(mapping[(b, a)])
            else:
                raise MalformedInputError(f"pair ({a}, {b}) has no color")
        return cls(n, tuple(colors), declared_bound)

    @classmethod
    def all_distinct(cls, n: int) -> "PairColoring":
        return cls(n, tuple(range(pair_count(n))), 1)

    @classmethod
    def constant(cls, n: int, color: int = 0) -> "PairColoring":
        return cls(n, (color,) * pair_count(n), max(1, pair_count(n)))

    @classmethod
    def with_identifications(cls, n: int, groups: Iterable[Iterable[Pair]]) -> "PairColoring":
        """All-distinct coloring except that each group of pairs shares one color."""
        colors = list(range(pair_count(n)))
        bound = 1
        for group in groups:
            group = [pair_index(n, a, b) for a, b in group]
            bound = max(bound, len(group))
            for idx in group:
                colors[idx] = colors[group[0]]
        return cls(n, tuple(colors), bound)

    def color(self, a: int, b: int) -> int:
        if a == b or not (0 <= a < self.n and 0 <= b < self.n):
            raise PreconditionError(f"({a}, {b}) is not a pair of [{self.n}]")
        if a > b:
            a, b = b, a
        return self.colors[a * (2 * self.n - a - 1) // 2 + (b - a - 1)]

    def pairs(self) -> Iterator[Pair]:
        return lex_pairs(self.n)

    def items(self) -> Iterator[tuple[Pair, int]]:
        return zip(lex_pairs(self.n), self.colors)

    @cached_property
    def fibers(self) -> dict[int, tuple[Pair, ...]]:
        """Color -> its pairs, each fiber listed in lexicographic order."""
        out: dict[int, list[Pair]] = {}
        for p, col in self.items():
            out.setdefault(col, []).append(p)
        return {col: tuple(ps) for col, ps in out.items()}

    @cached_property
    def coloring_id(self) -> str:
        h = hashlib.sha256(f"{self.n}|{self.declared_bound}|{','.join(map(str, self.colors))}".encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class ImplicitColoring:
    """A coloring given by a function, for universes too large to tabulate.

    Boundedness is guaranteed by whoever builds ``fn`` and is taken on trust.
    """

    n: int
    fn: Callable[[int, int], int] = field(repr=False, compare=False)
    declared_bound: int
    name: str

    def color(self, a: int, b: int) -> int:
        if a == b or not (0 <= a < self.n and 0 <= b < self.n):
            raise PreconditionError(f"({a}, {b}) is not a pair of [{self.n}]")
        if a > b:
            a, b = b, a
        return self.fn(a, b)

    @property
    def coloring_id(self) -> str:
        return hashlib.sha256(f"{self.name}|{self.n}".encode()).hexdigest()[:16]

    def materialize(self) -> PairColoring:
        return PairColoring.from_function(self.n, self.fn, self.declared_bound)


def bound_of(c: PairColoring) -> int:
    """Largest fiber size, i.e. the least k for which c is k-bounded (0 when there are no pairs)."""
    if isinstance(c, ImplicitColoring):
        return c.declared_bound if c.n >= 2 else 0
    if not c.colors:
        return 0
    return max(Counter(c.colors).values())


class Verdict(enum.Enum):
    POLYCHROMATIC = "polychromatic"
    MONOCHROMATIC = "monochromatic"
    NEITHER = "neither"


@dataclass(frozen=True)
class SubsetStatus:
    verdict: Verdict
    color: Optional[int] = None
    witness: Optional[tuple[Pair, ...]] = None
    # sets of size <= 2 are vacuously monochromatic as well
    degenerate: bool = False

    @property
    def polychromatic(self) -> bool:
        return self.verdict is Verdict.POLYCHROMATIC

    @property
    def monochromatic(self) -> bool:
        return self.verdict is Verdict.MONOCHROMATIC or self.degenerate


def _check_points(c: PairColoring, points: Iterable[int]) -> list[int]:
    pts = sorted(set(points))
    for x in pts:
        if not 0 <= x < c.n:
            raise PreconditionError(f"point {x} outside universe [0, {c.n})")
    return pts


def classify_subset(c: PairColoring, points: Iterable[int]) -> SubsetStatus:
    pts = _check_points(c, points)
    if len(pts) <= 2:
        col = c.color(pts[0], pts[1]) if len(pts) == 2 else None
        return SubsetStatus(Verdict.POLYCHROMATIC, color=col, degenerate=True)
    seen: dict[int, Pair] = {}
    repeated = None
    first = None
    differing = None
    for a, b in combinations(pts, 2):
        col = c.color(a, b)
        if first is None:
            first = ((a, b), col)
        elif differing is None and col != first[1]:
            differing = (first[0], (a, b))
        if col in seen:
            if repeated is None:
                repeated = (seen[col], (a, b))
        else:
            seen[col] = (a, b)
        if repeated is not None and differing is not None:
            break
    if repeated is None:
        return SubsetStatus(Verdict.POLYCHROMATIC)
    if differing is None:
        return SubsetStatus(Verdict.MONOCHROMATIC, color=first[1])
    return SubsetStatus(Verdict.NEITHER, witness=repeated + differing)


def is_polychromatic(c: PairColoring, points: Iterable[int]) -> bool:
    seen = set()
    pts = sorted(points)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            col = c.color(a, b)
            if col in seen:
                return False
            seen.add(col)
    return True


def normality_counterexample(c: PairColoring, points: Iterable[int]) -> Optional[tuple[Pair, Pair]]:
    """Two equal-colored pairs of ``points`` with different top elements, if any."""
    pts = _check_points(c, points)
    first: dict[int, Pair] = {}
    for j, top in enumerate(pts):
        for bottom in pts[:j]:
            col = c.color(bottom, top)
            other = first.get(col)
            if other is None:
                first[col] = (bottom, top)
            elif other[1] != top:
                return other, (bottom, top)
    return None


def is_normal(c: PairColoring, points: Iterable[int]) -> bool:
    return normality_counterexample(c, points) is None


@dataclass(frozen=True)
class DualColoring:
    base: PairColoring
    index: tuple[int, ...] = field(repr=False)

    def __getitem__(self, pair: Pair) -> int:
        return self.index[pair_index(self.base.n, *pair)]

    def as_coloring(self) -> PairColoring:
        return PairColoring(self.base.n, self.index, max(1, pair_count(self.base.n)))


def galvin_dual(c: PairColoring) -> DualColoring:
    """Replace each pair's color by its rank inside its (lexicographically ordered) fiber."""
    seen: Counter = Counter()
    index = []
    for col in c.colors:
        index.append(seen[col])
        seen[col] += 1
    if seen and max(seen.values()) > c.declared_bound:
        raise MalformedInputError("coloring exceeds its declared bound")
    return DualColoring(c, tuple(index))


def k_bounded_decompose(c: PairColoring) -> list[PairColoring]:
    """Split a k-bounded coloring into C(k, 2) colorings, each 2-bounded.

    The coloring for slots (i, j) identifies the i-th and j-th members of every
    fiber and keeps all other pairs distinct. A set polychromatic for every
    output is polychromatic for ``c``.
    """
    k = bound_of(c)
    if k < 2:
        return []
    fibers = [[pair_index(c.n, *p) for p in ps] for ps in c.fibers.values()]
    out = []
    for i, j in combinations(range(k), 2):
        colors = list(range(len(c.colors)))
        for members in fibers:
            if j < len(members):
                colors[members[j]] = members[i]
        out.append(PairColoring(c.n, tuple(colors), 2))
    return out

