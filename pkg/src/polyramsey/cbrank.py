"""Cantor-Bendixson rank of self-similar finite-rank subsets of Q.

A tree node is the tuple of its child patterns; a leaf is ``()``. A node
stands for a point plus, for every child pattern, infinitely many disjoint
copies of that pattern converging to the point from the right. A forest
(the trees placed in disjoint intervals) is a SetDescription.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import InternalInvariantError, MalformedInputError, PreconditionError

Node = tuple


@dataclass(frozen=True)
class SetDescription:
    trees: tuple[Node, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "SetDescription":
        text = "".join(text.split())
        pos = 0

        def node() -> Node:
            nonlocal pos
            if pos >= len(text) or text[pos] != "[":
                raise MalformedInputError(f"expected '[' at offset {pos} in {text!r}")
            pos += 1
            kids = []
            while pos < len(text) and text[pos] == "[":
                kids.append(node())
            if pos >= len(text) or text[pos] != "]":
                raise MalformedInputError(f"expected ']' at offset {pos} in {text!r}")
            pos += 1
            return tuple(kids)

        trees = []
        while pos < len(text):
            trees.append(node())
        return cls(tuple(trees))

    def __str__(self) -> str:
        return "".join(_show(t) for t in self.trees)

    @property
    def size(self) -> int:
        return sum(_count(t) for t in self.trees)

    @property
    def empty(self) -> bool:
        return not self.trees


def _show(t: Node) -> str:
    return "[" + "".join(_show(c) for c in t) + "]"


def _count(t: Node) -> int:
    return 1 + sum(_count(c) for c in t)


def leaf() -> SetDescription:
    return SetDescription(((),))


def chain(depth: int) -> Node:
    """Unary chain: a leaf for depth 0, otherwise a node whose single pattern is chain(depth - 1)."""
    t: Node = ()
    for _ in range(depth):
        t = (t,)
    return t


def _derive(t: Node) -> Optional[Node]:
    if not t:
        return None
    kids = tuple(d for d in (_derive(c) for c in t) if d is not None)
    return kids


def derivative(d: SetDescription) -> SetDescription:
    """Remove isolated points: leaves vanish and every child pattern is derived in turn."""
    return SetDescription(tuple(x for x in (_derive(t) for t in d.trees) if x is not None))


def _rank(t: Node) -> int:
    return 1 + max((_rank(c) for c in t), default=0)


def structural_rank(d: SetDescription) -> int:
    return max((_rank(t) for t in d.trees), default=0)


def iterated_rank(d: SetDescription) -> int:
    k = 0
    while not d.empty:
        d = derivative(d)
        k += 1
    return k


def cb_rank(d: SetDescription) -> int:
    """Least k with L^k empty; the structural and iterated computations must agree."""
    s = structural_rank(d)
    i = iterated_rank(d)
    if s != i:
        raise InternalInvariantError(f"rank mismatch on {d}: structural {s}, iterated {i}")
    return s


def disjoint_union(d1: SetDescription, d2: SetDescription) -> SetDescription:
    return SetDescription(d1.trees + d2.trees)


def _trees(n: int) -> Iterator[Node]:
    """Ordered trees with exactly n nodes."""
    if n < 1:
        return
    for kids in _forests(n - 1):
        yield kids


def _forests(n: int) -> Iterator[tuple[Node, ...]]:
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for t in _trees(first):
            for rest in _forests(n - first):
                yield (t,) + rest


def all_descriptions(max_size: int) -> Iterator[SetDescription]:
    """Every forest of ordered trees with at most ``max_size`` nodes."""
    for n in range(max_size + 1):
        for f in _forests(n):
            yield SetDescription(f)


def random_description(rng, max_nodes: int, max_trees: int = 3) -> SetDescription:
    """Random forest built by attaching each new node under a random existing one (or as a new tree)."""
    total = int(rng.integers(1, max_nodes + 1))
    roots: list[list] = []
    nodes: list[list] = []
    for _ in range(total):
        new: list = []
        if not nodes or (len(roots) < max_trees and rng.random() < 0.15):
            roots.append(new)
        else:
            nodes[int(rng.integers(len(nodes)))].append(new)
        nodes.append(new)

    def freeze(x: list) -> Node:
        return tuple(freeze(c) for c in x)

    return SetDescription(tuple(freeze(r) for r in roots))


def materialize(d: SetDescription, width: int, depth_res: int = 64) -> list[Fraction]:
    """Finite truncation: each infinite family of copies is cut to ``width`` copies.

    Tree i sits at point i with room [i, i+1). Under a node at x with room L,
    copy s of pattern j fills slot q = s*r + j, i.e. [x + L/2^(q+2), x + L/2^(q+1)),
    with its own point at the left end and room L/2^(q+3).
    """
    if width < 1:
        raise PreconditionError("width must be >= 1")
    out: list[Fraction] = []

    def place(t: Node, x: Fraction, room: Fraction, level: int):
        out.append(x)
        r = len(t)
        for s in range(width):
            for j, child in enumerate(t):
                q = s * r + j
                exp = level + q + 3
                if exp > depth_res:
                    raise PreconditionError(f"dyadic precision 2^-{depth_res} exhausted")
                place(child, x + room / (1 << (q + 2)), room / (1 << (q + 3)), exp)

    for i, t in enumerate(d.trees):
        place(t, Fraction(i), Fraction(1), 0)
    if len(set(out)) != len(out):
        raise InternalInvariantError("materialized points collide")
    return sorted(out)


def has_accumulation(d: SetDescription) -> bool:
    """Some point is a limit of others: exactly when some node has a child pattern."""
    return any(t for t in d.trees)


# Level pigeonhole on labeled trees


@dataclass(frozen=True)
class LabeledTree:
    """Rooted tree by levels: ``parents[d][i]`` is the parent (in level d-1) of node i of level d."""

    labels: tuple[str, ...]
    parents: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.labels) != len(self.parents) or not self.labels:
            raise MalformedInputError("one label and one parent list per level are required")
        if any(x not in ("A", "B") for x in self.labels):
            raise MalformedInputError("labels must be 'A' or 'B'")
        if len(self.parents[0]) != 1:
            raise MalformedInputError("level 0 must hold exactly the root")
        for d in range(1, len(self.parents)):
            width = len(self.parents[d - 1])
            if any(not 0 <= p < width for p in self.parents[d]):
                raise MalformedInputError(f"bad parent index at level {d}")
            if set(self.parents[d]) != set(range(width)):
                raise MalformedInputError(f"a node of level {d - 1} has no child; leaves must share one depth")

    @property
    def height(self) -> int:
        return len(self.labels) - 1

    def width(self, level: int) -> int:
        return len(self.parents[level])

    @classmethod
    def full(cls, labels: Sequence[str], branching: int = 2) -> "LabeledTree":
        parents = [(0,)]
        for d in range(1, len(labels)):
            parents.append(tuple(i // branching for i in range(len(parents[-1]) * branching)))
        return cls(tuple(labels), tuple(parents))


def level_extract(t: LabeledTree, k: int, l: int) -> tuple[str, LabeledTree]:
    """Take k+1 A-levels if there are that many, otherwise l+1 B-levels, and reconnect ancestry.

    The result is rooted at the leftmost node of the highest selected level;
    each kept node's parent is its nearest ancestor on a selected level.
    """
    if t.height != k + l:
        raise PreconditionError(f"tree height {t.height} differs from k + l = {k + l}")
    a_levels = [d for d, x in enumerate(t.labels) if x == "A"]
    b_levels = [d for d, x in enumerate(t.labels) if x == "B"]
    if len(a_levels) >= k + 1:
        label, levels = "A", a_levels[: k + 1]
    elif len(b_levels) >= l + 1:
        label, levels = "B", b_levels[: l + 1]
    else:
        raise InternalInvariantError("level pigeonhole failed")
    top = levels[0]
    index = {top: {0: 0}}
    new_parents = [(0,)]
    for prev, d in zip(levels, levels[1:]):
        members = []
        par = []
        for i in range(t.width(d)):
            j = i
            for lv in range(d, prev, -1):
                j = t.parents[lv][j]
            if j in index[prev]:
                members.append(i)
                par.append(index[prev][j])
        index[d] = {i: pos for pos, i in enumerate(members)}
        new_parents.append(tuple(par))
    return label, LabeledTree(tuple(label for _ in levels), tuple(new_parents))
