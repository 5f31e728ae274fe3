"""Unary colorings on finite windows of the naturals, and the slalom transformations.

"Eventually" statements become (cutoff, window) pairs. Every check reports
the sub-window on which its verdict is exact.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import MalformedInputError, PreconditionError


@dataclass(frozen=True)
class FiniteFunction:
    table: tuple[int, ...]

    def __post_init__(self):
        t = tuple(self.table)
        for v in t:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise MalformedInputError(f"function values must be naturals, got {v!r}")
        object.__setattr__(self, "table", t)

    def __len__(self) -> int:
        return len(self.table)

    def __call__(self, n: int) -> int:
        return self.table[n]

    @cached_property
    def max_fiber(self) -> int:
        return max(Counter(self.table).values(), default=0)

    @property
    def two_to_one(self) -> bool:
        return self.max_fiber <= 2

    @cached_property
    def strictly_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.table, self.table[1:]))

    def finite_to_one(self, fiber_bound: Optional[int] = None) -> bool:
        # every function on a finite window is finite-to-one; a bound makes the test meaningful
        return fiber_bound is None or self.max_fiber <= fiber_bound


@dataclass(frozen=True)
class Slalom:
    table: tuple[frozenset, ...]
    width: tuple[int, ...]

    def __post_init__(self):
        t = tuple(frozenset(s) for s in self.table)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "width", tuple(self.width))
        if len(self.width) != len(t):
            raise MalformedInputError("width bound must cover the slalom's domain")
        for n, (s, h) in enumerate(zip(t, self.width)):
            if len(s) > h:
                raise MalformedInputError(f"|phi({n})| = {len(s)} exceeds width {h}")

    @classmethod
    def tight(cls, table: Sequence[Iterable[int]]) -> "Slalom":
        sets = [frozenset(s) for s in table]
        return cls(tuple(sets), tuple(len(s) for s in sets))

    def __len__(self) -> int:
        return len(self.table)

    def __call__(self, n: int) -> frozenset:
        return self.table[n]


class Status(enum.Enum):
    CONSTANT = "constant"
    INJECTIVE = "injective"
    NEITHER = "neither"
    BOTH = "both"


def witness_status(f: FiniteFunction, X: Iterable[int]) -> Status:
    vals = [f(x) for x in sorted(set(X))]
    if len(vals) <= 1:
        return Status.BOTH
    distinct = len(set(vals))
    if distinct == 1:
        return Status.CONSTANT
    if distinct == len(vals):
        return Status.INJECTIVE
    return Status.NEITHER


def unary_dual(f: FiniteFunction) -> FiniteFunction:
    """Rank of each point inside its fiber; zero on X forces f injective on X."""
    if f.max_fiber > 2:
        raise PreconditionError(f"a fiber has {f.max_fiber} points; the unary dual needs fibers <= 2")
    seen: Counter = Counter()
    out = []
    for v in f.table:
        out.append(seen[v])
        seen[v] += 1
    return FiniteFunction(tuple(out))


def interval_collapse(f: FiniteFunction) -> FiniteFunction:
    """g(x) = n on [f(2n), f(2n+2)), and 0 below f(0); the domain stops at f(2M) for the largest 2M in f's window."""
    if not f.strictly_increasing:
        raise PreconditionError("f must be strictly increasing")
    M = (len(f) - 1) // 2
    if M < 1:
        raise PreconditionError("window too short: need f(0), f(1), f(2) to realize one interval")
    out = [0] * f(0)
    for n in range(M):
        out.extend([n] * (f(2 * n + 2) - f(2 * n)))
    return FiniteFunction(tuple(out))


def enumerate_set(X: Iterable[int]) -> list[int]:
    """e_X: the increasing enumeration of X."""
    return sorted(set(X))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    valid: tuple[int, int]  # half-open index range on which the verdict is exact
    counterexample: Optional[tuple] = None


def domination_check(f: FiniteFunction, X: Iterable[int], cutoff: int) -> Verdict:
    """If g = interval_collapse(f) is injective on X past ``cutoff``, then e_X(n) >= f(2(n - c))
    for n > c, c = |X below cutoff|. Vacuously true when the hypothesis fails."""
    g = interval_collapse(f)
    e = [x for x in enumerate_set(X) if x < len(g)]
    tail = [x for x in e if x >= cutoff]
    if len({g(x) for x in tail}) != len(tail):
        return Verdict(True, (0, 0))
    c = len(e) - len(tail)
    hi = min(len(e), c + (len(f) - 1) // 2 + 1)
    for n in range(c + 1, hi):
        if e[n] < f(2 * (n - c)):
            return Verdict(False, (c + 1, hi), (n, e[n], f(2 * (n - c))))
    return Verdict(True, (c + 1, hi))


def orbit_sequence(f: FiniteFunction, cap: int) -> list[int]:
    """0, f(0), f(f(0)), ... for at most ``cap`` iterates, stopping at a repeat or on leaving the window."""
    out = [0] if len(f) > 0 else []
    seen = set(out)
    x = 0
    for _ in range(cap):
        if x >= len(f):
            break
        y = f(x)
        if y in seen or y >= len(f):
            break
        out.append(y)
        seen.add(y)
        x = y
    return out


@dataclass(frozen=True)
class Threshold:
    h: FiniteFunction
    valid: int  # h(n) is exact for n < valid


def hg_threshold(g: FiniteFunction) -> Threshold:
    """h(n) = 1 + last l in the window with g(l) among g(0..n).

    Inside the window l >= h(n) implies g(l) is new. Once a recurrence reaches
    the last index of the window the true value may lie beyond it, so h is
    reported valid only before that point.
    """
    W = len(g)
    last: dict[int, int] = {}
    for l, v in enumerate(g.table):
        last[v] = l
    out = []
    valid = None
    cur = 0
    for n in range(W):
        cur = max(cur, last[g(n)] + 1)
        out.append(cur)
        if valid is None and cur > W - 1:
            valid = n
    return Threshold(FiniteFunction(tuple(out)), W if valid is None else valid)


@dataclass(frozen=True)
class Refinement:
    X: tuple[int, ...]
    g: FiniteFunction
    fallback: bool = False


def increasing_refine(f: FiniteFunction, fiber_bound: Optional[int] = None) -> Refinement:
    """Greedy leftmost X with f strictly increasing along X, and g_f(n) = f(x_n).

    With a fiber bound that f exceeds, f does not count as finite-to-one and
    the identity is returned instead, flagged.
    """
    if not f.finite_to_one(fiber_bound):
        return Refinement(tuple(range(len(f))), FiniteFunction(tuple(range(len(f)))), True)
    X = []
    for i, v in enumerate(f.table):
        if not X or v > f(X[-1]):
            X.append(i)
    return Refinement(tuple(X), FiniteFunction(tuple(f(x) for x in X)))


def psi_of(phi: Slalom) -> Slalom:
    acc: set = set()
    out = []
    for n, s in enumerate(phi.table):
        acc |= s
        acc.add(n)
        out.append(frozenset(acc))
    return Slalom.tight(out)


def partner_map(g: FiniteFunction) -> FiniteFunction:
    if g.max_fiber > 2:
        raise PreconditionError(f"a fiber has {g.max_fiber} points; partners need fibers <= 2")
    where: dict[int, list[int]] = {}
    for i, v in enumerate(g.table):
        where.setdefault(v, []).append(i)
    out = []
    for i, v in enumerate(g.table):
        pair = where[v]
        out.append(pair[1] if len(pair) == 2 and pair[0] == i else pair[0])
    return FiniteFunction(tuple(out))


def slalom_of_two_to_one(g: FiniteFunction) -> Slalom:
    """phi_g(n) = {h(0), ..., h(n)} with h the partner map (h(n) = n without a partner)."""
    h = partner_map(g)
    acc: set = set()
    out = []
    for n in range(len(g)):
        acc.add(h(n))
        out.append(frozenset(acc))
    return Slalom(tuple(out), tuple(n + 1 for n in range(len(g))))


def evade_check(f: FiniteFunction, phi: Slalom, start: int) -> bool:
    W = min(len(f), len(phi))
    return all(f(n) not in phi(n) for n in range(start, W))


def evasion_start(f: FiniteFunction, phi: Slalom) -> int:
    """Least N with f(n) outside phi(n) for every n >= N in the shared window."""
    W = min(len(f), len(phi))
    N = 0
    for n in range(W):
        if f(n) in phi(n):
            N = n + 1
    return N


def massage_check(f: FiniteFunction, phi: Slalom, start: int) -> Verdict:
    """If f avoids psi_phi from ``start`` on, then g_f(n) avoids phi(n) whenever x_n >= start."""
    psi = psi_of(phi)
    W = min(len(f), len(phi))
    if not all(f(n) not in psi(n) for n in range(start, W)):
        return Verdict(True, (0, 0))
    ref = increasing_refine(FiniteFunction(f.table[:W]))
    idx = [n for n, x in enumerate(ref.X) if x >= start]
    for n in idx:
        if ref.g(n) in phi(n):
            return Verdict(False, (idx[0], idx[-1] + 1), (n, ref.X[n], ref.g(n)))
    return Verdict(True, (idx[0], idx[-1] + 1) if idx else (0, 0))
