"""Certified greedy extraction of normal and polychromatic sets.

The four bound recursions:

    nrm(p, 0) = 0,  nrm(p, n+1) = nrm(p, n) + C(p+n, 2) + 1
    ext(p, 0) = 0,  ext(p, n+1) = (p+1) * ext(p+1, n) + 2p + 2
    lim(0, n) = n,  lim(k+1, n) = n + 1 + lim(k, n+1)
    g(1, n) = n+1,  g(k+1, n) = max(ext(k, g(k, n)), nrm(k, g(k, n)), 2 g(k, n)) + 1

``nrm(p, n)`` points above a normal set of size p always contain n points
extending it to a normal set; ``ext(p, n)`` candidates inside a normal set
always contain n points extending a polychromatic set of size p.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Optional, Sequence

from .coloring import PairColoring, bound_of, is_normal, normality_counterexample
from .errors import (
    BoundOverflowError,
    InternalInvariantError,
    PreconditionError,
    WindowUnsatisfiableError,
)

DEFAULT_MAX_BITS = 4096


def nrm(p: int, n: int) -> int:
    return sum(comb(p + j, 2) + 1 for j in range(n))


@lru_cache(maxsize=None)
def _ext(p: int, n: int) -> int:
    value = 0
    for q in range(p + n - 1, p - 1, -1):
        value = (q + 1) * value + 2 * q + 2
    return value


def ext(p: int, n: int, max_bits: Optional[int] = None) -> int:
    # ext(p, n) >= 2**(n-1), so a huge n certifies overflow without computing anything
    if max_bits is not None and n - 1 > max_bits:
        raise BoundOverflowError("ext", (p, n))
    value = _ext(p, n)
    if max_bits is not None and value.bit_length() > max_bits:
        raise BoundOverflowError("ext", (p, n))
    return value


def lim(k: int, n: int) -> int:
    value = n + k  # lim(0, n+k)
    for j in range(k - 1, -1, -1):
        value = (n + j) + 1 + value
    return value


def lim_closed_form(k: int, n: int) -> int:
    return (k + 1) * n + k * (k + 3) // 2


def g_value(k: int, n: int, max_bits: int = DEFAULT_MAX_BITS) -> int:
    if k < 1:
        raise PreconditionError("g is defined for k >= 1")
    value = n + 1
    for j in range(1, k):
        try:
            e = ext(j, value, max_bits)
        except BoundOverflowError:
            raise BoundOverflowError("g", (k, n)) from None
        value = max(e, nrm(j, value), 2 * value) + 1
        if value.bit_length() > max_bits:
            raise BoundOverflowError("g", (k, n))
    return value


@dataclass(frozen=True)
class BoundTables:
    max_p: int
    max_n: int
    max_k: int
    max_bits: int
    nrm: tuple[tuple[int, ...], ...]
    ext: tuple[tuple[Optional[int], ...], ...]
    lim: tuple[tuple[int, ...], ...]
    # g[k-1][n]; None marks a cell beyond max_bits
    g: tuple[tuple[Optional[int], ...], ...]
    overflow: tuple[tuple[str, int, int], ...] = ()

    def value(self, table: str, i: int, n: int) -> int:
        rows = getattr(self, table)
        row = i - 1 if table == "g" else i
        if row < 0 or row >= len(rows) or not 0 <= n < len(rows[row]):
            raise PreconditionError(f"{table}({i}, {n}) outside the table extents")
        v = rows[row][n]
        if v is None:
            raise BoundOverflowError(table, (i, n))
        return v

    def to_csv(self, table: str) -> str:
        rows = getattr(self, table)
        first = 1 if table == "g" else 0
        label = "k" if table in ("g", "lim") else "p"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"{label}/n"] + list(range(self.max_n + 1)))
        for i, row in enumerate(rows):
            w.writerow([i + first] + ["overflow" if v is None else v for v in row])
        return buf.getvalue()


def bound_tables(max_p: int, max_n: int, max_k: int, max_bits: int = DEFAULT_MAX_BITS) -> BoundTables:
    """Fill nrm, ext (p <= max_p), lim, g (k <= max_k) for n <= max_n.

    Cells whose value needs more than ``max_bits`` bits are recorded in
    ``overflow`` and stored as None; reading one raises BoundOverflowError.
    """
    if min(max_p, max_n, max_k) < 1:
        raise PreconditionError("table extents must be >= 1")
    overflow = []
    nrm_rows = tuple(tuple(nrm(p, n) for n in range(max_n + 1)) for p in range(max_p + 1))
    ext_rows = []
    for p in range(max_p + 1):
        row = []
        for n in range(max_n + 1):
            try:
                row.append(ext(p, n, max_bits))
            except BoundOverflowError:
                row.append(None)
                overflow.append(("ext", p, n))
        ext_rows.append(tuple(row))
    lim_rows = tuple(tuple(lim(k, n) for n in range(max_n + 1)) for k in range(max_k + 1))
    g_rows = [tuple(n + 1 for n in range(max_n + 1))]
    for k in range(1, max_k):
        row = []
        for n in range(max_n + 1):
            prev = g_rows[k - 1][n]
            if prev is None:
                row.append(None)
                overflow.append(("g", k + 1, n))
                continue
            try:
                e = ext(k, prev, max_bits)
            except BoundOverflowError:
                row.append(None)
                overflow.append(("g", k + 1, n))
                continue
            v = max(e, nrm(k, prev), 2 * prev) + 1
            if v.bit_length() > max_bits:
                row.append(None)
                overflow.append(("g", k + 1, n))
            else:
                row.append(v)
        g_rows.append(tuple(row))
    return BoundTables(
        max_p, max_n, max_k, max_bits,
        nrm_rows, tuple(ext_rows), lim_rows, tuple(g_rows), tuple(overflow),
    )


@dataclass(frozen=True)
class Step:
    chosen: int
    examined: int
    pool_size: int


@dataclass(frozen=True)
class ExtractionCertificate:
    coloring_id: str
    mode: str  # "normal" or "poly"
    start: tuple[int, ...]
    pool: tuple[int, ...]
    target: int
    output: tuple[int, ...]
    steps: tuple[Step, ...]
    best_effort: bool = False
    anchor: tuple[int, ...] = ()  # the normal set A, for mode "poly"
    prior: Optional["ExtractionCertificate"] = field(default=None, compare=True)

    def step_limit(self, p: int) -> int:
        return comb(p, 2) + 1 if self.mode == "normal" else 2 * p + 1


def _pairwise_colors(c: PairColoring, pts: Sequence[int]) -> list[int]:
    return [c.color(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]]


def extender_set(c: PairColoring, base: Iterable[int], pool: Iterable[int]) -> list[int]:
    """Points of ``pool`` outside ``base`` whose addition keeps ``base`` polychromatic."""
    base = sorted(set(base))
    used = _pairwise_colors(c, base)
    if len(set(used)) != len(used):
        raise PreconditionError(f"base set {base} is not polychromatic")
    used = set(used)
    inside = set(base)
    out = []
    for z in pool:
        if z in inside:
            continue
        new = set()
        for x in base:
            col = c.color(x, z)
            if col in used or col in new:
                break
            new.add(col)
        else:
            out.append(z)
    return out


def extend_normal(c: PairColoring, start: Iterable[int], pool: Iterable[int], target: int,
                  best_effort: bool = False) -> tuple[list[int], ExtractionCertificate]:
    """Greedily add ``target`` points of ``pool`` to the normal set ``start``.

    Each step takes the least remaining candidate that keeps the set normal;
    the candidates after it form the next pool. With ``len(pool) >= nrm(|start|, target)``
    this never fails and never looks past the first C(p, 2) + 1 candidates.
    """
    start = sorted(set(start))
    pool = sorted(set(pool))
    bad = normality_counterexample(c, start)
    if bad is not None:
        raise PreconditionError(f"start set is not normal: {bad[0]} and {bad[1]} share a color")
    if start and pool and pool[0] <= start[-1]:
        raise PreconditionError("pool must lie above the start set")
    required = nrm(len(start), target)
    if len(pool) < required and not best_effort:
        raise PreconditionError(f"pool has {len(pool)} points, need nrm({len(start)}, {target}) = {required}",
                                required=required)
    current = list(start)
    used = set(_pairwise_colors(c, current))
    chosen: list[int] = []
    steps = []
    pos = 0
    while len(chosen) < target:
        examined = 0
        pick = None
        while pos < len(pool):
            z = pool[pos]
            pos += 1
            examined += 1
            new = [c.color(x, z) for x in current]
            if not used.intersection(new):
                pick = z
                break
        if pick is None:
            if best_effort:
                break
            raise InternalInvariantError(f"normal extension exhausted its pool after {len(chosen)} points")
        p = len(current)
        if examined > comb(p, 2) + 1 and not best_effort:
            raise InternalInvariantError(f"step with p={p} examined {examined} > C(p,2)+1 candidates")
        used.update(new)
        current.append(pick)
        chosen.append(pick)
        steps.append(Step(pick, examined, len(pool) - pos))
    cert = ExtractionCertificate(c.coloring_id, "normal", tuple(start), tuple(pool), target,
                                 tuple(chosen), tuple(steps), best_effort)
    return chosen, cert


def extend_polychromatic(c: PairColoring, anchor: Iterable[int], start: Iterable[int],
                         pool: Iterable[int], target: int,
                         best_effort: bool = False) -> tuple[list[int], ExtractionCertificate]:
    """Greedily grow the polychromatic set ``start`` by ``target`` points of ``pool``.

    ``anchor`` is a normal set containing ``start`` and ``pool``, and the pool
    lies in the extender set of ``start``. At each step with p chosen points
    and r still to go, the least candidate z whose surviving pool
    ``pool ∩ E(start ∪ z)`` keeps at least ext(p+1, r-1) points is taken; the
    guarantee puts it among the first 2p+1 candidates.
    """
    anchor = sorted(set(anchor))
    start = sorted(set(start))
    pool = sorted(set(pool))
    bad = normality_counterexample(c, anchor)
    if bad is not None:
        raise PreconditionError(f"anchor set is not normal: {bad[0]} and {bad[1]} share a color")
    anchor_set = set(anchor)
    if not anchor_set.issuperset(start) or not anchor_set.issuperset(pool):
        raise PreconditionError("start set and pool must lie inside the anchor set")
    if extender_set(c, start, pool) != pool:
        raise PreconditionError("pool must lie inside the extender set of the start set")
    required = ext(len(start), target)
    if len(pool) < required and not best_effort:
        raise PreconditionError(f"pool has {len(pool)} points, need ext({len(start)}, {target}) = {required}",
                                required=required)

    current = list(start)
    used = set(_pairwise_colors(c, current))
    # colors joining each pool point to the current set
    links = {w: [c.color(x, w) for x in current] for w in pool}
    live = list(pool)
    chosen: list[int] = []
    steps = []
    while len(chosen) < target and live:
        remaining = target - len(chosen)
        p = len(current)
        need = ext(p + 1, remaining - 1)
        pick = None
        examined = 0
        best = None
        for z in live:
            examined += 1
            zl = links[z]
            zset = set(zl)
            survivors = []
            for w in live:
                if w == z:
                    continue
                wl = links[w]
                zw = c.color(z, w)
                if zw in used or zw in zset or zset.intersection(wl) or zw in wl:
                    continue
                survivors.append(w)
            if len(survivors) >= need:
                pick = (z, survivors, examined)
                break
            if best_effort and (best is None or len(survivors) > len(best[1])):
                best = (z, survivors, examined)
        if pick is None:
            if not best_effort:
                raise InternalInvariantError(
                    f"no candidate keeps ext({p + 1}, {remaining - 1}) = {need} points (p={p})")
            pick = best
        z, survivors, examined = pick
        if examined > 2 * p + 1 and not best_effort:
            raise InternalInvariantError(f"step with p={p} examined {examined} > 2p+1 candidates")
        used.update(links[z])
        for w in survivors:
            links[w] = links[w] + [c.color(z, w)]
        current.append(z)
        chosen.append(z)
        live = survivors
        steps.append(Step(z, examined, len(live)))
    if len(chosen) < target and not best_effort:
        raise InternalInvariantError(f"polychromatic extension stopped at {len(chosen)} < {target}")
    cert = ExtractionCertificate(c.coloring_id, "poly", tuple(start), tuple(pool), target,
                                 tuple(chosen), tuple(steps), best_effort, anchor=tuple(anchor))
    return chosen, cert


def required_universe(target: int) -> int:
    """Universe size that guarantees a polychromatic set of size ``target``."""
    return nrm(0, ext(0, target))


def guaranteed_target(n: int) -> int:
    """Largest target whose guarantee fits in a universe of n points."""
    t = 0
    while required_universe(t + 1) <= n:
        t += 1
    return t


def rainbow_extract(c: PairColoring, target: int,
                    best_effort: bool = False) -> tuple[list[int], ExtractionCertificate]:
    """Normalize, then extract a polychromatic set of size ``target`` from a 2-bounded coloring.

    The returned certificate is the polychromatic stage; its ``prior`` is the
    normal stage. A 1-bounded coloring makes every set polychromatic, so it
    only needs ``target`` points; its certificates are marked best-effort
    since the pool sizes fall short of the general bound.
    """
    k = bound_of(c)
    if k > 2 and not best_effort:
        raise PreconditionError(f"coloring is {k}-bounded, rainbow extraction needs 2-bounded")
    if k <= 1 and not best_effort:
        if c.n < target:
            raise PreconditionError(f"universe has {c.n} points, need {target}", required=target)
        best_effort = True
    m = ext(0, target)
    required = nrm(0, m)
    if c.n < required and not best_effort:
        raise PreconditionError(f"universe has {c.n} points, need nrm(0, ext(0, {target})) = {required}",
                                required=required)
    anchor, normal_cert = extend_normal(c, [], range(c.n), m, best_effort)
    points, poly_cert = extend_polychromatic(c, anchor, [], anchor, target, best_effort)
    return points, _with_prior(poly_cert, normal_cert)


def _with_prior(cert: ExtractionCertificate, prior: ExtractionCertificate) -> ExtractionCertificate:
    return ExtractionCertificate(cert.coloring_id, cert.mode, cert.start, cert.pool, cert.target,
                                 cert.output, cert.steps, cert.best_effort, cert.anchor, prior)


def replay_certificate(c: PairColoring, cert: ExtractionCertificate) -> bool:
    """Re-run the recorded extraction and compare every step; also checks step limits."""
    if cert.coloring_id != c.coloring_id:
        return False
    if cert.prior is not None and not replay_certificate(c, cert.prior):
        return False
    if cert.mode == "normal":
        out, again = extend_normal(c, cert.start, cert.pool, cert.target, cert.best_effort)
    elif cert.mode == "poly":
        out, again = extend_polychromatic(c, cert.anchor, cert.start, cert.pool, cert.target,
                                          cert.best_effort)
    else:
        return False
    if tuple(out) != cert.output or again.steps != cert.steps:
        return False
    if not cert.best_effort:
        p = len(cert.start)
        for i, step in enumerate(cert.steps):
            if step.examined > cert.step_limit(p + i):
                return False
    return True


def pigeonhole_check(c: PairColoring, anchor: Iterable[int], base: Sequence[int],
                     points: Sequence[int]) -> bool:
    """Every z in anchor ∩ E(base) above max(points) lies in some E(base ∪ {a_i}).

    The mathematics says this is always true for a normal anchor, a
    polychromatic base of size <= len(points) - 1 and increasing points in
    anchor ∩ E(base); the function exists to look for counterexamples.
    """
    if not points:
        return True
    top = max(points)
    ext_base = extender_set(c, base, anchor)
    for z in ext_base:
        if z <= top or z in points:
            continue
        if not any(extender_set(c, list(base) + [a], [z]) for a in points):
            return False
    return True


@dataclass(frozen=True)
class RefineResult:
    points: tuple[int, ...]
    mode: str
    window: int  # the n whose window [l, f(n)) carries the count
    certificate: Optional[ExtractionCertificate] = None


def rich_refine(c: PairColoring, anchor: Iterable[int], f: Sequence[int], tables: BoundTables,
                k: int, l: int, N: int, mode: str = "normal") -> RefineResult:
    """Find B inside ``anchor`` that is normal (or polychromatic) and rich on some window.

    Richness means ``|[l, f(n)) ∩ B| >= g(k, n)`` for some ``n >= N``. When
    ``anchor`` already has the required property it is returned unchanged;
    otherwise a window n with ``|[l, f(n)) ∩ anchor| >= g(k+1, n)`` is located
    and the greedy extraction runs inside it.
    """
    if mode not in ("normal", "poly"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if any(b <= a for a, b in zip(f, f[1:])):
        raise PreconditionError("f must be strictly increasing")
    anchor = sorted(set(anchor))
    if mode == "poly" and not is_normal(c, anchor):
        raise PreconditionError("mode 'poly' needs a normal anchor set")

    def window(n):
        return [x for x in anchor if l <= x < f[n]]

    def g_at(kk, n):
        try:
            return tables.value("g", kk, n)
        except (BoundOverflowError, PreconditionError):
            return None

    already = is_normal(c, anchor) if mode == "normal" else _poly(c, anchor)
    checked = []
    if already:
        for n in range(N, len(f)):
            need = g_at(k, n)
            if need is not None and len(window(n)) >= need:
                return RefineResult(tuple(anchor), mode, n)
    for n in range(N, len(f)):
        checked.append(n)
        need = g_at(k + 1, n)
        target = g_at(k, n)
        if need is None or target is None:
            continue
        w = window(n)
        if len(w) < need:
            continue
        if mode == "normal":
            pts, cert = extend_normal(c, [], w, target)
        else:
            pts, cert = extend_polychromatic(c, anchor, [], w, target)
        return RefineResult(tuple(pts), mode, n, cert)
    raise WindowUnsatisfiableError(f"no window n in {checked} carries g({k + 1}, n) points", checked)


def _poly(c: PairColoring, pts: Sequence[int]) -> bool:
    cols = _pairwise_colors(c, pts)
    return len(cols) == len(set(cols))
