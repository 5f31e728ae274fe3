"""Invariant suites. Each suite returns pass/fail counts and the first counterexample."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Callable, Optional

import numpy as np

from . import cbrank, characteristics as ch
from .coloring import (
    PairColoring,
    bound_of,
    classify_subset,
    galvin_dual,
    is_polychromatic,
    k_bounded_decompose,
)
from .extraction import (
    bound_tables,
    extend_normal,
    extender_set,
    guaranteed_target,
    lim_closed_form,
    nrm,
    pigeonhole_check,
    rainbow_extract,
    replay_certificate,
    required_universe,
)
from .generators import (
    edge_graph_coloring,
    edge_list,
    escape_violations,
    first_dyadic_intervals,
    first_dyadic_points,
    fraenkel_coloring,
    interval_system_violations,
    nowhere_dense_coloring,
    nwd_transfer,
    random_coloring,
    transfer_violations,
)
from .search import (
    canonical_colorings,
    labelled_colorings,
    max_polychromatic,
    pentagon_coloring,
    rainbow_number,
    ramsey_witness,
)

log = logging.getLogger(__name__)


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: Optional[str] = None
    note: str = ""

    def record(self, ok: bool, detail: Callable[[], str] = lambda: ""):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = detail()

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def check(self, name: str, note: str = "") -> Check:
        c = Check(name, note=note)
        self.checks.append(c)
        return c

    def as_dict(self, timing: bool = False) -> dict:
        out = {"suite": self.name, "ok": self.ok,
               "checks": [{"name": c.name, "passed": c.passed, "failed": c.failed,
                           "counterexample": c.counterexample, "note": c.note} for c in self.checks]}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


def subset_tables(c: PairColoring) -> tuple[list[bool], list[bool]]:
    """Polychromatic and normal flags for every subset of [n], indexed by bitmask."""
    n = c.n
    ids: dict[int, int] = {}
    row = [[0] * n for _ in range(n)]
    for (a, b), col in c.items():
        bit = 1 << ids.setdefault(col, len(ids))
        row[a][b] = row[b][a] = bit
    size = 1 << n
    cols = [0] * size
    poly = [True] * size
    normal = [True] * size
    for mask in range(1, size):
        v = mask.bit_length() - 1
        rest = mask ^ (1 << v)
        new = 0
        count = 0
        seen_dup = False
        x = rest
        while x:
            low = x & -x
            bit = row[low.bit_length() - 1][v]
            if new & bit:
                seen_dup = True
            new |= bit
            count += 1
            x ^= low
        cols[mask] = cols[rest] | new
        poly[mask] = poly[rest] and not seen_dup and not (cols[rest] & new)
        normal[mask] = normal[rest] and not (cols[rest] & new)
    return poly, normal


def mono_table(c: PairColoring) -> list[Optional[int]]:
    """Common color of each subset (-1 below two points), or None when the subset is not monochromatic."""
    n = c.n
    out: list[Optional[int]] = [-1] * (1 << n)
    for mask in range(1, 1 << n):
        v = mask.bit_length() - 1
        rest = mask ^ (1 << v)
        col = out[rest]
        if col is None:
            out[mask] = None
            continue
        for u in _bits(rest):
            x = c.color(u, v)
            if col == -1:
                col = x
            elif x != col:
                col = None
                break
        out[mask] = col
    return out


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _sweep_note(n: int) -> str:
    if n <= 5:
        return f"all 2-bounded colorings, n <= {n}"
    return f"all 2-bounded colorings for n <= 5, isomorphism classes for 6 <= n <= {n}"


# Suites


def suite_tables(max_p: int = 20, max_n: int = 50, max_k: int = 20) -> SuiteResult:
    res = SuiteResult("tables")
    t = bound_tables(max_p, max_n, max_k)
    rec = res.check("recursions")
    for p in range(max_p + 1):
        rec.record(t.nrm[p][0] == 0 and t.ext[p][0] == 0, lambda: f"base case p={p}")
        for n in range(max_n):
            rec.record(t.nrm[p][n + 1] == t.nrm[p][n] + comb(p + n, 2) + 1, lambda: f"nrm({p},{n + 1})")
            if p < max_p and t.ext[p][n + 1] is not None and t.ext[p + 1][n] is not None:
                rec.record(t.ext[p][n + 1] == (p + 1) * t.ext[p + 1][n] + 2 * p + 2, lambda: f"ext({p},{n + 1})")
    for k in range(max_k + 1):
        for n in range(max_n + 1):
            if k == 0:
                rec.record(t.lim[0][n] == n, lambda: f"lim(0,{n})")
            elif n < max_n:
                rec.record(t.lim[k][n] == n + 1 + t.lim[k - 1][n + 1], lambda: f"lim({k},{n})")
    gcheck = res.check("g recursion", note=f"{sum(1 for o in t.overflow if o[0] == 'g')} g cells beyond {t.max_bits} bits")
    for n in range(max_n + 1):
        gcheck.record(t.g[0][n] == n + 1, lambda: f"g(1,{n})")
    from .extraction import ext as ext_fn
    for k in range(1, max_k):
        for n in range(max_n + 1):
            prev, cur = t.g[k - 1][n], t.g[k][n]
            if cur is None:
                continue
            want = max(ext_fn(k, prev), nrm(k, prev), 2 * prev) + 1
            gcheck.record(cur == want, lambda: f"g({k + 1},{n})")
    closed = res.check("lim closed form")
    for k in range(max_k + 1):
        for n in range(max_n + 1):
            closed.record(t.lim[k][n] == lim_closed_form(k, n), lambda: f"lim({k},{n})")
    mono = res.check("monotone in n")
    for p in range(max_p + 1):
        for n in range(max_n):
            mono.record(t.nrm[p][n] < t.nrm[p][n + 1], lambda: f"nrm({p},.) at {n}")
            a, b = t.ext[p][n], t.ext[p][n + 1]
            if a is not None and b is not None:
                mono.record(a < b, lambda: f"ext({p},.) at {n}")
    for k in range(1, max_k):
        for n in range(max_n + 1):
            if t.g[k][n] is not None:
                mono.record(t.g[k][n] > 2 * t.g[k - 1][n], lambda: f"g({k + 1},{n}) <= 2 g({k},{n})")
    return res


def suite_coloring(exhaustive_n: int = 6, random_trials: int = 300, max_n: int = 30, seed: int = 0) -> SuiteResult:
    res = SuiteResult("coloring")
    dual = res.check("dual soundness", note=_sweep_note(exhaustive_n))
    normal = res.check("normality is hereditary")
    decomp = res.check("decomposition soundness")

    def dual_one(c: PairColoring):
        poly, _ = subset_tables(c)
        mono = mono_table(galvin_dual(c).as_coloring())
        for mask in range(1 << c.n):
            if mono[mask] is not None and mono[mask] >= 0:
                dual.record(poly[mask], lambda: f"coloring {c.colors}, set {_bits(mask)}")

    def normal_one(c: PairColoring):
        _, nm = subset_tables(c)
        for mask in range(1 << c.n):
            if nm[mask]:
                x = mask
                while x:
                    low = x & -x
                    ok = nm[mask ^ low]
                    if not ok:
                        normal.record(False, lambda: f"coloring {c.colors}, set {_bits(mask)}")
                        break
                    x ^= low
                else:
                    normal.record(True)

    for n in range(3, exhaustive_n + 1):
        for c in labelled_colorings(n, 2) if n <= 5 else ():
            dual_one(c)
            normal_one(c)
    if exhaustive_n >= 6:
        for c in canonical_colorings(6, 2):
            dual_one(c)
            normal_one(c)
    rng = np.random.default_rng(seed)
    for trial in range(random_trials):
        n = int(rng.integers(7, max_n + 1))
        c = random_coloring(n, 2, int(rng.integers(1 << 31)))
        d = galvin_dual(c).as_coloring()
        for _ in range(20):
            # sets monochromatic for the dual: grow a random set while the index stays fixed
            order = [int(x) for x in rng.permutation(n)]
            Y = order[:2]
            target = d.color(*Y)
            for z in order[2:]:
                if all(d.color(y, z) == target for y in Y):
                    Y.append(z)
            dual.record(classify_subset(c, Y).polychromatic, lambda: f"n={n} set {sorted(Y)}")
    for k in range(2, 5):
        for trial in range(40):
            n = 5 + trial % 4
            c = random_coloring(n, k, 1000 * k + trial)
            parts = k_bounded_decompose(c)
            polys = [subset_tables(p)[0] for p in parts]
            base, _ = subset_tables(c)
            for mask in range(1 << n):
                if all(p[mask] for p in polys):
                    decomp.record(base[mask], lambda: f"k={k} coloring {c.colors}, set {_bits(mask)}")
    decomp.note = "all subsets of random k-bounded colorings, k <= 4, n <= 8"
    ren = res.check("bound_of invariant under renaming")
    for trial in range(50):
        c = random_coloring(8, 3, trial)
        perm = {col: 1000 - col for col in set(c.colors)}
        c2 = PairColoring(c.n, tuple(perm[x] for x in c.colors), c.declared_bound)
        ren.record(bound_of(c) == bound_of(c2) <= c.declared_bound, lambda: f"seed {trial}")
    return res


def suite_extraction(exhaustive_n: int = 6, random_trials: int = 10_000, max_n: int = 200, seed: int = 0) -> SuiteResult:
    res = SuiteResult("extraction")
    ok = res.check("guarantee, exhaustive", note=f"canonical classes of 2-bounded colorings, n <= {exhaustive_n}")
    agree = res.check("extraction size <= exact optimum")
    for n in range(2, exhaustive_n + 1):
        t = guaranteed_target(n)
        for c in canonical_colorings(n, 2):
            Y, cert = rainbow_extract(c, t)
            good = len(Y) >= t and classify_subset(c, Y).polychromatic and _steps_ok(cert)
            ok.record(good, lambda: f"n={n} coloring {c.colors}")
            agree.record(len(Y) <= max_polychromatic(c).optimum, lambda: f"n={n} coloring {c.colors}")
    rnd = res.check("guarantee, random", note=f"{random_trials} seeded colorings with {required_universe(2)} <= n <= {max_n}")
    lo = required_universe(2)
    for trial in range(random_trials):
        n = lo + (trial * 7919 + seed) % (max_n - lo + 1)
        c = random_coloring(n, 2, seed * 1_000_003 + trial)
        t = guaranteed_target(n)
        Y, cert = rainbow_extract(c, t)
        rnd.record(len(Y) >= t and is_polychromatic(c, Y) and _steps_ok(cert),
                   lambda: f"n={n} seed={seed * 1_000_003 + trial}")
    rep = res.check("certificates replay")
    for trial in range(50):
        c = random_coloring(40, 2, trial)
        Y, cert = rainbow_extract(c, 2)
        rep.record(replay_certificate(c, cert), lambda: f"seed {trial}")
    return res


def _steps_ok(cert) -> bool:
    while cert is not None:
        p = len(cert.start)
        for i, s in enumerate(cert.steps):
            if s.examined > cert.step_limit(p + i) or s.examined > 2 * (p + i) + 1:
                return False
        cert = cert.prior
    return True


def pigeonhole_all(c: PairColoring) -> Optional[tuple]:
    """Exhaustive check on one coloring; returns the first violating (A, X, a's, z) or None.

    Only maximal normal sets A and exactly |X|+1 points a_i are tried: a
    configuration inside a smaller A, or with more a_i, is implied by these.
    """
    n = c.n
    poly, normal = subset_tables(c)
    maximal = [m for m in range(1 << n) if normal[m]
               and all(not normal[m | (1 << v)] for v in range(n) if not m >> v & 1)]
    for A in maximal:
        sub = A
        while True:
            X = sub
            if poly[X]:
                E = [a for a in _bits(A & ~X) if poly[X | (1 << a)]]
                need = bin(X).count("1") + 1
                for pts in combinations(E, need):
                    top = pts[-1]
                    for z in E:
                        if z > top and not any(poly[X | (1 << a) | (1 << z)] for a in pts):
                            return (_bits(A), _bits(X), pts, z)
            if sub == 0:
                break
            sub = (sub - 1) & A
    return None


def suite_pigeonhole(exhaustive_n: int = 6, random_trials: int = 10_000, max_n: int = 40, seed: int = 0) -> SuiteResult:
    res = SuiteResult("pigeonhole")
    ex = res.check("exhaustive", note=_sweep_note(exhaustive_n))
    for n in range(2, exhaustive_n + 1):
        source = labelled_colorings(n, 2) if n <= 5 else canonical_colorings(n, 2)
        for c in source:
            bad = pigeonhole_all(c)
            ex.record(bad is None, lambda: f"coloring {c.colors}: {bad}")
    rnd = res.check("random", note=f"{random_trials} trials, n <= {max_n}")
    rng = np.random.default_rng(seed)
    trial = 0
    while rnd.passed + rnd.failed < random_trials:
        trial += 1
        n = int(rng.integers(4, max_n + 1))
        c = random_coloring(n, 2, int(rng.integers(1 << 31)))
        pool = sorted(int(x) for x in rng.choice(n, size=int(rng.integers(2, n + 1)), replace=False))
        A, _ = extend_normal(c, [], pool, len(pool), best_effort=True)
        X: list[int] = []
        for x in rng.permutation(A):
            if len(X) >= int(rng.integers(0, 4)):
                break
            if is_polychromatic(c, X + [int(x)]):
                X.append(int(x))
        E = extender_set(c, X, A)
        if len(E) < len(X) + 1:
            continue  # too few points to pick from; draw again
        pts = sorted(int(x) for x in rng.choice(E, size=len(X) + 1, replace=False))
        rnd.record(pigeonhole_check(c, A, X, pts), lambda: f"n={n} A={A} X={X} a={pts}")
    return res


def suite_ideal(exhaustive_n: int = 5, max_p: int = 2, max_t: int = 3) -> SuiteResult:
    """Few points a of A ∩ E(X) have a small A ∩ E(X ∪ a), once A ∩ E(X) is large."""
    res = SuiteResult("ideal")
    chk = res.check("small extender sets are rare", note=f"all 2-bounded colorings, n <= {exhaustive_n}")
    for n in range(3, exhaustive_n + 1):
        for c in labelled_colorings(n, 2):
            poly, normal = subset_tables(c)
            for A in range(1 << n):
                if not normal[A]:
                    continue
                sub = A
                while True:
                    X = sub
                    size = bin(X).count("1")
                    if poly[X] and size <= max_p:
                        E = [a for a in _bits(A & ~X) if poly[X | (1 << a)]]
                        sizes = {a: sum(1 for z in _bits(A & ~X) if z != a and poly[X | (1 << a) | (1 << z)])
                                 for a in E}
                        for p in range(size, max_p + 1):
                            for t in range(1, max_t + 1):
                                if len(E) >= (t + 1) * (p + 1) + p:
                                    small = [a for a in E if sizes[a] < t]
                                    chk.record(len(small) <= p,
                                               lambda: f"coloring {c.colors} A={_bits(A)} X={_bits(X)} p={p} t={t}")
                    if sub == 0:
                        break
                    sub = (sub - 1) & A
    return res


def suite_ramsey() -> SuiteResult:
    res = SuiteResult("ramsey")
    six = res.check("every 2-coloring of [6]^2 has a monochromatic triangle")
    for bits in range(1 << 15):
        flat = [(bits >> i) & 1 for i in range(15)]
        six.record(ramsey_witness(flat, 3, 6) is not None, lambda: f"coloring {flat}")
    five = res.check("pentagon coloring of [5]^2 has none")
    five.record(ramsey_witness(pentagon_coloring(), 3) is None, lambda: "pentagon")
    return res


def suite_rainbow(cap: int = 8) -> SuiteResult:
    res = SuiteResult("rainbow")
    r = rainbow_number(2, 3, cap)
    chk = res.check("rainbow number k=2 m=3", note=f"value {r.value}")
    chk.record(r.value is not None and r.certificate is not None, lambda: "no value")
    if r.certificate is not None:
        opt = max_polychromatic(r.certificate)
        chk.record(opt.exhaustive and opt.optimum < 3, lambda: f"certificate has optimum {opt.optimum}")
    return res


def suite_fraenkel(max_m: int = 5) -> SuiteResult:
    res = SuiteResult("fraenkel")
    law = res.check("optimum is m+1")
    pairs = res.check("optimal witnesses hold at most one complete pair")
    for m in range(2, max_m + 1):
        r = max_polychromatic(fraenkel_coloring(m), all_optimal=True)
        law.record(r.optimum == m + 1 and r.exhaustive, lambda: f"m={m}: {r.optimum}")
        for w in r.all_optimal:
            s = set(w)
            pairs.record(sum(1 for i in range(m) if 2 * i in s and 2 * i + 1 in s) <= 1, lambda: f"m={m}: {w}")
    return res


def suite_edge_graph(max_v: int = 5, clique_v: int = 6) -> SuiteResult:
    res = SuiteResult("edge-graph")
    tri = res.check("maximal polychromatic sets are triangle-free")
    quad = res.check("one edge pair per 4-vertex set")
    clique = res.check("no [A]^2 with |A| >= 3 inside a polychromatic set", note=f"v <= {clique_v}")
    ident = res.check("matching identification")
    for v in range(3, clique_v + 1):
        c = edge_graph_coloring(v)
        edges = edge_list(v)
        index = {e: i for i, e in enumerate(edges)}
        for a, b, cc, d in combinations(range(v), 4):
            ident.record(c.color(index[(a, b)], index[(cc, d)]) == c.color(index[(a, d)], index[(b, cc)]),
                         lambda: f"v={v} {a, b, cc, d}")
        poly, _ = subset_tables(c)
        triangles = [sum(1 << index[e] for e in combinations(t, 2)) for t in combinations(range(v), 3)]
        for mask in range(1 << len(edges)):
            if not poly[mask]:
                continue
            clique.record(all(mask & t != t for t in triangles), lambda: f"v={v} set {_bits(mask)}")
            if v > max_v:
                continue
            if any(poly[mask | (1 << e)] for e in range(len(edges)) if not mask >> e & 1):
                continue
            tri.record(all(mask & t != t for t in triangles), lambda: f"v={v} set {_bits(mask)}")
            chosen = [edges[i] for i in _bits(mask)]
            per_four: dict = {}
            for e, f in combinations(chosen, 2):
                u = frozenset(e) | frozenset(f)
                if len(u) == 4:
                    per_four[u] = per_four.get(u, 0) + 1
            quad.record(all(x <= 1 for x in per_four.values()), lambda: f"v={v} set {chosen}")
    return res


def suite_nwd(size: int = 16, depth: int = 8) -> SuiteResult:
    res = SuiteResult("nwd")
    systems = [("dyadic", first_dyadic_points(size)),
               ("seventeenths", [Fraction(i, 17) for i in range(1, size + 1)])]
    for name, S in systems:
        c, system = nowhere_dense_coloring(S, depth)
        inv = res.check(f"{name}: interval-system invariants")
        bad = interval_system_violations(system)
        inv.record(not bad, lambda: bad[0])
        two = res.check(f"{name}: 2-bounded")
        two.record(bound_of(c) <= 2, lambda: f"bound {bound_of(c)}")
        esc = res.check(f"{name}: escape property",
                        note=f"{sum(1 for x in c.colors if bin(x).count('1') == 3)} identified pairs")
        r = max_polychromatic(c, all_optimal=True)
        for w in r.all_optimal:
            v = escape_violations(c, system, w)
            esc.record(not v, lambda: f"witness {w}: {v[:3]}")
    return res


def suite_transfer(trials: int = 100, window: int = 32, seed: int = 0) -> SuiteResult:
    res = SuiteResult("transfer")
    key = res.check("G(n) in t implies F(n) in t")
    inj = res.check("F injective")
    intervals = first_dyadic_intervals(window)
    pts = first_dyadic_points(31)
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        G = [pts[int(i)] for i in rng.integers(0, len(pts), size=window)]
        out = nwd_transfer(G, intervals, window)
        v = transfer_violations(G, out)
        key.record(not v, lambda: f"trial {trial}: {v[:3]}")
        inj.record(len(set(out.F)) == len(out.F), lambda: f"trial {trial}")
    return res


def suite_cb(max_size: int = 6, random_trials: int = 1000, max_height: int = 8, seed: int = 0) -> SuiteResult:
    res = SuiteResult("cb")
    agree = res.check("structural rank equals iterated rank")
    drop = res.check("derivative lowers rank by one")
    disc = res.check("rank < 2 iff no accumulation point")
    for d in cbrank.all_descriptions(max_size):
        r = cbrank.structural_rank(d)
        agree.record(r == cbrank.iterated_rank(d), lambda: str(d))
        drop.record(cbrank.structural_rank(cbrank.derivative(d)) == max(r - 1, 0), lambda: str(d))
        disc.record((r < 2) == (not cbrank.has_accumulation(d)), lambda: str(d))
    rng = np.random.default_rng(seed)
    union = res.check("union rank is the max")
    for _ in range(random_trials):
        d1 = cbrank.random_description(rng, 30)
        d2 = cbrank.random_description(rng, 30)
        agree.record(cbrank.structural_rank(d1) == cbrank.iterated_rank(d1), lambda: str(d1))
        u = cbrank.disjoint_union(d1, d2)
        r1, r2 = cbrank.cb_rank(d1), cbrank.cb_rank(d2)
        union.record(cbrank.cb_rank(u) == max(r1, r2) <= r1 + r2, lambda: f"{d1} + {d2}")
    lvl = res.check("level extraction", note=f"all labelings, height <= {max_height}")
    for h in range(0, max_height + 1):
        for bits in range(1 << (h + 1)):
            labels = ["A" if bits >> i & 1 else "B" for i in range(h + 1)]
            t = cbrank.LabeledTree.full(labels, 2)
            for k in range(h + 1):
                l = h - k
                label, sub = cbrank.level_extract(t, k, l)
                want = k if label == "A" else l
                lvl.record(sub.height == want and all(x == label for x in sub.labels),
                           lambda: f"labels {''.join(labels)} k={k}")
    return res


def suite_characteristics(trials: int = 10_000, seed: int = 0) -> SuiteResult:
    res = SuiteResult("characteristics")
    rng = np.random.default_rng(seed)

    dual = res.check("unary dual: zero on X forces injectivity", note="windows <= 12")
    for _ in range(trials):
        W = int(rng.integers(1, 13))
        f = _random_two_to_one(rng, W)
        fs = ch.unary_dual(f)
        zeros = [i for i in range(W) if fs(i) == 0]
        X = [x for x in zeros if rng.random() < 0.7]
        st = ch.witness_status(f, X)
        dual.record(st in (ch.Status.INJECTIVE, ch.Status.BOTH), lambda: f"f={f.table} X={X}")

    dom = res.check("b-direction: injective on the collapse forces domination")
    for _ in range(trials):
        f = _random_increasing(rng, int(rng.integers(3, 14)))
        g = ch.interval_collapse(f)
        cutoff = int(rng.integers(0, max(1, len(g) // 2)))
        fibers: dict[int, list[int]] = {}
        for x in range(cutoff, len(g)):
            fibers.setdefault(g(x), []).append(x)
        X = [int(rng.choice(v)) for v in fibers.values() if rng.random() < 0.8]
        X += [x for x in range(cutoff) if rng.random() < 0.3]
        v = ch.domination_check(f, X, cutoff)
        dom.record(v.ok, lambda: f"f={f.table} X={sorted(X)} cutoff={cutoff}: {v.counterexample}")

    dfn = res.check("d-direction: f above h_g makes g injective on the orbit")
    for _ in range(trials):
        W = int(rng.integers(4, 40))
        g = ch.FiniteFunction(tuple(int(x) for x in rng.integers(0, max(2, W // 2), size=W)))
        h = ch.hg_threshold(g).h
        f = _random_increasing(rng, W, start=1, min_step=1, max_step=4, above_index=True)
        N = 0
        for n in range(W):
            if f(n) < h(n):
                N = n + 1
        orbit = [x for x in ch.orbit_sequence(f, W) if x >= N]
        dfn.record(ch.witness_status(g, orbit) in (ch.Status.INJECTIVE, ch.Status.BOTH),
                   lambda: f"g={g.table} f={f.table} N={N}")

    mas = res.check("massage: avoiding psi makes g_f avoid phi")
    for _ in range(trials):
        W = int(rng.integers(2, 20))
        f = ch.FiniteFunction(tuple(int(x) for x in rng.integers(0, 3 * W, size=W)))
        phi = ch.Slalom.tight([set(int(x) for x in rng.integers(0, 3 * W, size=int(rng.integers(0, n + 1))))
                               for n in range(W)])
        psi = ch.psi_of(phi)
        start = 0
        for n in range(W):
            if f(n) in psi(n):
                start = n + 1
        v = ch.massage_check(f, phi, start)
        mas.record(v.ok, lambda: f"f={f.table} phi={phi.table}: {v.counterexample}")
    small = res.check("massage, exhaustive", note="window 4, values <= 4, slaloms of width <= 1")
    import itertools
    options = [frozenset()] + [frozenset([v]) for v in range(5)]
    for table in itertools.product(range(5), repeat=4):
        f = ch.FiniteFunction(table)
        for rest in itertools.product(options, repeat=3):
            phi = ch.Slalom.tight([frozenset()] + list(rest))
            for start in range(4):
                small.record(ch.massage_check(f, phi, start).ok, lambda: f"f={table} phi={rest} start={start}")

    ev = res.check("evasion of phi_g makes g injective on the orbit tail")
    for _ in range(trials):
        W = int(rng.integers(4, 40))
        g = _random_two_to_one(rng, W)
        phi = ch.slalom_of_two_to_one(g)
        f = _random_increasing(rng, W, start=1, min_step=1, max_step=5, above_index=True)
        N = ch.evasion_start(f, phi)
        orbit = [x for x in ch.orbit_sequence(f, W) if x >= N]
        ev.record(ch.evade_check(f, phi, N)
                  and ch.witness_status(g, orbit) in (ch.Status.INJECTIVE, ch.Status.BOTH),
                  lambda: f"g={g.table} f={f.table} N={N}")
    return res


def _random_two_to_one(rng, W: int) -> ch.FiniteFunction:
    perm = [int(x) for x in rng.permutation(W)]
    vals = [0] * W
    label = 0
    i = 0
    while i < W:
        if i + 1 < W and rng.random() < 0.6:
            vals[perm[i]] = vals[perm[i + 1]] = label
            i += 2
        else:
            vals[perm[i]] = label
            i += 1
        label += 1
    return ch.FiniteFunction(tuple(vals))


def _random_increasing(rng, W: int, start: int = 0, min_step: int = 1, max_step: int = 4,
                       above_index: bool = False) -> ch.FiniteFunction:
    out = []
    cur = int(rng.integers(0, 4)) + start
    for n in range(W):
        if above_index:
            cur = max(cur, n + 1)
        out.append(cur)
        cur += int(rng.integers(min_step, max_step + 1))
    return ch.FiniteFunction(tuple(out))


def suite_tooling(seed: int = 7) -> SuiteResult:
    from . import serialize
    from .cbrank import LabeledTree, SetDescription
    from .extraction import bound_tables as bt
    from .search import EdgePartition

    res = SuiteResult("tooling")
    rt = res.check("round trip")
    c = random_coloring(required_universe(2), 2, seed)
    Y, cert = rainbow_extract(c, 2)
    _, system = nowhere_dense_coloring([Fraction(i, 17) for i in range(1, 9)], 4)
    objs = [
        c, fraenkel_coloring(3), edge_graph_coloring(4), cert, bt(3, 4, 3), max_polychromatic(c),
        EdgePartition.from_coloring(c), system,
        nwd_transfer(first_dyadic_points(8), first_dyadic_intervals(8), 8),
        SetDescription.parse("[[][[]]][]"), LabeledTree.full("ABA", 2),
        ch.FiniteFunction((3, 1, 4, 1, 5)), ch.slalom_of_two_to_one(ch.FiniteFunction((0, 0, 1, 1))),
    ]
    for obj in objs:
        text = serialize.dumps(obj)
        back = serialize.loads(text)
        rt.record(back == obj and serialize.dumps(back) == text, lambda: type(obj).__name__)
    det = res.check("determinism")
    a = serialize.dumps(random_coloring(12, 3, seed))
    b = serialize.dumps(random_coloring(12, 3, seed))
    det.record(a == b, lambda: "random coloring differs between runs")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "tables": suite_tables,
    "coloring": suite_coloring,
    "extraction": suite_extraction,
    "pigeonhole": suite_pigeonhole,
    "ideal": suite_ideal,
    "ramsey": suite_ramsey,
    "rainbow": suite_rainbow,
    "fraenkel": suite_fraenkel,
    "edge-graph": suite_edge_graph,
    "nwd": suite_nwd,
    "transfer": suite_transfer,
    "cb": suite_cb,
    "characteristics": suite_characteristics,
    "tooling": suite_tooling,
}


def run_suite(name: str, **params) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    t0 = time.perf_counter()
    res = SUITES[name](**params)
    res.seconds = time.perf_counter() - t0
    log.info("suite=%s ok=%s seconds=%.2f", name, res.ok, res.seconds)
    return res
