"""Command-line front end.

Subcommands take ``key=value`` parameters after the subcommand's target,
e.g. ``polyramsey generate fraenkel m=3`` or ``polyramsey search max-poly --input c.json``.
Reports are JSON documents; timing lives under its own key so payloads can be
compared across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Any, Optional

from . import serialize, verify
from .coloring import PairColoring, classify_subset
from .errors import (
    BoundOverflowError,
    MalformedInputError,
    PreconditionError,
    SearchCapError,
    WindowUnsatisfiableError,
)
from .extraction import bound_tables, guaranteed_target, rainbow_extract, rich_refine
from .generators import (
    ShrinkingMap,
    edge_graph_coloring,
    first_dyadic_points,
    fraenkel_coloring,
    ie_coloring,
    nowhere_dense_coloring,
    orbit_split,
    random_coloring,
    unary_bound,
)
from .search import DEFAULT_CAP, max_monochromatic, max_polychromatic, rainbow_number, weak_selecter

log = logging.getLogger("polyramsey")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MALFORMED = 3
EXIT_PRECONDITION = 4
EXIT_VERIFY_FAILED = 5
EXIT_CAP = 6


class UsageError(Exception):
    pass


class Params(dict):
    """``key=value`` parameters with typed lookups that name the offending field."""

    @classmethod
    def parse(cls, items: list[str]) -> "Params":
        out = cls()
        for item in items:
            if "=" not in item:
                raise UsageError(f"expected key=value, got {item!r}")
            key, value = item.split("=", 1)
            out[key.strip()] = value.strip()
        return out

    def int(self, key: str, default: Optional[int] = None, minimum: Optional[int] = None) -> int:
        if key not in self:
            if default is None:
                raise UsageError(f"missing parameter {key}=")
            return default
        try:
            v = int(self[key])
        except ValueError:
            raise UsageError(f"parameter {key} must be an integer, got {self[key]!r}") from None
        if minimum is not None and v < minimum:
            raise UsageError(f"parameter {key} must be >= {minimum}, got {v}")
        return v

    def ints(self, key: str, default: Optional[list[int]] = None) -> list[int]:
        if key not in self:
            if default is None:
                raise UsageError(f"missing parameter {key}=")
            return default
        try:
            return [int(x) for x in self[key].split(",") if x]
        except ValueError:
            raise UsageError(f"parameter {key} must be a comma-separated integer list") from None


def _read_text(path: Optional[str]) -> str:
    if path is None:
        raise UsageError("this command needs --input")
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _read_input(path: Optional[str]) -> Any:
    return serialize.loads(_read_text(path))


def _read_json(path: Optional[str]) -> Any:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path} is not JSON: {exc}") from None


def _read_coloring(path: Optional[str]) -> PairColoring:
    obj = _read_input(path)
    if not isinstance(obj, PairColoring):
        raise MalformedInputError(f"{path} holds a {type(obj).__name__}, not a coloring")
    return obj


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _report(command: list[str], items: list, ok: bool = True, **extra) -> dict:
    out = {"kind": "report", "command": command, "ok": ok, "items": items}
    out.update(extra)
    return out


# generate


def _ie_map(lengths: list[int]) -> ShrinkingMap:
    # chain i of length L: {b}, {b, b+1}, ..., each set mapped to its predecessor
    mapping = {}
    base = 0
    for L in lengths:
        sets = [frozenset(range(base, base + j + 1)) for j in range(L)]
        for j in range(1, L):
            mapping[sets[j]] = sets[j - 1]
        base += L
    return ShrinkingMap(mapping)


def cmd_generate(args, p: Params) -> tuple[int, str]:
    gen = args.target
    if gen == "fraenkel":
        return EXIT_OK, serialize.dumps(fraenkel_coloring(p.int("m", minimum=1)))
    if gen == "edge-graph":
        return EXIT_OK, serialize.dumps(edge_graph_coloring(p.int("v", minimum=2)))
    if gen == "random":
        seed = args.seed if args.seed is not None else p.int("seed", -1)
        if seed < 0:
            raise UsageError("random generation needs a seed (--seed or seed=)")
        return EXIT_OK, serialize.dumps(random_coloring(p.int("n", minimum=0), p.int("k", 2, minimum=1), seed))
    if gen == "nwd":
        size = p.int("size", 16, minimum=3)
        depth = p.int("depth", 8, minimum=1)
        points = p.get("points", "dyadic")
        if points == "dyadic":
            S = first_dyadic_points(size)
        elif points.isdigit() and int(points) > size:
            S = [Fraction(i, int(points)) for i in range(1, size + 1)]
        else:
            raise UsageError("parameter points must be 'dyadic' or a denominator larger than size")
        c, system = nowhere_dense_coloring(S, depth)
        doc = {"kind": "nwd", "coloring": serialize.to_data(c), "system": serialize.to_data(system)}
        return EXIT_OK, serialize.dumps(doc)
    if gen == "ie":
        split = orbit_split(_ie_map(p.ints("lengths", [5])))
        family = set(split.f0) | set(split.f0.values()) | set(split.f1.values())
        chi = ie_coloring(split, family)
        doc = serialize.unary_coloring_data(chi)
        doc["bound"] = unary_bound(chi)
        return EXIT_OK, serialize.dumps(doc)
    raise UsageError(f"unknown generator {gen!r}; choose fraenkel, edge-graph, nwd, random or ie")


# extract


def cmd_extract(args, p: Params) -> tuple[int, str]:
    c = _read_coloring(args.input)
    mode = args.target or "rainbow"
    if mode == "rainbow":
        target = args.target_size if args.target_size is not None else p.int("target", guaranteed_target(c.n))
        best_effort = p.get("best_effort", "false") == "true"
        Y, cert = rainbow_extract(c, target, best_effort)
        verdict = classify_subset(c, Y).verdict.value
        item = {"Y": Y, "verdict": verdict, "certificate": serialize.to_data(cert)}
        return EXIT_OK, serialize.dumps(_report(["extract", mode], [item]))
    if mode in ("rich-normal", "rich-poly"):
        f = p.ints("f")
        anchor = p.ints("anchor", list(range(c.n)))
        tables = bound_tables(p.int("max_p", 20), p.int("max_n", max(len(f) - 1, 1)), p.int("max_k", 20))
        res = rich_refine(c, anchor, f, tables, p.int("k", minimum=1), p.int("l", 0), p.int("N", 0),
                          "normal" if mode == "rich-normal" else "poly")
        item = {"points": list(res.points), "mode": res.mode, "window": res.window,
                "certificate": serialize.to_data(res.certificate) if res.certificate else None}
        return EXIT_OK, serialize.dumps(_report(["extract", mode], [item]))
    raise UsageError(f"unknown extraction {mode!r}; choose rainbow, rich-normal or rich-poly")


# search


def cmd_search(args, p: Params) -> tuple[int, str]:
    what = args.target
    cap = args.cap if args.cap is not None else DEFAULT_CAP
    if cap < 1:
        raise UsageError("--cap must be positive")
    nodes = p.int("nodes", 0) or None
    if what in ("max-poly", "max-mono"):
        c = _read_coloring(args.input)
        fn = max_polychromatic if what == "max-poly" else max_monochromatic
        kwargs = {"all_optimal": True} if what == "max-poly" and p.get("all") == "true" else {}
        r = fn(c, cap=cap, node_limit=nodes, **kwargs)
        rep = _report(["search", what], [serialize.to_data(r)], ok=r.exhaustive, exhaustive=r.exhaustive)
        return (EXIT_OK if r.exhaustive else EXIT_CAP), serialize.dumps(rep)
    if what == "rainbow-number":
        k, m = p.int("k", 2, minimum=2), p.int("m", 3, minimum=2)
        n_max = p.int("cap", cap if args.cap is not None else 8, minimum=1)
        r = rainbow_number(k, m, n_max)
        item = {"k": k, "m": m, "value": r.value, "n_max": n_max, "bad_counts": list(r.bad_counts),
                "certificate": serialize.to_data(r.certificate) if r.certificate else None,
                "certificate_optimum": r.certificate_optimum}
        rep = _report(["search", what], [item], ok=not r.exceeds_cap, exhaustive=not r.exceeds_cap)
        return (EXIT_CAP if r.exceeds_cap else EXIT_OK), serialize.dumps(rep)
    if what == "weak-selecter":
        doc = _read_json(args.input)
        if not isinstance(doc, dict) or not {"n", "X", "P", "sizes"} <= set(doc):
            raise MalformedInputError("weak-selecter input needs fields n, X, P, sizes")
        sel = weak_selecter([tuple(x) for x in doc["X"]], [[tuple(x) for x in b] for b in doc["P"]],
                            doc["sizes"], doc["n"])
        item = {"Y": sorted(list(x) for x in sel.Y), "stages": [list(s) for s in sel.stages],
                "failed_stage": sel.failed_stage}
        return EXIT_OK, serialize.dumps(_report(["search", what], [item], ok=sel.complete))
    raise UsageError(f"unknown search {what!r}; choose max-poly, max-mono, rainbow-number or weak-selecter")


# verify and tables

SUITE_ALIASES = {"slalom": "characteristics", "union": "pigeonhole", "edge": "edge-graph"}

# key=value names accepted by each suite, mapped to the suite's keyword arguments
SUITE_PARAMS = {
    "tables": {"max_p": "max_p", "max_n": "max_n", "max_k": "max_k", "max": None},
    "coloring": {"n": "exhaustive_n", "trials": "random_trials", "max_n": "max_n", "seed": "seed"},
    "extraction": {"n": "exhaustive_n", "trials": "random_trials", "max_n": "max_n", "seed": "seed"},
    "pigeonhole": {"n": "exhaustive_n", "trials": "random_trials", "max_n": "max_n", "seed": "seed"},
    "ideal": {"n": "exhaustive_n"},
    "ramsey": {},
    "rainbow": {"cap": "cap"},
    "fraenkel": {"m": "max_m"},
    "edge-graph": {"v": "max_v", "clique_v": "clique_v"},
    "nwd": {"size": "size", "depth": "depth"},
    "transfer": {"trials": "trials", "window": "window", "seed": "seed"},
    "cb": {"size": "max_size", "trials": "random_trials", "h": "max_height", "seed": "seed"},
    "characteristics": {"trials": "trials", "seed": "seed"},
    "tooling": {"seed": "seed"},
}


def _suite_kwargs(name: str, p: Params, seed: Optional[int]) -> dict:
    accepted = SUITE_PARAMS[name]
    kwargs = {}
    for key in p:
        if key not in accepted:
            raise UsageError(f"suite {name} takes no parameter {key!r}; accepted: {sorted(accepted)}")
        if key == "max":
            v = p.int(key, minimum=1)
            kwargs.update(max_p=min(v, 20), max_n=v, max_k=min(v, 20))
        else:
            kwargs[accepted[key]] = p.int(key, minimum=0)
    if seed is not None and "seed" in accepted.values():
        kwargs["seed"] = seed
    return kwargs


def cmd_verify(args, p: Params) -> tuple[int, str]:
    names = []
    for raw in (args.suite or ([args.target] if args.target else ["all"])):
        for name in raw.split(","):
            name = SUITE_ALIASES.get(name, name)
            if name == "all":
                names.extend(verify.SUITES)
            elif name in verify.SUITES:
                names.append(name)
            else:
                raise UsageError(f"unknown suite {name!r}; choose from {', '.join(verify.SUITES)} or all")
    if len(names) > 1 and p:
        raise UsageError("key=value parameters need a single suite")
    results = [verify.run_suite(n, **_suite_kwargs(n, p, args.seed)) for n in names]
    ok = all(r.ok for r in results)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "passed", "failed", "counterexample"])
        for r in results:
            for chk in r.checks:
                w.writerow([r.name, chk.name, chk.passed, chk.failed, chk.counterexample or ""])
        text = buf.getvalue()
    else:
        rep = _report(["verify", *names], [r.as_dict() for r in results], ok=ok,
                      timing={r.name: round(r.seconds, 3) for r in results})
        text = serialize.dumps(rep, indent=1)
    return (EXIT_OK if ok else EXIT_VERIFY_FAILED), text


def cmd_tables(args, p: Params) -> tuple[int, str]:
    t = bound_tables(p.int("max_p", 20, minimum=1), p.int("max_n", 50, minimum=1), p.int("max_k", 20, minimum=1),
                     p.int("max_bits", 4096, minimum=1))
    if args.format == "csv":
        which = args.target or "g"
        if which not in ("nrm", "ext", "lim", "g"):
            raise UsageError("csv output needs one table: nrm, ext, lim or g")
        return EXIT_OK, t.to_csv(which)
    return EXIT_OK, serialize.dumps(t)


# report


def cmd_report(args, p: Params) -> tuple[int, str]:
    """Summarize a saved report, one line per item or check."""
    try:
        with open(args.input or "", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("kind") != "report" or "items" not in doc:
        raise MalformedInputError("input is not a report")
    lines = [f"command: {' '.join(doc.get('command', []))}", f"ok: {doc.get('ok')}"]
    for item in doc["items"]:
        if isinstance(item, dict) and "suite" in item:
            for chk in item["checks"]:
                status = "PASS" if chk["failed"] == 0 and chk["passed"] > 0 else "FAIL"
                line = f"{status} {item['suite']}: {chk['name']} ({chk['passed']} passed, {chk['failed']} failed)"
                if chk.get("counterexample"):
                    line += f" first counterexample: {chk['counterexample']}"
                lines.append(line)
        else:
            lines.append(json.dumps(item, sort_keys=True)[:200])
    return (EXIT_OK if doc.get("ok") else EXIT_VERIFY_FAILED), "\n".join(lines) + "\n"


COMMANDS = {
    "generate": cmd_generate,
    "extract": cmd_extract,
    "search": cmd_search,
    "verify": cmd_verify,
    "tables": cmd_tables,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyramsey", description="Polychromatic Ramsey computations.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("target", nargs="?", help="generator, extraction mode, search, suite or table name")
        sp.add_argument("params", nargs="*", help="key=value parameters")
        sp.add_argument("--input")
        sp.add_argument("--output")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--cap", type=int)
        sp.add_argument("--target", dest="target_size", type=int)
        sp.add_argument("--format", choices=("text", "csv"), default="text")
        sp.add_argument("--suite", action="append")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        # key=value parameters may follow flags, which argparse leaves over
        args, extra = ap.parse_known_args(argv)
        stray = [x for x in extra if x.startswith("-") or "=" not in x]
        if stray:
            ap.error(f"unrecognized arguments: {' '.join(stray)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    args.params.extend(extra)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s %(message)s")
    # a target that looks like key=value belongs to params
    if args.target and "=" in args.target:
        args.params.insert(0, args.target)
        args.target = None
    t0 = time.perf_counter()
    try:
        code, text = COMMANDS[args.command](args, Params.parse(args.params))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedInputError as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except SearchCapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PreconditionError, WindowUnsatisfiableError, BoundOverflowError) as exc:
        required = getattr(exc, "required", None)
        extra = f" (required: {required})" if required is not None else ""
        print(f"precondition failed: {exc}{extra}", file=sys.stderr)
        return EXIT_PRECONDITION
    _emit(text, args.output)
    log.info("command=%s seconds=%.3f", args.command, time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
