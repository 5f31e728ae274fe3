"""JSON interchange documents, one per object kind, tagged with ``"kind"``.

Rationals are written as "p/q" strings, sets as sorted lists.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .cbrank import LabeledTree, SetDescription
from .characteristics import FiniteFunction, Slalom
from .coloring import PairColoring, lex_pairs
from .errors import MalformedInputError, PolyRamseyError
from .extraction import BoundTables, ExtractionCertificate, Step
from .generators import Interval, IntervalSystem, TransferResult
from .search import EdgePartition, SearchResult


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _unq(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"bad rational {s!r}") from exc


def _iv(iv: Interval) -> list[str]:
    return [_q(iv.lo), _q(iv.hi)]


def _univ(x) -> Interval:
    if not isinstance(x, list) or len(x) != 2:
        raise MalformedInputError(f"bad interval {x!r}")
    return Interval(_unq(x[0]), _unq(x[1]))


def _set(x) -> list[int]:
    return sorted(x)


def to_data(obj: Any) -> dict:
    if isinstance(obj, PairColoring):
        return {"kind": "coloring", "n": obj.n, "k": obj.declared_bound,
                "pairs": [[a, b, col] for (a, b), col in obj.items()]}
    if isinstance(obj, BoundTables):
        return {"kind": "bound-tables", "max_p": obj.max_p, "max_n": obj.max_n, "max_k": obj.max_k,
                "max_bits": obj.max_bits,
                "nrm": [list(r) for r in obj.nrm], "ext": [list(r) for r in obj.ext],
                "lim": [list(r) for r in obj.lim], "g": [list(r) for r in obj.g],
                "overflow": [list(o) for o in obj.overflow]}
    if isinstance(obj, ExtractionCertificate):
        return {"kind": "certificate", "coloring_id": obj.coloring_id, "mode": obj.mode,
                "start": list(obj.start), "pool": list(obj.pool), "target": obj.target,
                "output": list(obj.output),
                "steps": [[s.chosen, s.examined, s.pool_size] for s in obj.steps],
                "best_effort": obj.best_effort, "anchor": list(obj.anchor),
                "prior": to_data(obj.prior) if obj.prior is not None else None}
    if isinstance(obj, SearchResult):
        return {"kind": "search-result", "optimum": obj.optimum, "witness": list(obj.witness),
                "nodes_explored": obj.nodes_explored, "exhaustive": obj.exhaustive,
                "all_optimal": [list(w) for w in obj.all_optimal] if obj.all_optimal is not None else None}
    if isinstance(obj, EdgePartition):
        return {"kind": "edge-partition", "n": obj.n, "k": obj.k, "enc": list(obj.enc)}
    if isinstance(obj, IntervalSystem):
        return {"kind": "interval-system", "S": [_q(x) for x in obj.S], "c": [_iv(i) for i in obj.c],
                "S_n": [_set(s) for s in obj.S_n], "a": [[_iv(i) for i in ch] for ch in obj.a],
                "chosen": [[list(p) if p is not None else None for p in row] for row in obj.chosen],
                "b": [[[p, q, *_iv(iv)] for (p, q), iv in sorted(level.items())] for level in obj.b]}
    if isinstance(obj, TransferResult):
        return {"kind": "transfer", "t": [_iv(i) for i in obj.t], "F": [_q(x) for x in obj.F]}
    if isinstance(obj, SetDescription):
        return {"kind": "set-description", "forest": str(obj)}
    if isinstance(obj, LabeledTree):
        return {"kind": "labeled-tree", "labels": "".join(obj.labels), "parents": [list(p) for p in obj.parents]}
    if isinstance(obj, FiniteFunction):
        return {"kind": "function", "table": list(obj.table)}
    if isinstance(obj, Slalom):
        return {"kind": "slalom", "table": [_set(s) for s in obj.table], "width": list(obj.width)}
    raise TypeError(f"no interchange format for {type(obj).__name__}")


def unary_coloring_data(chi: dict) -> dict:
    """Unary coloring on a family of sets; colors are sets of sets."""
    items = sorted(([sorted(x), sorted(sorted(y) for y in col)] for x, col in chi.items()))
    return {"kind": "unary-coloring", "items": items}


def unary_coloring_from_data(d: dict) -> dict:
    return {frozenset(x): frozenset(frozenset(y) for y in col) for x, col in d["items"]}


def _need(d: dict, *keys):
    for key in keys:
        if key not in d:
            raise MalformedInputError(f"missing field {key!r}")


def from_data(d: dict) -> Any:
    if not isinstance(d, dict) or "kind" not in d:
        raise MalformedInputError("document must be an object with a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "coloring":
            return coloring_from_data(d)
        if kind == "bound-tables":
            _need(d, "max_p", "max_n", "max_k", "max_bits", "nrm", "ext", "lim", "g")
            return BoundTables(d["max_p"], d["max_n"], d["max_k"], d["max_bits"],
                               tuple(tuple(r) for r in d["nrm"]), tuple(tuple(r) for r in d["ext"]),
                               tuple(tuple(r) for r in d["lim"]), tuple(tuple(r) for r in d["g"]),
                               tuple(tuple(o) for o in d.get("overflow", [])))
        if kind == "certificate":
            _need(d, "coloring_id", "mode", "start", "pool", "target", "output", "steps")
            return ExtractionCertificate(
                d["coloring_id"], d["mode"], tuple(d["start"]), tuple(d["pool"]), d["target"],
                tuple(d["output"]), tuple(Step(*s) for s in d["steps"]), d.get("best_effort", False),
                tuple(d.get("anchor", [])), from_data(d["prior"]) if d.get("prior") else None)
        if kind == "search-result":
            _need(d, "optimum", "witness", "nodes_explored", "exhaustive")
            opt = d.get("all_optimal")
            return SearchResult(d["optimum"], tuple(d["witness"]), d["nodes_explored"], d["exhaustive"],
                                tuple(tuple(w) for w in opt) if opt is not None else None)
        if kind == "edge-partition":
            _need(d, "n", "k", "enc")
            return EdgePartition(d["n"], d["k"], tuple(d["enc"]))
        if kind == "interval-system":
            _need(d, "S", "c", "S_n", "a", "chosen", "b")
            return IntervalSystem(
                tuple(_unq(x) for x in d["S"]), tuple(_univ(i) for i in d["c"]),
                tuple(frozenset(s) for s in d["S_n"]),
                tuple(tuple(_univ(i) for i in ch) for ch in d["a"]),
                tuple(tuple(tuple(p) if p is not None else None for p in row) for row in d["chosen"]),
                tuple({(p, q): Interval(_unq(lo), _unq(hi)) for p, q, lo, hi in level} for level in d["b"]))
        if kind == "transfer":
            _need(d, "t", "F")
            return TransferResult(tuple(_univ(i) for i in d["t"]), tuple(_unq(x) for x in d["F"]))
        if kind == "set-description":
            _need(d, "forest")
            return SetDescription.parse(d["forest"])
        if kind == "labeled-tree":
            _need(d, "labels", "parents")
            return LabeledTree(tuple(d["labels"]), tuple(tuple(p) for p in d["parents"]))
        if kind == "function":
            _need(d, "table")
            return FiniteFunction(tuple(d["table"]))
        if kind == "slalom":
            _need(d, "table", "width")
            return Slalom(tuple(frozenset(s) for s in d["table"]), tuple(d["width"]))
        if kind == "unary-coloring":
            _need(d, "items")
            return unary_coloring_from_data(d)
    except PolyRamseyError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise MalformedInputError(f"malformed {kind} document: {exc}") from exc
    raise MalformedInputError(f"unknown kind {kind!r}")


def coloring_from_data(d: dict) -> PairColoring:
    _need(d, "n", "k", "pairs")
    n, k = d["n"], d["k"]
    if not isinstance(n, int) or not isinstance(k, int) or isinstance(n, bool) or isinstance(k, bool):
        raise MalformedInputError("fields n and k must be integers")
    if n < 0:
        raise MalformedInputError("field n must be >= 0")
    seen: dict[tuple[int, int], int] = {}
    for entry in d["pairs"]:
        if not isinstance(entry, list) or len(entry) != 3 or not all(isinstance(v, int) for v in entry):
            raise MalformedInputError(f"pair entry {entry!r} is not [a, b, color]")
        a, b, col = entry
        if a == b or not (0 <= a < n and 0 <= b < n):
            raise MalformedInputError(f"({a}, {b}) is not a pair of [{n}]")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise MalformedInputError(f"pair {key} listed twice")
        seen[key] = col
    for p in lex_pairs(n):
        if p not in seen:
            raise MalformedInputError(f"pair {p} has no color")
    return PairColoring.from_mapping(n, seen, k)


def dumps(obj: Any, indent: int | None = None) -> str:
    data = obj if isinstance(obj, dict) else to_data(obj)
    return json.dumps(data, indent=indent, sort_keys=True) + "\n"


def loads(text: str) -> Any:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"not valid JSON: {exc}") from exc
    return from_data(data)
