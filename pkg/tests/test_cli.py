import json

import pytest

from polyramsey import PairColoring
from polyramsey.cli import (
    EXIT_CAP,
    EXIT_MALFORMED,
    EXIT_OK,
    EXIT_PRECONDITION,
    EXIT_USAGE,
    EXIT_VERIFY_FAILED,
    main,
)
from polyramsey.serialize import dumps, loads


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(dumps(obj) if not isinstance(obj, str) else obj)
        return str(p)
    return write


def test_generate_fraenkel(capsys):
    code, out, _ = run(capsys, "generate", "fraenkel", "m=3")
    c = loads(out)
    assert code == EXIT_OK and len(c.colors) == 15 and c.declared_bound == 2


def test_generate_random_deterministic(capsys):
    _, a, _ = run(capsys, "generate", "random", "n=10", "k=2", "--seed", "7")
    _, b, _ = run(capsys, "generate", "random", "n=10", "k=2", "seed=7")
    assert a == b


def test_generate_edge_graph(capsys):
    _, out, _ = run(capsys, "generate", "edge-graph", "v=4")
    assert loads(out).n == 6


def test_generate_nwd_and_ie(capsys):
    code, out, _ = run(capsys, "generate", "nwd", "size=8", "depth=4", "points=17")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["coloring"]["n"] == 8 and doc["system"]["kind"] == "interval-system"
    code, out, _ = run(capsys, "generate", "ie", "lengths=5,3")
    assert code == EXIT_OK and json.loads(out)["bound"] == 2


def test_generate_bad_parameters(capsys):
    code, _, err = run(capsys, "generate", "fraenkel")
    assert code == EXIT_USAGE and "m" in err
    code, _, err = run(capsys, "generate", "fraenkel", "m=x")
    assert code == EXIT_USAGE and "m" in err
    assert run(capsys, "generate", "unknown")[0] == EXIT_USAGE
    assert run(capsys, "generate", "random", "n=5")[0] == EXIT_USAGE
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE


def test_extract_all_distinct(capsys, files):
    path = files("c.json", PairColoring.all_distinct(20))
    code, out, _ = run(capsys, "extract", "--input", path, "--target", "5")
    item = json.loads(out)["items"][0]
    assert code == EXIT_OK and item["Y"] == [0, 1, 2, 3, 4] and item["verdict"] == "polychromatic"


def test_extract_fraenkel(capsys, files):
    _, out, _ = run(capsys, "generate", "fraenkel", "m=4")
    path = files("f.json", out)
    code, _, err = run(capsys, "extract", "--input", path, "--target", "3")
    assert code == EXIT_PRECONDITION and "834" in err
    code, out, _ = run(capsys, "extract", "--input", path, "target=3", "best_effort=true")
    assert code == EXIT_OK and json.loads(out)["items"][0]["verdict"] == "polychromatic"


def test_malformed_input(capsys, files):
    path = files("bad.json", '{"kind": "coloring", "n": 3}')
    assert run(capsys, "extract", "--input", path)[0] == EXIT_MALFORMED
    path = files("bad2.json", "{")
    assert run(capsys, "search", "max-poly", "--input", path)[0] == EXIT_MALFORMED
    assert run(capsys, "search", "max-poly", "--input", "/nonexistent/file")[0] == EXIT_USAGE


def test_search_commands(capsys, files):
    _, out, _ = run(capsys, "generate", "fraenkel", "m=3")
    path = files("f3.json", out)
    code, out, _ = run(capsys, "search", "max-poly", "--input", path)
    assert code == EXIT_OK and json.loads(out)["items"][0]["optimum"] == 4
    path = files("const.json", PairColoring.constant(5))
    code, out, _ = run(capsys, "search", "max-mono", "--input", path)
    assert json.loads(out)["items"][0]["optimum"] == 5
    code, out, _ = run(capsys, "search", "rainbow-number", "k=2", "m=3", "cap=8")
    item = json.loads(out)["items"][0]
    assert code == EXIT_OK and item["value"] == 4 and item["certificate_optimum"] < 3


def test_search_caps(capsys, files):
    path = files("ad.json", PairColoring.all_distinct(20))
    assert run(capsys, "search", "max-poly", "--input", path, "--cap", "10")[0] == EXIT_CAP
    code, out, _ = run(capsys, "search", "max-poly", "--input", path, "nodes=5")
    assert code == EXIT_CAP and json.loads(out)["exhaustive"] is False
    code, out, _ = run(capsys, "search", "rainbow-number", "k=2", "m=4", "cap=5")
    assert code == EXIT_CAP and json.loads(out)["items"][0]["value"] is None


def test_weak_selecter_command(capsys, files):
    doc = {"n": 6, "X": [[a, b] for a in range(6) for b in range(a + 1, 6)],
           "P": [[[0, 1], [2, 3]]], "sizes": [3]}
    path = files("ws.json", json.dumps(doc))
    code, out, _ = run(capsys, "search", "weak-selecter", "--input", path)
    item = json.loads(out)["items"][0]
    assert code == EXIT_OK and item["Y"] == [[0, 1], [0, 2], [1, 2]] and item["failed_stage"] is None
    del doc["sizes"]
    path = files("ws_bad.json", json.dumps(doc))
    assert run(capsys, "search", "weak-selecter", "--input", path)[0] == EXIT_MALFORMED


def test_verify_and_report(capsys, tmp_path):
    out_path = str(tmp_path / "v.json")
    code, _, _ = run(capsys, "verify", "tables", "max=50", "--output", out_path)
    assert code == EXIT_OK
    doc = json.loads(open(out_path).read())
    assert doc["ok"] and any(c["name"] == "lim closed form" for c in doc["items"][0]["checks"])
    code, out, _ = run(capsys, "report", "--input", out_path)
    assert code == EXIT_OK and "PASS tables: lim closed form" in out


def test_verify_slalom_alias(capsys):
    code, out, _ = run(capsys, "verify", "slalom", "trials=200", "seed=1", "--format", "csv")
    assert code == EXIT_OK and out.startswith("suite,check")


def test_verify_report_failure_exit(capsys, tmp_path):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"kind": "report", "ok": False, "command": ["verify"], "items": []}))
    assert run(capsys, "report", "--input", str(p))[0] == EXIT_VERIFY_FAILED


def test_verify_unknown_suite_or_parameter(capsys):
    assert run(capsys, "verify", "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "verify", "pigeonhole", "bogus=1")[0] == EXIT_USAGE


def test_verify_determinism(capsys):
    _, a, _ = run(capsys, "verify", "transfer", "trials=5", "seed=3")
    _, b, _ = run(capsys, "verify", "transfer", "trials=5", "seed=3")
    da, db = json.loads(a), json.loads(b)
    da.pop("timing"), db.pop("timing")
    assert da == db


def test_tables_csv(capsys):
    code, out, _ = run(capsys, "tables", "g", "--format", "csv", "max_p=3", "max_n=5", "max_k=4")
    lines = out.splitlines()
    assert code == EXIT_OK and lines[2].split(",")[4] == "305" and "overflow" in lines[4]
    assert run(capsys, "tables", "zzz", "--format", "csv")[0] == EXIT_USAGE
