import json
import subprocess
import sys
from importlib import resources

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from commontorsion.cli import main, run
from commontorsion.io import load_schema

SCHEMAS = {name: load_schema(name) for name in ("run", "pair", "curve", "torsion", "packet", "search")}
REGISTRY = Registry().with_resources(
    (s["$id"], Resource.from_contents(s)) for s in SCHEMAS.values()
)


def validate(obj, name):
    Draft202012Validator(SCHEMAS[name], registry=REGISTRY).validate(obj)


def cli(*argv):
    code, report = run([str(a) for a in argv])
    validate(report, "run")
    return code, report


def strip_timings(report):
    out = dict(report)
    out.pop("timings")
    return out


@pytest.mark.parametrize("name,kind", [("thm13.pair", "pair"), ("sec3.pair", "pair"),
                                       ("record.curve", "curve"), ("poonen_example.curve", "curve")])
def test_fixtures_match_schemas(name, kind):
    text = resources.files("commontorsion.fixtures").joinpath(name).read_text()
    validate(json.loads(text), kind)


def test_invariants():
    code, rep = cli("invariants", "thm13.pair")
    assert code == 0 and rep["result"]["invariant_pair"] == [0, 4]
    code, rep = cli("invariants", "sec3.pair")
    assert rep["result"]["invariant_pair"] == [3, 1]
    assert rep["result"]["common_branch_values"] == ["1", "2", "3"]


def test_malformed_input(tmp_path):
    bad = tmp_path / "bad.pair"
    bad.write_text('{"covers": [\n  {"model": "Cubic", "params": {"u": 1}}\n]}\n')
    code, rep = cli("invariants", bad)
    assert code == 2 and rep["status"] == "parse-error"
    assert "line" in rep["error"]
    code, rep = cli("invariants", tmp_path / "missing.pair")
    assert code == 2


def test_broken_json(tmp_path):
    bad = tmp_path / "bad.pair"
    bad.write_text('{"covers": [}')
    code, rep = cli("invariants", bad)
    assert code == 2 and "line 1" in rep["error"]


def test_intersect_two_torsion_is_common_branch():
    # with N = 2 the common x-values are exactly the shared branch values
    code, rep = cli("intersect", "sec3.pair", "--max-order", 2)
    assert code == 0 and rep["result"]["count"] == 3
    validate(rep["result"], "torsion")
    code, rep = cli("intersect", "thm13.pair", "--max-order", 2)
    assert rep["result"]["count"] == 0


def test_intersect_small_bound():
    code, rep = cli("intersect", "thm13.pair", "--max-order", 12)
    res = rep["result"]
    validate(res, "torsion")
    assert code == 0 and res["all_orders_divide_bound"]
    assert len(rep["primes"]) == 3
    assert len({e["count"] for e in res["primes"]}) == 1


def test_descend_chain():
    code, rep = cli("descend", "thm13.pair", "--steps", 2, "--max-order", 48)
    assert code == 0
    steps = rep["result"]["steps"]
    assert [s["invariant_before"] for s in steps] == [[0, 4], [2, 2]]
    assert steps[-1]["invariant_after"] == [3, 1]
    assert rep["result"]["size_chain"] == [34, 18, 10]
    assert all(s["doubling_relation"] for s in steps)
    validate(rep["result"]["final_pair"], "pair")


def test_descend_small_bound_is_not_yet_doubled():
    # below stability only I_N <= beta^-1(I'_N) holds
    code, rep = cli("descend", "thm13.pair", "--max-order", 12)
    up, down = rep["result"]["steps"][0]["bounded_sizes"]
    assert up <= 2 * down - 2


def test_ascend_undoes_descend(tmp_path):
    down = tmp_path / "down.pair"
    code, _ = cli("descend", "thm13.pair", "--emit", down)
    assert code == 0
    validate(json.loads(down.read_text()), "pair")
    up = tmp_path / "up.pair"
    code, rep = cli("ascend", down, "--emit", up)
    assert code == 0 and rep["result"]["invariant_after"] == [0, 4]
    a = cli("intersect", "thm13.pair", "--max-order", 6)[1]["result"]["count"]
    b = cli("intersect", up, "--max-order", 6)[1]["result"]["count"]
    assert a == b


def test_descend_needs_common_involution():
    code, rep = cli("descend", "sec3.pair")
    assert code == 3 and rep["status"] == "precondition-failed"


def test_packet_reports(tmp_path):
    code, rep = cli("packet", "record.curve", "--max-order", 12)
    assert code == 0
    validate(rep["result"], "packet")
    assert rep["result"]["formula_holds"]
    assert all(r["in_packet_at_all_primes"] for r in rep["result"]["claimed_x"])


def test_packet_needs_involution(tmp_path):
    curve = tmp_path / "plain.curve"
    curve.write_text(json.dumps({"schema": "commontorsion.curve/1", "field": "QQ",
                                 "model": "Sextic", "coefficients": ["1", "2", "0", "3", "0", "0", "1"]}))
    validate(json.loads(curve.read_text()), "curve")
    code, rep = cli("packet", curve)
    assert code == 3 and rep["status"] == "unsupported"


def test_packet_odd_bound_rejected():
    code, rep = cli("packet", "record.curve", "--max-order", 7)
    assert code == 3 and "even" in rep["error"]


def test_search_tiny_caps_empty():
    code, rep = cli("search", "--m-max", 3, "--n-max", 3)
    assert code == 0 and rep["status"] == "empty"
    validate(rep["result"], "search")


def test_search_small_caps():
    code, rep = cli("search", "--m-max", 4, "--n-max", 4)
    assert code == 0 and rep["status"] in ("found", "none")
    validate(rep["result"], "search")


def test_search_bad_caps():
    code, rep = cli("search", "--m-max", 2)
    assert code == 3


def test_reports_are_deterministic():
    for argv in (("intersect", "thm13.pair", "--max-order", 8),
                 ("packet", "record.curve", "--max-order", 6),
                 ("search", "--m-max", 4, "--n-max", 4)):
        a = json.dumps(strip_timings(cli(*argv)[1]), sort_keys=True)
        b = json.dumps(strip_timings(cli(*argv)[1]), sort_keys=True)
        assert a == b


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("COMMONTORSION_SEED", "5")
    code, rep = cli("intersect", "sec3.pair", "--max-order", 2)
    assert rep["seed"] == 5
    monkeypatch.setenv("COMMONTORSION_SEED", "five")
    code, rep = cli("intersect", "sec3.pair", "--max-order", 2)
    assert code == 2


def test_main_writes_output(tmp_path):
    out = tmp_path / "r.json"
    assert main(["-o", str(out), "invariants", "sec3.pair"]) == 0
    validate(json.loads(out.read_text()), "run")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "commontorsion.cli", "invariants", "thm13.pair"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["invariant_pair"] == [0, 4]
