from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from multimicro.cli import CommandResult, main, parse_guard, run
from multimicro.fixtures import load_fixtures, run_fixtures

TAK3 = {"n": 3, "members": [[1, 2, 3], [2, 3], [3]]}
TAK2 = {"n": 2, "members": [[1, 2], [2]]}
ZT = {"dim": 2, "members": [{"ineqs": [[-1, 1], [1, 0]]}]}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return write


def test_shipped_fixtures_reproduce():
    t0 = time.perf_counter()
    rep = run_fixtures()
    assert rep.ok, [r for r in rep.results if r[1]]
    assert len(rep.results) == len(load_fixtures())
    assert time.perf_counter() - t0 < 5


def test_filter_selects_by_tag():
    rep = run_fixtures(flt="majima")
    names = [n for n, _ in rep.results]
    assert names and all("majima" in n for n in names)


def test_corrupted_fixture_is_reported(tmp_path):
    bad = {
        "name": "mislabeled",
        "tags": ["invalid"],
        "kind": "validate",
        "input": {"family": {"n": 3, "members": [[1, 2], [2, 3]]}},
        "expected": {"valid": True},
    }
    (tmp_path / "bad.json").write_text(json.dumps([bad]))
    res = run(["fixtures", "run", "--dir", str(tmp_path)])
    assert res.status == "FALSE"
    assert res.payload["failed"] == 1
    assert res.payload["results"][0]["diagnostics"]


def test_missing_fixture_dir(tmp_path):
    assert main(["fixtures", "run", "--dir", str(tmp_path / "nope")]) == 2


def test_family_derive(files, capsys):
    assert main(["family", "derive", files("f.json", TAK3)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "OK"
    assert out["payload"]["prec"] == {"1": [2, 3], "2": [3], "3": []}
    assert out["payload"]["hatJc"]["1"] == [2, 3]


def test_invalid_family_is_false(files):
    res = run(["family", "validate", files("f.json", {"n": 3, "members": [[1, 2], [2, 3]]})])
    assert res.status == "FALSE" and res.exit_code == 0
    assert not res.payload["ok"]


def test_multicone_command(files):
    res = run(["stalk", "multicone", files("f.json", TAK3), "--dir", "1,1,1", "--m", "4"])
    assert res.status == "OK"
    assert json.loads(res.render()) == res.to_json()


def test_member_verdicts(files):
    fam, Z = files("f.json", TAK2), files("z.json", ZT)
    ok = run(["mnc", "member", fam, Z, "--point", "0,1"])
    assert ok.status == "OK" and ok.payload["verdict"] == "IN"
    out = run(["mnc", "member", fam, Z, "--point", "1,0"])
    assert out.status == "FALSE" and out.payload["verdict"] == "OUT"


def test_certificate_round_trip_through_cli(files):
    fam, Z = files("f.json", TAK2), files("z.json", ZT)
    for pt in ("0,1", "1,0"):
        res = run(["mnc", "member", fam, Z, "--point", pt])
        cert = files("c.json", res.payload["certificate"])
        assert run(["mnc", "verify", fam, Z, "--cert", cert, "--point", pt]).status == "OK"


def test_input_errors(files):
    assert run(["bogus"]).status == "INPUT_ERROR"
    assert main(["bogus"]) == 2
    assert run(["family", "derive", "/nonexistent.json"]).status == "INPUT_ERROR"
    bad = files("bad.json", {"n": 2})
    assert run(["family", "derive", bad]).status == "INPUT_ERROR"
    res = run(["mnc", "member", files("f.json", TAK2), files("z.json", ZT), "--point", "1,2,3"])
    assert res.exit_code == 2 and res.diagnostics


def test_guard_parsing():
    assert parse_guard("ell=3,dim=6") == {"ell": 3, "dim": 6}
    assert run(["--guard", "ell", "family", "derive", "unused.json"]).status == "INPUT_ERROR"


def test_guard_trips_resource(files):
    fam = files("f.json", {"n": 4, "members": [[1, 2, 3, 4], [2, 3, 4], [3, 4], [4]]})
    Z = files("z.json", {"dim": 4, "members": [{"ineqs": [[1, 0, 0, 0]]}]})
    res = run(["--guard", "ell=3", "mnc", "describe", fam, Z])
    assert res.status == "RESOURCE" and res.exit_code == 3


def test_exit_code_table():
    codes = {s: CommandResult(s, None).exit_code for s in ("OK", "FALSE", "INPUT_ERROR", "RESOURCE", "INCONCLUSIVE")}
    assert codes == {"OK": 0, "FALSE": 0, "INPUT_ERROR": 2, "RESOURCE": 3, "INCONCLUSIVE": 3}


def test_output_is_deterministic(files):
    fam = files("f.json", TAK3)
    args = [sys.executable, "-m", "multimicro", "--seed", "7", "family", "derive", fam]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    args[4] = "11"
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["status"] == "OK"


def test_pretty_output(files, capsys):
    main(["--output", "pretty", "family", "validate", files("f.json", TAK3)])
    text = capsys.readouterr().out
    assert text.count("\n") > 3 and json.loads(text)["payload"]["ok"]
