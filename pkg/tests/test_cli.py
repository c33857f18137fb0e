import io
import json
import subprocess
import sys

import pytest

from polar_rm.cli import run
from polar_rm.ratematch import PRESETS


def call(args):
    buf = io.StringIO()
    code = run(args, out=buf)
    return code, buf.getvalue()


def call_json(args):
    code, text = call(args)
    assert code == 0, text
    return json.loads(text)


def stderr_error(capsys):
    return json.loads(capsys.readouterr().err)


def test_psi():
    res = call_json(["psi", "--n", "3", "--j", "4"])
    assert res["family_size"] == 4 and res["member_size"] == 2
    assert sorted(res["patterns"]) == [[0, 4], [1, 5], [2, 6], [3, 7]]


def test_incapable():
    res = call_json(["incapable", "--n", "3", "--puncture", "7,6,3"])
    assert res["incapable"] == [0, 1, 4]
    assert len(res["per_stage"]) == 4


def test_equivalent_and_family_roundtrip(tmp_path):
    res = call_json(["equivalent", "--n", "3", "--incapable", "0,1,2,4,5,6"])
    assert len(res["patterns"]) == 4
    f = tmp_path / "fam.json"
    f.write_text(json.dumps(res))
    assert call_json(["equivalent", "--family", str(f)]) == res


def test_fixed():
    res = call_json(["fixed", "--n", "4", "--shorten", "7,10,11,12,13,14,15"])
    assert res["fixed"] == [7, 10, 11, 12, 13, 14, 15] and res["oracle_agrees"]


def test_posequences_count_list_validate(tmp_path):
    assert call_json(["posequences", "--n", "3", "--count"])["count"] == 48
    res = call_json(["posequences", "--n", "2", "--list"])
    assert res["posequences"] == [[0, 1, 2, 3], [0, 2, 1, 3]] and res["count"] == 2
    good = tmp_path / "good.json"
    PRESETS["unified16"].dump(good)
    assert call_json(["posequences", "--validate", str(good)])["valid"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "order": [0, 1, 3, 2]}))
    res = call_json(["posequences", "--validate", str(bad)])
    assert not res["valid"]
    assert res["violation"]["position_a"] == 2 and res["violation"]["value_b"] == 2


def test_ratematch_and_config_roundtrip(tmp_path):
    res = call_json(["ratematch", "--M", "12", "--K", "4", "--poseq", "unified16"])
    assert res["config"]["mode"] == "puncture"
    assert res["zero_capacity"] == [0, 1, 2, 4]
    assert res["untransmitted"] == [11, 13, 14, 15]
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(res["config"]))
    assert call_json(["ratematch", "--config", str(cfg)]) == res


def test_simulate_and_compare(tmp_path):
    spec = {
        "config": {"M": 12, "K": 4, "mode": "shorten", "posequence": "unified16"},
        "esn0_db": [0.0, 2.0],
        "max_trials": 500,
        "seed": 1,
    }
    a = tmp_path / "a.json"
    a.write_text(json.dumps(spec))
    spec["config"]["mode"] = "puncture"
    b = tmp_path / "b.json"
    b.write_text(json.dumps(spec))
    first = call_json(["simulate", "--spec", str(a)])
    assert first == call_json(["simulate", "--spec", str(a)])
    assert [p["trials"] for p in first["points"]] == [500, 500]
    code, text = call(["simulate", "--spec", str(a), "--format", "csv"])
    assert code == 0 and text.splitlines()[0] == "esn0_db,trials,errors,bler,ci_lo,ci_hi"
    res = call_json(["compare", "--spec-a", str(a), "--spec-b", str(b)])
    assert len(res["points"]) == 2
    code, text = call(["compare", "--spec-a", str(a), "--spec-b", str(b), "--format", "csv"])
    assert code == 0 and len(text.splitlines()) == 3


@pytest.mark.parametrize(
    "argv,code,kind",
    [
        (["psi", "--n", "3"], 2, "argument"),
        (["psi", "--n", "3", "--j", "9"], 2, "argument"),
        (["incapable", "--n", "3", "--puncture", "1,x"], 2, "argument"),
        (["ratematch", "--M", "12", "--K", "13", "--N", "16", "--mode", "puncture"], 2, "argument"),
        (["psi", "--n", "6", "--j", "0"], 3, "unsupported_size"),
        (["posequences", "--n", "5", "--count"], 3, "unsupported_size"),
        (["equivalent", "--n", "3", "--incapable", "0,3"], 4, "invalid_pattern"),
        (["simulate", "--spec", "/nonexistent.json"], 2, "argument"),
    ],
)
def test_exit_codes(argv, code, kind, capsys):
    got, _ = call(argv)
    assert got == code
    assert stderr_error(capsys)["error"] == kind


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "polar_rm", "psi", "--n", "2", "--j", "3"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["patterns"] == [[0, 1, 2, 3]]
