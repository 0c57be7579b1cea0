import json
import subprocess
import sys

import pytest

from eqrr.cli import EXIT_HYPOTHESIS, EXIT_MISMATCH, EXIT_OK, EXIT_SCHEMA, dumps, main, run
from eqrr.io import shipped, shipped_path


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_euler_char_c2f5():
    code, rep = run(["euler-char", shipped_path("c2_f5_euler.json")])
    assert code == EXIT_OK and rep["status"] == "ok"
    assert rep["result"]["class"]["values"] == [{"coefficients": ["1"], "m": 1}] * 2
    assert rep["anchors"]


def test_ra_c2f5_sign():
    code, rep = run(["ra", shipped_path("c2_f5_ra.json")])
    assert code == EXIT_OK
    res = rep["result"]
    assert res["ra"] == 1 and res["closed_form"] == "1"
    assert res["rho_valuation"] == res["rho_valuation_from_class"] == 0


def test_verify_cover_ok():
    code, rep = run(["verify-cover", shipped_path("c2_f5_verify.json")])
    assert code == EXIT_OK and rep["result"]["ok"]


def test_verify_cover_corrupted_exit_3():
    code, rep = run(["verify-cover", shipped_path("as_f2_corrupted.json")])
    assert code == EXIT_MISMATCH
    assert rep["result"]["reports"][0]["diff"]


def test_predict_ulmer_case():
    code, rep = run(["predict", shipped_path("ulmer_predict.json")])
    assert code == EXIT_OK
    pred = rep["result"]["prediction"]
    assert pred["breakdown"]["volume"] == -3 and pred["breakdown"]["z2_correction"] == 0
    assert pred["exponent"] == -3
    assert "regulator" in shipped("ulmer_predict.json")["user_supplied"]


def test_predict_toy_c2():
    code, rep = run(["predict", shipped_path("c2_f5_predict.json")])
    assert code == EXIT_OK and rep["result"]["prediction"]["exponent"] == -3


def test_predict_missing_regulator_exit_1(tmp_path, capsys):
    data = shipped("ulmer_predict.json")
    del data["arithmetic"]["regulator"]
    path = _write(tmp_path, "bad.json", data)
    assert main(["predict", path]) == EXIT_SCHEMA
    err = capsys.readouterr().err
    assert "regulator" in err
    code, rep = run(["predict", path])
    assert rep["location"] == "/arithmetic/regulator"


def test_predict_hypothesis_exit_2(tmp_path):
    data = shipped("ulmer_predict.json")
    data["arithmetic"]["flags"]["weakly_ramified"] = False
    code, rep = run(["predict", _write(tmp_path, "h.json", data)])
    assert code == EXIT_HYPOTHESIS and rep["assumption"] == "weak ramification"


def test_ra_ew_violation_exit_2(tmp_path):
    case = {"cover": {"q": 2, "generators": [[1, 1]]}, "divisor": [{"point": "inf", "n": 0}]}
    code, rep = run(["ra", _write(tmp_path, "ew.json", case)])
    assert code == EXIT_HYPOTHESIS and rep["assumption"] == "wild congruence"


@pytest.mark.parametrize("payload,loc", [
    ({"cover": {"q": 6, "generators": []}}, "/cover"),
    ({"cover": {"q": 5, "generators": [[4]]}}, "/cover/generators/0"),
    ({"cover": {"q": 5, "generators": [[4, 0]]}, "divisor": [{"point": "inf"}]}, "/divisor/0/n"),
    ({"version": 9}, "/version"),
])
def test_schema_errors(tmp_path, payload, loc):
    code, rep = run(["euler-char", _write(tmp_path, "s.json", payload)])
    assert code == EXIT_SCHEMA and rep["location"] == loc


def test_invalid_json(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(["euler-char", str(p)])[0] == EXIT_SCHEMA


def test_wrong_command_for_file():
    code, rep = run(["ra", shipped_path("c2_f5_euler.json")])
    assert code == EXIT_SCHEMA and rep["location"] == "/command"


def test_check_assumptions_ulmer():
    code, rep = run(["check-assumptions", shipped_path("ulmer_assumptions.json")])
    assert code == EXIT_OK
    assert rep["result"]["report"]["j_not_in_Lp"] is True


def test_suite_small_manifest_and_determinism(tmp_path):
    manifest = {"covers": [c for c in shipped("corpus.json")["covers"] if c["id"] in ("mu2-F5", "as-F2")]}
    path = _write(tmp_path, "m.json", manifest)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["suite", path, "--seed", "3", "-o", str(out1)]) == EXIT_OK
    assert main(["suite", path, "--seed", "3", "-o", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()


def test_table_format(capsys):
    assert main(["euler-char", shipped_path("c2_f5_euler.json"), "--format", "table"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("command  euler-char") and "status   ok" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "eqrr", "euler-char", shipped_path("c2_f5_euler.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1]}) == dumps({"a": [1], "b": 1})


def test_wild_stalk_shape_flagged(tmp_path):
    case = {"cover": {"q": 2, "generators": [[1, 1]]}, "divisor": [{"point": "inf", "n": -1}]}
    code, rep = run(["euler-char", _write(tmp_path, "w.json", case)])
    assert code == EXIT_OK and rep["result"]["stalk_shape"] == {"assumed": ["inf"]}
