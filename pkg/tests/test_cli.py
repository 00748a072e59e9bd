import json
import subprocess
import sys

import pytest

from randman.cli import main

from witness_fixtures import forged_witnesses, honest_witnesses, rot, susp


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_phi0_table_line(tmp_path, capsys):
    f = write(tmp_path, "x.json", {"plus": {"atoms": [{"id": "a", "mass": "1/2"}, {"id": "b", "mass": "1"}]}})
    code, out, _ = run(capsys, "--format", "table", "phi0", f)
    assert code == 0 and out == "phi0 = 3/2, null_cobordant = false\n"
    code, out, _ = run(capsys, "phi0", f)
    assert json.loads(out) == {"phi0": "3/2", "null_cobordant": False}


def test_pontryagin_table_csv(capsys):
    code, out, _ = run(capsys, "pontryagin-table", "2", "--format", "csv")
    assert code == 0 and out == "2,1+1\n10,25\n9,18\ndet,-45/1\n"
    _, out, _ = run(capsys, "pontryagin-table", "1", "--format", "csv")
    assert out == "1\n3\ndet,3/1\n"


def test_pontryagin_table_empty_and_range(capsys):
    code, out, _ = run(capsys, "pontryagin-table", "0")
    assert code == 0 and json.loads(out) == {"n": 0, "order": [], "matrix": [], "det": "1/1"}
    code, _, err = run(capsys, "pontryagin-table", "6")
    assert code == 2 and "between 0 and 5" in err


def test_json_output_is_deterministic(capsys):
    outs = {run(capsys, "pontryagin-table", "3")[1] for _ in range(3)}
    assert len(outs) == 1
    assert list(json.loads(outs.pop())) == ["n", "order", "matrix", "det"]


def test_solve_target(tmp_path, capsys):
    f = write(tmp_path, "t.json", {"n": 2, "target": {"2": 1, "1+1": 0}})
    code, out, _ = run(capsys, "solve-target", f)
    data = json.loads(out)
    assert code == 0 and data["verified"] and data["check"] == {"2": "1/1", "1+1": "0/1"}
    assert data["components"] == [
        {"manifold": "CP4", "weight": "2/5", "orientation": -1},
        {"manifold": "CP2xCP2", "weight": "5/9", "orientation": 1},
    ]


def test_solve_target_wrong_arity(tmp_path, capsys):
    f = write(tmp_path, "t.json", {"n": 2, "target": [1]})
    code, _, err = run(capsys, "solve-target", f)
    assert code == 2 and "target" in err


def test_parse_error_has_position(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"plus": \n  [oops]}')
    code, _, err = run(capsys, "phi0", str(p))
    assert code == 2 and "bad.json:2:" in err


def test_validation_error_names_field(tmp_path, capsys):
    f = write(tmp_path, "x.json", {"plus": {"atoms": [{"id": "a", "mass": "-1"}]}})
    code, _, err = run(capsys, "phi0", f)
    assert code == 2 and "atoms" in err


@pytest.mark.parametrize("name", sorted(honest_witnesses()))
def test_verify_accepts(tmp_path, capsys, name):
    f = write(tmp_path, "w.json", honest_witnesses()[name].to_json())
    code, out, _ = run(capsys, "suspension", "verify", f)
    assert code == 0 and json.loads(out)["status"] == "ok"


@pytest.mark.parametrize("name", [k for k, w in forged_witnesses().items() if w.kind != "handle"])
def test_verify_rejects(tmp_path, capsys, name):
    f = write(tmp_path, "w.json", forged_witnesses()[name].to_json())
    code, out, _ = run(capsys, "suspension", "verify", f)
    assert code == 3 and json.loads(out)["status"] == "fail"


def test_verify_unknown_exit_code(tmp_path, capsys):
    from randman.cobordism import CobordismWitness
    from randman.measure import Angle

    a, b = susp(rot(Angle(0, 1))), susp(rot(Angle(0, 2)))
    w = CobordismWitness("orientation_inverse", (a,), ((1, a), (-1, b)), {})
    code, out, _ = run(capsys, "suspension", "verify", write(tmp_path, "w.json", w.to_json()))
    assert code == 4 and json.loads(out)["status"] == "unknown"


def test_pair_of_pants_then_verify(tmp_path, capsys):
    spec = {
        "base": {"segments": [{"id": "s", "length": "1"}]},
        "phi": {"segment_map": [{"from": "s", "to": "s", "angle": "1/3"}]},
        "psi": {"segment_map": [{"from": "s", "to": "s", "angle": "1/4"}]},
    }
    code, out, _ = run(capsys, "suspension", "pair-of-pants", write(tmp_path, "pp.json", spec))
    assert code == 0
    code, _, _ = run(capsys, "suspension", "verify", write(tmp_path, "w.json", json.loads(out)))
    assert code == 0


def test_split_and_normal_form(tmp_path, capsys):
    from witness_fixtures import three_cycle

    f = write(tmp_path, "m.json", susp(three_cycle()).to_json())
    code, out, _ = run(capsys, "suspension", "split", f)
    data = json.loads(out)
    assert code == 0 and data["F"]["terms"][0]["base"]["atoms"] == [{"id": "a", "mass": "1/3"}]
    assert data["X_prime"] == {"terms": []}
    code, out, _ = run(capsys, "suspension", "normal-form", f)
    assert code == 0 and json.loads(out)["normal_form"]["orientation"] == 1


def test_stokes_and_expected_value(tmp_path, capsys):
    prism = {
        "base": {"dim": 1, "extent": [0, 1], "n": 1000},
        "vertical": {"atoms": [{"id": "a", "mass": "1/3"}, {"id": "b", "mass": "2/3"}]},
        "forms": {"a": {"degree": 0, "components": ["x**2"]}, "b": {"degree": 0, "components": ["x**2"]}},
    }
    code, out, _ = run(capsys, "stokes", write(tmp_path, "p.json", prism))
    assert code == 0 and list(json.loads(out)) == ["lhs", "rhs", "residual", "order_estimate", "resolution", "tolerance", "pass"]
    code, _, _ = run(capsys, "--tolerance", "0", "stokes", write(tmp_path, "p.json", {**prism, "forms": {
        a: {"degree": 0, "components": ["sin(9*x)"]} for a in "ab"}}))
    assert code == 3
    ev = {"components": [{"id": "CP2", "weight": "1/2"}], "observable": {"CP2": "3"}}
    code, out, _ = run(capsys, "expected-value", write(tmp_path, "e.json", ev))
    assert code == 0 and json.loads(out) == {"expected_value": "3/2"}
    code, _, err = run(capsys, "expected-value", write(tmp_path, "e.json", {**ev, "observable": {}}))
    assert code == 2 and "CP2" in err


def test_chern_weil_cp1(capsys):
    code, out, _ = run(capsys, "chern-weil", "cp1-tautological", "--checks", "independence,whitney")
    data = json.loads(out)
    (entry,) = data["integrals"]
    assert code == 0 and data["pass"] and entry["residual_vs_integer"] <= 1e-3
    assert data["connection_independence"]["pass"] and data["whitney_sum"]["pass"]


def test_chern_weil_tolerance_failure(capsys):
    code, out, _ = run(capsys, "--tolerance", "1e-6", "chern-weil", "cp1-tautological", "--resolution", "50")
    assert code == 3 and not json.loads(out)["pass"]


def test_chern_weil_unknown_geometry(capsys):
    code, _, err = run(capsys, "chern-weil", "klein-bottle")
    assert code == 2 and "unknown geometry" in err


def test_console_script_entry_point():
    done = subprocess.run([sys.executable, "-m", "randman.cli", "pontryagin-table", "1", "--format", "csv"],
                          capture_output=True, text=True)
    assert done.returncode == 0 and done.stdout.startswith("1\n3\n")
