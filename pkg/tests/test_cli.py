import io
import json
import subprocess
import sys

import pytest

from iwasawa_tower.cli import run


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_fpdim_series_json(fixture_path):
    code, out, _ = call(["fpdim", "--file", fixture_path("king_ex1.mod"), "--s-max", "4", "--route", "series"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["config"]["route"] == "series"
    assert [lv["fpdim"] for lv in doc["report"]["levels"]] == [3, 9, 27, 81]
    assert "quantity" in doc["report"]


def test_tower_csv(fixture_path):
    code, out, _ = call(["tower", "--file", fixture_path("trivial_y.mod"), "--s-max", "2", "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "s,rank,fpdim,h1_bound"
    assert lines[2].split(",")[:2] == ["1", "3"]
    assert lines[3].split(",")[:2] == ["2", "9"]


def test_inline_presentation_text():
    code, out, _ = call(["tower", "--presentation", "p=2; n=1; gens=1; rel: x - 1", "--s-max", "2", "--format", "text"])
    assert code == 0
    assert out.startswith("# config: ")


def test_parse_error_exit_1():
    code, _, err = call(["tower", "--presentation", "p=3; n=2; gens=1;\nrel: x + * y"])
    assert code == 1
    assert "line 2" in err and "column" in err


def test_size_cap_exit_2():
    code, _, err = call(["tower", "--presentation", "p=3; n=2; gens=1; rel: y - 1", "--s-max", "3", "--size-cap", "100"])
    assert code == 2
    assert "s=2" in err


def test_missing_input_exit_1():
    code, _, _ = call(["tower"])
    assert code == 1


def test_king_csv_all_residues():
    code, out, _ = call(["king", "--p", "5", "--all-residues-mod", "25", "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "lambda,z0,a0,valuation"
    rows = [l.split(",") for l in lines[2:]]
    assert len(rows) == 25
    for lam, z0, a0, val in rows:
        assert int(val) == (4 if int(lam) % 5 in (2, 3) else 2)


def test_king_rejects_p2():
    code, _, _ = call(["king", "--p", "2", "--lambda", "1"])
    assert code == 1


def test_scan_json(fixture_path):
    code, out, _ = call(["scan", "--file", fixture_path("trivial_y.mod"), "--lambda", "0", "--lambda", "1"])
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["hypothesis_plausible"] is False
    assert {"lower_bound": 6} in [e["fp_dim"] for e in rep["entries"]]


@pytest.mark.parametrize(
    "argv,key,expected",
    [
        (["bounds", "five-term", "--dim-h0", "4", "--n", "3"], "lower", 5),
        (["bounds", "coinvariant", "--d-h", "5", "--n", "4"], "value", 5),
        (["bounds", "wilson", "--d-u", "4", "--k", "2", "--index", "4"], "value", True),
        (["bounds", "d-of-u", "--exponents", "1,2,3", "--p", "3"], "value", 7),
    ],
)
def test_bounds_subcommands(argv, key, expected):
    code, out, _ = call(argv)
    assert code == 0
    assert json.loads(out)["report"][key] == expected


def test_decompose_diag():
    code, out, _ = call(["decompose", "--diag", "1,2,3", "--p", "3", "--D", "12", "--j", "2"])
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["d_of_U"] == rep["d_of_U_direct"] == 7


def test_decompose_matrix_file(tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"p": 3, "D": 8, "rows": [[[0, 1], [0, 0, 1]], [[0, 0, 1], [0, 1]]]}))
    code, out, _ = call(["decompose", "--matrix-file", str(f)])
    assert code == 0
    assert json.loads(out)["report"]["exponents"] == [1, 1]


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "iwasawa_tower.cli", "bounds", "coinvariant", "--d-h", "1", "--n", "2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["report"]["value"] == 0
