import csv
import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from tpwalk import cli


def run(args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        rc = cli.main(args)
    return rc, out.getvalue(), err.getvalue()


def test_gen_payload():
    rc, out, _ = run(["gen", "--gen", "example1"])
    assert rc == 0
    doc = json.loads(out)
    assert sorted(doc) == ["F", "O", "expected", "instance", "provenance"]
    assert doc["instance"] == {"m": 2, "n": 3, "u": ["3", "3"], "v": ["2", "2", "2"]}
    assert doc["O"] == [["2", "1", "0"], ["0", "1", "2"]]


def test_gen_requires_generator():
    rc, _, err = run(["gen", "--u", "9,7,3", "--v", "8,6,5"])
    assert rc == 2
    assert "needs --gen" in err


def test_gen_file_feeds_in(tmp_path):
    path = tmp_path / "case.json"
    rc, _, _ = run(["gen", "--gen", "example1", "--out", str(path)])
    assert rc == 0
    rc, out, _ = run(["walk", "--in", str(path), "--kind", "cdfm"])
    assert rc == 0
    assert json.loads(out)["length"] == 1
    rc, out, _ = run(["oracle", "--in", str(path), "--kind", "cde"])
    assert rc == 0
    assert json.loads(out)["value"] == 3


def test_vertices_csv(tmp_path):
    path = tmp_path / "verts.csv"
    rc, _, _ = run(["vertices", "--gen", "example1", "--out", str(path)])
    assert rc == 0
    rows = list(csv.DictReader(path.open()))
    assert len(rows) == 6
    assert set(rows[0]) == {"index", "y1_1", "y1_2", "y1_3", "y2_1", "y2_2", "y2_3"}


def test_adjacency_rows():
    rc, out, _ = run(["adjacency", "--gen", "example1"])
    assert rc == 0
    rows = json.loads(out)
    assert len(rows) == 6
    assert all(row["a"] < row["b"] for row in rows)


def test_diameter_row():
    rc, out, _ = run(["diameter", "--gen", "coincide", "--n", "3"])
    assert rc == 0
    (row,) = json.loads(out)
    assert row == {
        "m": 2, "n": 3, "diameter": 2, "critical_edges": 2,
        "hirsch_bound": 2, "pass": True,
    }


@pytest.mark.parametrize(
    "kind,length", [("cdfm", 1), ("edge2n", 3), ("signcompat", 1)]
)
def test_walk_kinds(kind, length):
    rc, out, _ = run(["walk", "--gen", "example1", "--kind", kind])
    assert rc == 0
    doc = json.loads(out)
    assert doc["pass"] and doc["valid"]
    assert doc["length"] == length


def test_walk_monotone_with_cost(tmp_path):
    cost = tmp_path / "cost.json"
    cost.write_text(json.dumps([[0, 1, 2], [2, 1, 0]]))
    rc, out, _ = run(
        ["walk", "--gen", "example1", "--kind", "monotone2n", "--cost", str(cost)]
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["pass"] and doc["length"] == 3


def test_walk_with_explicit_endpoints(tmp_path):
    src = tmp_path / "from.json"
    dst = tmp_path / "to.json"
    src.write_text(json.dumps([["2", "1", "0"], ["0", "1", "2"]]))
    dst.write_text(json.dumps([["0", "1", "2"], ["2", "1", "0"]]))
    rc, out, _ = run(
        ["walk", "--u", "3,3", "--v", "2,2,2", "--kind", "cdfm",
         "--from", str(src), "--to", str(dst)]
    )
    assert rc == 0
    assert json.loads(out)["length"] == 1


@pytest.mark.parametrize("kind,value", [("cde", 3), ("cdfm", 1)])
def test_oracle_values(kind, value):
    rc, out, _ = run(["oracle", "--gen", "example1", "--kind", kind])
    assert rc == 0
    assert json.loads(out)["value"] == value


def test_oracle_cd_with_k():
    rc, out, _ = run(["oracle", "--gen", "example1", "--kind", "cd", "--k", "1"])
    assert rc == 0
    assert json.loads(out)["value"] is True


def test_perturb_command():
    rc, out, _ = run(
        ["perturb", "--gen", "hirsch_sharp", "--m", "2", "--n", "3",
         "--eps", "1/1024"]
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["pass"] and doc["min_circuits"] == 2
    assert doc["certified"] is False


def test_perturb_certify():
    rc, out, _ = run(
        ["perturb", "--gen", "hirsch_sharp", "--m", "2", "--n", "3", "--certify"]
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["certified"] is True and doc["min_circuits"] == 2


@pytest.mark.parametrize("suite", ["hierarchy", "monotone", "hirsch"])
def test_verify_suites(suite):
    rc, out, _ = run(["verify", "--suite", suite])
    assert rc == 0
    assert all(row["pass"] for row in json.loads(out))


def test_sweep_both_families():
    rc, out, _ = run(["sweep", "--family", "2xn", "--count", "2", "--pairs", "4"])
    assert rc == 0
    rows = json.loads(out)
    assert len(rows) == 2 and all(row["pass"] for row in rows)
    rc, out, _ = run(
        ["sweep", "--family", "3xn", "--count", "1", "--pairs", "4", "--seed", "7"]
    )
    assert rc == 0
    assert all(row["pass"] for row in json.loads(out))


def test_sweep_parallel_matches_serial():
    rc1, out1, _ = run(
        ["sweep", "--family", "2xn", "--count", "2", "--pairs", "3", "--seed", "5"]
    )
    rc2, out2, _ = run(
        ["sweep", "--family", "2xn", "--count", "2", "--pairs", "3", "--seed", "5",
         "--workers", "2"]
    )
    assert rc1 == rc2 == 0
    assert json.loads(out1) == json.loads(out2)


def test_conflicting_sources_fail():
    rc, _, err = run(["oracle", "--gen", "example1", "--u", "3,3", "--v", "2,2,2",
                      "--kind", "cde"])
    assert rc == 2
    assert "error:" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tpwalk.cli", "oracle", "--gen", "example1",
         "--kind", "cde"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == 3
