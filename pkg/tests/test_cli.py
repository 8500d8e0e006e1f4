from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from sphtile.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_angles_beta3():
    code, out, _ = run("angles", "--case", "beta3")
    assert code == 0
    vals = dict(line.split(" = ") for line in out.splitlines() if " = " in line)
    assert vals == {"alpha": "0.535845pi", "beta": "0.666667pi", "gamma": "0.398744pi", "x": "0.205913pi"}


def test_angles_earth_map_and_cube():
    assert run("angles", "--case", "earth-map:2")[0] == 0
    assert run("angles", "--case", "cube")[0] == 0


@pytest.mark.parametrize("case", ["nope", "earth-map:1", "earth-map:x"])
def test_angles_bad_case(case):
    code, _, err = run("angles", "--case", case)
    assert code == 3
    assert json.loads(err)["exit_code"] == 3


def test_avc_lists_types():
    code, out, _ = run("avc", "--case", "fusion")
    assert code == 0
    assert "a^1 b^2 c^0" in out and "a^1 b^1 c^2" in out


def test_build_verify_round_trip(tmp_path):
    path = tmp_path / "t.json"
    assert run("build", "sporadic:1", "--out", str(path))[0] == 0
    code, out, _ = run("verify", str(path), "--angles", "sporadic")
    assert code == 0 and "verification passed" in out


def test_verify_corrupted_file(tmp_path):
    path = tmp_path / "t.json"
    run("build", "cube", "--out", str(path))
    d = json.loads(path.read_text())
    rh = next(f for f in d["faces"] if f["kind"] == "rhombus")
    rh["corners"] = ["b", "b", "c", "c"]
    path.write_text(json.dumps(d))
    code, out, _ = run("verify", str(path), "--angles", "cube")
    assert code == 2
    assert "corner_labels" in out.splitlines()[-1]


def test_verify_wrong_angles(tmp_path):
    path = tmp_path / "t.json"
    run("build", "fusion:1", "--out", str(path))
    code, out, _ = run("verify", str(path), "--angles", "sporadic")
    assert code == 2 and "vertex_angle_sums" in out


@pytest.mark.parametrize("content", ["not json", '{"schema": "x"}'])
def test_verify_unreadable(tmp_path, content):
    path = tmp_path / "t.json"
    path.write_text(content)
    code, _, err = run("verify", str(path), "--angles", "cube")
    assert code == 3
    assert set(json.loads(err)) == {"error", "message", "exit_code"}


def test_verify_missing_file(tmp_path):
    assert run("verify", str(tmp_path / "missing.json"), "--angles", "cube")[0] == 3


def test_classify_small(tmp_path):
    rep = tmp_path / "r.json"
    code, out, _ = run("classify", "--max-f", "6", "--report", str(rep), "--out-dir", str(tmp_path / "t"))
    assert code == 0
    assert "1 tilings with f <= 6" in out and "cube" in out
    data = json.loads(rep.read_text())
    assert data["tilings"][0]["id"] == "cube" and data["nodes"] > 0
    assert (tmp_path / "t" / "tiling-00.json").exists()


def test_classify_workers_identical(tmp_path):
    outs = []
    for jobs in ("1", "8"):
        code, out, _ = run("classify", "--max-f", "14", "--jobs", jobs, "--report", str(tmp_path / f"{jobs}.json"))
        assert code == 0
        outs.append([ln for ln in out.splitlines() if not ln.startswith("#")])
    assert outs[0] == outs[1]


def test_classify_budget(tmp_path):
    rep = tmp_path / "r.json"
    code, _, err = run("classify", "--max-f", "14", "--node-cap", "10", "--report", str(rep))
    assert code == 4
    assert json.loads(err)["error"] == "BudgetExceeded"
    assert json.loads(rep.read_text())["node_cap"] == 10


@pytest.mark.parametrize("argv", [["classify", "--max-f", "4"], ["classify", "--max-f", "14", "--jobs", "0"],
                                  ["angles", "--case", "cube", "--tol-vertex", "-1"], ["frobnicate"], []])
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == 3
    assert json.loads(err)["exit_code"] == 3


def test_tolerances_echoed():
    code, out, _ = run("angles", "--case", "fusion", "--tol-vertex", "1e-7", "--tol-embed", "1e-9")
    assert code == 0
    head = out.splitlines()[0]
    assert head.startswith("# sphtile angles")
    assert "tol_vertex=1e-07" in head and "tol_embed=1e-09" in head


def test_render(tmp_path):
    path = tmp_path / "t.json"
    run("build", "earth-map:3", "--out", str(path))
    svg, off = tmp_path / "t.svg", tmp_path / "t.off"
    code, _, _ = run("render", str(path), "--angles", "earth-map:3", "--svg", str(svg), "--off", str(off))
    assert code == 0
    assert svg.read_text().count('class="face ') == 22
    assert off.read_text().splitlines()[1].split()[:2] == ["24", "22"]


def test_render_closure_failure(tmp_path):
    path = tmp_path / "t.json"
    run("build", "cube", "--out", str(path))
    code, _, err = run("render", str(path), "--angles", "fusion", "--svg", str(tmp_path / "x.svg"))
    assert code == 2 and json.loads(err)["error"] == "ClosureFailure"


def test_render_bad_pole(tmp_path):
    path = tmp_path / "t.json"
    run("build", "cube", "--out", str(path))
    code, _, _ = run("render", str(path), "--angles", "cube", "--svg", str(tmp_path / "x.svg"), "--pole", "0,0")
    assert code == 3


def test_plot_c(tmp_path):
    csv = tmp_path / "c.csv"
    code, _, _ = run("plot-c", "--from", "0.005", "--to", "0.4995", "--steps", "1000", "--csv", str(csv))
    assert code == 0
    rows = csv.read_text().splitlines()
    assert rows[0] == "gamma_over_pi,c_value" and len(rows) == 1001


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sphtile", "angles", "--case", "sporadic"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert "0.580431" in res.stdout
