import csv
import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgfconv.cli import OUTPUT_DIR_ENV, format_number, parse_grid, parse_n_set, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_mgf_row():
    code, out, _ = invoke("mgf", "--model", "frechet", "--t", "-1")
    assert code == 0
    header, row = out.splitlines()
    assert header == "model,t,status,value,error_estimate"
    model, t, status, value, err = row.split(",")
    assert (model, t, status) == ("frechet", "-1", "finite")
    assert abs(float(value) - 0.2797318) < 1e-6 and float(err) >= 0


def test_scan_marks_positive_t_divergent():
    code, out, _ = invoke("scan", "--model", "lognormal", "--t-grid", "-1:1:5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["t"] for r in rows] == ["-1", "-0.5", "0", "0.5", "1"]
    for r in rows:
        assert r["status"] == ("divergent" if float(r["t"]) > 0 else "finite")


def test_theorem1_json():
    code, out, _ = invoke("theorem1", "--family", "pareto_to_frechet", "--interval", "-1,0")
    assert code == 0
    report = json.loads(out)
    for key in ("condition_a", "condition_b", "mgf_convergence"):
        assert report[key]["status"] == "satisfied"
        assert report[key]["evidence"]
    assert report["consistency"] == "consistent"


def test_converge_tables():
    code, out, _ = invoke("converge", "--family", "pareto_to_frechet", "--t-grid", "-1",
                          "--n-set", "10,100")
    assert code == 0
    assert out.splitlines()[0] == "family,n,t,status,value,error_estimate"
    assert len(out.splitlines()) == 3
    code, out, _ = invoke("converge", "--family", "pareto_to_frechet", "--t-grid", "-1",
                          "--n-set", "10,100", "--table", "distance")
    assert out.splitlines()[0] == "n,sup_distance,arg_x"


def test_theorem2_csv():
    code, out, _ = invoke("theorem2", "--family", "pareto_to_frechet", "--t", "-1",
                          "--n-set", "10,100,1000")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    sups = [float(r["sup_distance"]) for r in rows]
    assert sups[0] > sups[1] > sups[2]


def test_mc_seeded():
    args = ("mc", "--model", "frechet", "--count", "10000", "--seed", "7", "--t", "-1")
    first, second = invoke(*args), invoke(*args)
    assert first[0] == 0 and first[1] == second[1]
    row = list(csv.DictReader(io.StringIO(first[1])))[0]
    assert row["seed"] == "7" and row["count"] == "10000"


@pytest.mark.parametrize("argv", [
    ("mgf", "--model", "bogus", "--t", "-1"),
    ("scan", "--model", "frechet", "--t-grid", "1:0:x"),
    ("theorem1", "--family", "pareto_to_frechet", "--interval", "0,-1"),
    ("converge", "--family", "pareto_to_frechet", "--t-grid", "-1", "--n-set", "0,5"),
    ("nope",),
    ("mgf", "--t", "-1"),
])
def test_usage_errors(argv):
    code, out, err = invoke(*argv)
    assert code == 2 and out == "" and err


def test_distinct_diagnostics():
    msgs = {invoke("mgf", "--model", "bogus", "--t", "-1")[2],
            invoke("scan", "--model", "frechet", "--t-grid", "a:b:c")[2]}
    assert len(msgs) == 2


def test_evaluation_failure_exit_one():
    code, _, err = invoke("mc", "--model", "point_mass:1", "--count", "5")
    assert code == 1 and "evaluation failed" in err


def test_unwritable_output(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = invoke("mgf", "--model", "frechet", "--t", "-1", "-o", str(target))
    assert code == 1 and "cannot write" in err


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = invoke("mgf", "--model", "frechet", "--t", "-1")
    assert code == 0 and out == ""
    assert (tmp_path / "mgf.csv").read_text().startswith("model,t,status")


def test_repeated_runs_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert invoke("theorem1", "--family", "degenerate_drift", "--interval", "-1,0",
                      "-o", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_csv_round_trip():
    _, out, _ = invoke("scan", "--model", "frechet", "--t-grid", "-2:0.5:6")
    rows = list(csv.reader(io.StringIO(out)))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(rows[0])
    for row in rows[1:]:
        cells = row[:2] + [row[2]] + [format_number(float(c)) for c in row[3:]]
        writer.writerow(cells)
    assert buf.getvalue() == out


@given(st.floats(allow_nan=False))
def test_format_number_round_trips(v):
    assert float(format_number(v)) == v


def test_format_number_integral():
    assert format_number(-1.0) == "-1" and format_number(7) == "7"


def test_parse_grid():
    assert parse_grid("-1:1:5") == [-1, -0.5, 0, 0.5, 1]
    assert parse_grid("0.5,-1,0.5") == [-1, 0.5]
    assert parse_grid("-0.9:-0.1:3") == [-0.9, -0.5, -0.1]


def test_parse_n_set():
    assert parse_n_set("10,1,10") == [1, 10]
    assert parse_n_set("logspace:1:1000:4") == [1, 10, 100, 1000]
    assert parse_n_set("logspace:1:2:5") == [1, 2]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mgfconv", "mgf", "--model", "uniform",
                           "--t", "1"], capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1].startswith("uniform,1,finite,1.71828182")
