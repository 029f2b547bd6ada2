import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from nested_bernoulli.cli import cobweb_rows, main, parse_grid
from nested_bernoulli.fixedpoint import solve


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.reader(io.StringIO(text)))


def test_compute_csv_shape(capsys):
    code, out, _ = run(capsys, "compute", "--n", "10", "--p0", "0.15", "--k-max", "20", "--format", "csv")
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["k", "p"]
    assert len(rows) == 22
    assert "\r" not in out


def test_compute_first_step_n1(capsys):
    _, out, _ = run(capsys, "compute", "--n", "1", "--p0", "0.5", "--k-max", "1")
    k, p = rows_of(out)[2]
    assert k == "1" and abs(float(p) - 2 / math.pi) < 1e-13


def test_compute_rejects_bad_p0(capsys):
    with pytest.raises(SystemExit) as info:
        main(["compute", "--n", "10", "--p0", "1.5"])
    assert info.value.code == 2


def test_fixed_point_single(capsys):
    code, out, _ = run(capsys, "fixed-point", "--n", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"config", "results", "checks"}
    assert abs(doc["results"][0]["p_n"] - 0.5) < 1e-12
    _, out, _ = run(capsys, "fixed-point", "--n", "10")
    row = dict(zip(*rows_of(out)))
    assert float(row["residual"]) < 1e-12


def test_fixed_point_grid_rows_in_order(capsys):
    code, out, _ = run(capsys, "fixed-point", "--n-grid", "1e2:1e6:geo20")
    rows = rows_of(out)
    assert rows[0] == ["n", "p_n", "residual", "derivative", "iterations", "bracket_lo", "bracket_hi"]
    ns = [int(r[0]) for r in rows[1:]]
    assert ns == parse_grid("1e2:1e6:geo20") and len(ns) == 81


def test_fixed_point_bracketing_failure_exit_code(capsys, monkeypatch):
    from nested_bernoulli import cli
    from nested_bernoulli.fixedpoint import BracketingError

    def broken(n, tol):
        raise BracketingError("no sign change")

    monkeypatch.setattr(cli, "solve", broken)
    code, out, err = run(capsys, "fixed-point", "--n", "5")
    assert code == 3 and out == "" and "no sign change" in err


def test_parse_grid_forms():
    assert parse_grid("3..6") == [3, 4, 5, 6]
    assert parse_grid("1,10,100") == [1, 10, 100]
    assert parse_grid("10:1000:geo1") == [10, 100, 1000]


def test_json_round_trip_bit_exact(capsys):
    _, out, _ = run(capsys, "compute", "--n", "13", "--p0", "1/7", "--k-max", "6", "--format", "json")
    doc = json.loads(out)
    from nested_bernoulli.dynamics import iterate

    expected = iterate(13, 1 / 7, 6).values
    assert [r["p"] for r in doc["results"]] == expected
    assert doc["config"]["p0"] == "1/7"


def test_verify_theorem1(capsys):
    code, out, err = run(capsys, "verify", "theorem1", "--k-max", "5")
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["check", "value", "threshold", "passed"]
    assert all(r[3] == "true" for r in rows[1:])
    assert "checks passed" in err


def test_verify_oracles_json(capsys):
    code, out, _ = run(capsys, "verify", "oracles", "--n-max", "60", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and all(c["passed"] for c in doc["checks"])


def test_verify_lemmas_small(capsys):
    code, out, _ = run(capsys, "verify", "lemmas", "--n-max", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [r["n"] for r in doc["results"]] == [1, 2, 3, 4, 5]
    assert all(r["all_pass"] for r in doc["results"])


def test_verify_failure_exit_code(capsys, monkeypatch):
    from nested_bernoulli.verify import harness

    monkeypatch.setitem(
        harness.TARGETS, "bounds", lambda: ([], [harness.Check("forced", 2.0, 1.0, False)])
    )
    code, out, err = run(capsys, "verify", "bounds")
    assert code == 1
    assert "forced" in out and "FAIL forced" in err


def test_simulate_output(capsys):
    code, out, _ = run(capsys, "simulate", "--n", "10", "--p", "3/10", "--trials", "100000", "--seed", "42")
    assert code == 0
    row = dict(zip(*rows_of(out)))
    assert abs(float(row["frequency"]) - 0.266827932) < 4 * float(row["std_error"])
    assert row["seed"] == "42" and row["m"] == "3"


def test_simulate_non_integer_count(capsys):
    code, out, err = run(capsys, "simulate", "--n", "10", "--p", "0.31", "--trials", "100")
    assert code == 2 and out == "" and "not an integer" in err


def test_simulate_bytes_independent_of_threads(tmp_path):
    outputs = []
    for threads in ("1", "3", "8"):
        env = dict(os.environ, NBT_THREADS=threads)
        proc = subprocess.run(
            [sys.executable, "-m", "nested_bernoulli", "simulate", "--n", "10", "--p", "3/10",
             "--trials", "300000", "--seed", "42", "--format", "json"],
            capture_output=True, env=env, check=True,
        )
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[1] == outputs[2]


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("NBT_THREADS", "zero")
    with pytest.raises(SystemExit) as info:
        main(["compute", "--n", "3", "--p0", "0.5"])
    assert info.value.code == 2


def test_out_path(tmp_path, capsys):
    target = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "compute", "--n", "4", "--p0", "0.5", "--k-max", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("k,p\n")


def test_figure_cobweb_converges(capsys):
    code, out, _ = run(capsys, "figure", "--n", "10", "--p0", "0.15", "--steps", "20")
    assert code == 0
    rows = rows_of(out)
    assert rows[0] == ["segment", "x", "y"]
    web = [(float(x), float(y)) for s, x, y in rows[1:] if s == "cobweb"]
    assert len(web) == 41
    assert web[0] == (0.15, 0.15)


def test_figure_no_steps(capsys):
    _, out, _ = run(capsys, "figure", "--n", "10", "--p0", "0.15", "--steps", "0")
    segments = {r[0] for r in rows_of(out)[1:]}
    assert segments == {"curve", "diagonal"}


def test_figure_at_fixed_point_is_degenerate():
    p10 = solve(10).p_n.value
    web = [(x, y) for s, x, y in cobweb_rows(10, p10, 5) if s == "cobweb"]
    assert all(abs(x - p10) < 1e-13 and abs(y - p10) < 1e-13 for x, y in web)


def test_figure_curve_endpoints():
    curve = [(x, y) for s, x, y in cobweb_rows(10, 0.15, 0, 11) if s == "curve"]
    assert curve[0] == (0.0, 1.0) and curve[-1] == (1.0, 1.0)
