"""Command-line behavior: exit codes, output files, config merging,
and the reproducibility switch.  Commands run in-process."""

import csv
import io
import json

import pytest

from vkplate.cli import main


def run_cli(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1


def test_no_subcommand_is_usage_error():
    assert run_cli([]) == 1


def test_missing_required_flag():
    assert run_cli(["solve-q"]) == 1
    assert run_cli(["solve-a"]) == 1
    assert run_cli(["compare-baseline"]) == 1


def test_malformed_number():
    assert run_cli(["solve-q", "--Q", "five"]) == 1


def test_unknown_flag():
    assert run_cli(["solve-q", "--Q", "5", "--frobnicate"]) == 1


def test_zero_control_value_rejected():
    assert run_cli(["solve-q", "--Q", "5", "--c0", "0"]) == 1


def test_zero_load_trivial_run(capsys):
    assert run_cli(["solve-q", "--Q", "0", "--order", "1"]) == 0
    out = capsys.readouterr().out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert all(float(r["err"]) == 0.0 for r in rows)


def test_solve_q_writes_history_csv(tmp_path):
    path = tmp_path / "run.csv"
    code = run_cli(["solve-q", "--Q", "5", "--c0", "-0.35", "--order", "10",
                    "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["iteration", "order", "err", "q", "w0_over_h",
                             "wall_ms"]
    assert len(rows) == 11  # orders 0..10
    assert float(rows[-1]["err"]) < 1e-3


def test_json_report_and_auto_control(tmp_path):
    path = tmp_path / "run.json"
    code = run_cli(["solve-q", "--Q", "5", "--order", "10", "--format", "json",
                    "--out", str(path)])
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["config"]["c1"] == -13.0 / 38.0
    assert payload["config"]["c2"] == -13.0 / 38.0


def test_explicit_pair_overrides_c0(tmp_path):
    path = tmp_path / "run.json"
    code = run_cli(["solve-q", "--Q", "5", "--order", "5", "--c0", "-0.4",
                    "--c2", "-0.9", "--format", "json", "--out", str(path)])
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["config"]["c1"] == -0.4
    assert payload["config"]["c2"] == -0.9


def test_deterministic_runs_are_byte_identical(tmp_path):
    argv = ["solve-a", "--a", "5", "--iterate", "--c0", "-0.5",
            "--deterministic"]
    p1, p2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert run_cli(argv + ["--out", str(p1)]) == 0
    assert run_cli(argv + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_divergence_exit_code():
    code = run_cli(["solve-q", "--Q", "1000", "--iterate", "--c0", "-1.5",
                    "--max-iter", "20", "--out", "/dev/null"])
    assert code == 2


def test_unwritable_output_path(tmp_path):
    code = run_cli(["solve-q", "--Q", "1", "--order", "2",
                    "--out", str(tmp_path / "no" / "such" / "dir" / "f.csv")])
    assert code == 1


def test_sweep_schema_and_exit(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code = run_cli(["sweep-c0", "--Q", "5", "--c0-min", "-0.6",
                    "--c0-max", "-0.3", "--c0-step", "0.1",
                    "--sweep-order", "4", "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["c0", "err", "status"]
    assert [float(r["c0"]) for r in rows] == pytest.approx([-0.6, -0.5, -0.4, -0.3])


def test_sweep_requires_exactly_one_target():
    assert run_cli(["sweep-c0"]) == 1
    assert run_cli(["sweep-c0", "--Q", "5", "--a", "5"]) == 1


def test_compare_orders_csv(tmp_path):
    path = tmp_path / "orders.csv"
    code = run_cli(["compare-orders", "--Q", "5", "--c0", "-0.5",
                    "--M-set", "1,2", "--N", "40", "--tol", "1e-8",
                    "--max-iter", "30", "--deterministic", "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["m", "iteration", "err", "wall_ms"]
    assert {r["m"] for r in rows} == {"1", "2"}
    assert all(float(r["wall_ms"]) == 0.0 for r in rows)


def test_compare_baseline_csv(tmp_path):
    path = tmp_path / "baseline.csv"
    code = run_cli(["compare-baseline", "--Q", "10", "--theta", "0.3",
                    "--N", "60", "--tol", "1e-6", "--c0", "-0.5",
                    "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    methods = {r["method"] for r in rows}
    assert methods == {"baseline", "ham"}


def test_curve_command(tmp_path):
    path = tmp_path / "curve.csv"
    code = run_cli(["curve", "--Q", "5", "--order", "20", "--samples", "9",
                    "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["y", "r_over_Ra", "W", "w_over_h"]
    assert len(rows) == 9
    assert float(rows[-1]["W"]) == 0.0


def test_curve_for_prescribed_deflection(tmp_path):
    path = tmp_path / "curve.csv"
    code = run_cli(["curve", "--a", "2", "--order", "30", "--samples", "5",
                    "--out", str(path)])
    assert code == 0
    rows = list(csv.DictReader(path.open()))
    got = abs(float(rows[0]["W"]))
    assert got == pytest.approx(2.0, rel=1e-6)


def test_config_file_supplies_and_flags_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"Q": 5, "c0": -0.35, "order": 8}))
    out = tmp_path / "run.json"
    code = run_cli(["solve-q", "--config", str(cfg), "--order", "4",
                    "--format", "json", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["config"]["order"] == 4  # flag wins
    assert payload["config"]["c1"] == -0.35  # file value survives


def test_config_file_errors(tmp_path):
    missing = tmp_path / "nope.json"
    assert run_cli(["solve-q", "--config", str(missing)]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"Q": 5, "bogus": 1}))
    assert run_cli(["solve-q", "--config", str(bad)]) == 1
    notdict = tmp_path / "arr.json"
    notdict.write_text("[1, 2]")
    assert run_cli(["solve-q", "--config", str(notdict)]) == 1


def test_tables_command_writes_all_seven(tmp_path):
    out = tmp_path / "tables"
    assert run_cli(["tables", "--out-dir", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == [f"table{i}.csv" for i in range(1, 8)]
    rows = list(csv.DictReader((out / "table2.csv").open()))
    assert [round(float(r["w0_over_h"]), 2) for r in rows] == \
        [0.15, 0.29, 0.41, 0.53, 0.62]
    rows = list(csv.DictReader((out / "table6.csv").open()))
    assert float(rows[-1]["q"]) == pytest.approx(132.2, abs=0.2)
