"""Command-line interface: output formats, config handling, exit codes."""

import json
import math

import numpy as np
import pytest

from wentzell import GaussianBump, Problem, eval_u_smooth
from wentzell.cli import ENGINE_ALIASES, RunConfig, main

SHOWCASE = ["--mu", "1", "--nu", "-0.5", "--f", "gaussian:center=2.5,width=1"]


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def last_csv_value(out):
    header, *rows = out.strip().splitlines()
    return header.split(","), [[float(v) for v in r.split(",")] for r in rows]


def test_eval_closed(capsys):
    code, out, _ = run_cli(capsys, ["eval", *SHOWCASE, "--t", "1", "--x", "0"])
    assert code == 0
    header, rows = last_csv_value(out)
    assert header == ["t", "x", "u"]
    assert rows[0][2] == pytest.approx(-0.6009434984464399, rel=1e-12)


def test_eval_initial_time(capsys):
    code, out, _ = run_cli(capsys, ["eval", *SHOWCASE, "--t", "0", "--x", "2.5"])
    assert code == 0
    assert last_csv_value(out)[1][0][2] == 1.0


def test_eval_engine_aliases_agree(capsys):
    vals = {}
    for engine, tol in (("closed", 1e-12), ("nonsmooth", 1e-8),
                        ("oracle", 1e-7), ("pde", 2e-3)):
        code, out, _ = run_cli(capsys, ["eval", *SHOWCASE, "--engine", engine,
                                        "--t", "1", "--x", "0"])
        assert code == 0
        vals[engine] = last_csv_value(out)[1][0][2]
        assert vals[engine] == pytest.approx(-0.6009434984464399, abs=tol)
    assert set(ENGINE_ALIASES) == {"closed", "nonsmooth", "mc", "pde", "oracle"}


def test_eval_monte_carlo_reports_stderr_and_repeats(capsys):
    argv = ["eval", *SHOWCASE, "--engine", "mc", "--n", "20000", "--seed", "3",
            "--t", "1", "--x", "1"]
    code, out1, _ = run_cli(capsys, argv)
    assert code == 0
    header, rows = last_csv_value(out1)
    assert header == ["t", "x", "u", "stderr"]
    assert rows[0][3] > 0.0
    _, out2, _ = run_cli(capsys, argv)
    assert out1 == out2


def test_field_csv_layout(capsys):
    code, out, _ = run_cli(capsys, ["field", *SHOWCASE,
                                    "--t-grid", "0.5:1:2", "--x-grid", "0:2:3"])
    assert code == 0
    header, rows = last_csv_value(out)
    assert header == ["t", "x", "u"]
    assert len(rows) == 6  # row-major in t, then x
    assert [r[0] for r in rows] == [0.5, 0.5, 0.5, 1.0, 1.0, 1.0]
    assert [r[1] for r in rows[:3]] == [0.0, 1.0, 2.0]
    # %.17g round-trips doubles exactly
    assert rows[3][2] == eval_u_smooth(Problem(1.0, -0.5),
                                       GaussianBump(center=2.5, width=1.0), 1.0, 0.0)


def test_field_json_layout(capsys):
    code, out, _ = run_cli(capsys, ["field", *SHOWCASE, "--format", "json",
                                    "--t-grid", "0.5:1:2", "--x-grid", "0:2:3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["engine"] == "closed_smooth"
    assert doc["mu"] == 1.0 and doc["nu"] == -0.5
    assert len(doc["values"]) == 2 and len(doc["values"][0]) == 3
    assert doc["std_errors"] is None


def test_field_output_file(capsys, tmp_path):
    dest = tmp_path / "field.csv"
    code, out, _ = run_cli(capsys, ["field", *SHOWCASE, "-o", str(dest),
                                    "--t-grid", "1:1:1", "--x-grid", "0:1:2"])
    assert code == 0
    assert out == ""
    assert dest.read_text().startswith("t,x,u\n")


def test_field_worker_invariance(capsys):
    argv = ["field", *SHOWCASE, "--engine", "mc", "--n", "20000", "--seed", "9",
            "--t-grid", "0.5:1:2", "--x-grid", "0:1:2"]
    _, out1, _ = run_cli(capsys, argv + ["--workers", "1"])
    _, out4, _ = run_cli(capsys, argv + ["--workers", "4"])
    assert out1 == out4


def test_compare_engine_with_itself(capsys):
    code, out, _ = run_cli(capsys, ["compare", *SHOWCASE, "--engine", "closed",
                                    "--engine-b", "closed",
                                    "--t-grid", "0.5:1:2", "--x-grid", "0:2:3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["max_abs_diff"] == 0.0
    assert doc["z_score"] is None
    assert doc["engines"] == ["closed", "closed"]
    assert set(doc["timings"]) == {"closed"} or len(doc["timings"]) <= 2


def test_compare_closed_vs_nonsmooth(capsys):
    code, out, _ = run_cli(capsys, ["compare", *SHOWCASE, "--engine", "closed",
                                    "--engine-b", "nonsmooth",
                                    "--t-grid", "0.5:1:2", "--x-grid", "0:2:3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["max_abs_diff"] < 1e-7
    assert {"t", "x"} == set(doc["argmax"])


def test_compare_monte_carlo_z_score(capsys):
    code, out, _ = run_cli(capsys, ["compare", *SHOWCASE, "--engine", "closed",
                                    "--engine-b", "mc", "--n", "40000", "--seed", "1",
                                    "--t-grid", "1:1:1", "--x-grid", "0:1:2"])
    assert code == 0
    doc = json.loads(out)
    assert doc["z_score"] is not None
    assert isinstance(doc["z_ok"], bool)


def test_figure1_dips_negative(capsys):
    code, out, _ = run_cli(capsys, ["figure1", "--t-grid", "2.5:3:2",
                                    "--x-grid", "0:1:3"])
    assert code == 0
    _, rows = last_csv_value(out)
    assert min(r[2] for r in rows) < -15.0


def test_config_file_round_trip(capsys, tmp_path):
    cfg = RunConfig(mu=0.5, nu=0.2, f="expdecay:rate=1", engine="closed",
                    t_grid=[0.5, 1.0, 2], x_grid=[0.0, 2.0, 3])
    path = tmp_path / "run.json"
    path.write_text(cfg.canonical_json())
    _, out_cfg, _ = run_cli(capsys, ["field", "--config", str(path)])
    _, out_flags, _ = run_cli(capsys, ["field", "--mu", "0.5", "--nu", "0.2",
                                       "--f", "expdecay:rate=1",
                                       "--t-grid", "0.5:1:2", "--x-grid", "0:2:3"])
    assert out_cfg == out_flags


def test_config_canonical_idempotent():
    cfg = RunConfig(mu=-0.25, nu=1.0, mc_n=1234, pde_x_max=9.0)
    text = cfg.canonical_json()
    again = RunConfig.from_dict(json.loads(text)).canonical_json()
    assert text == again
    assert json.loads(text)["engine"] == "closed"


def test_flags_override_config(capsys, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(RunConfig(mu=0.0, nu=0.0).canonical_json())
    _, out, _ = run_cli(capsys, ["eval", "--config", str(path), "--mu", "1",
                                 "--nu", "-0.5", "--t", "1", "--x", "0"])
    assert last_csv_value(out)[1][0][2] == pytest.approx(-0.6009434984464399, rel=1e-12)


@pytest.mark.parametrize("argv", [
    ["eval", "--f", "gaussian:center=abc", "--t", "1", "--x", "0"],
    ["eval", *SHOWCASE, "--t", "-1", "--x", "0"],
    ["eval", *SHOWCASE, "--t", "1", "--x", "-2"],
    ["eval", *SHOWCASE, "--engine", "mc", "--n", "1", "--t", "1", "--x", "0"],
])
def test_exit_code_invalid_arguments(capsys, argv):
    code, _, err = run_cli(capsys, argv)
    assert code == 2
    assert "error" in err


def test_malformed_grid_spec_is_usage_error():
    # rejected by the argument parser itself, still exit status 2 for the shell
    with pytest.raises(SystemExit) as exc:
        main(["field", *SHOWCASE, "--t-grid", "1:0.5:2", "--x-grid", "0:1:2"])
    assert exc.value.code == 2


def test_exit_code_numerical_failure(capsys):
    code, _, err = run_cli(capsys, ["field", *SHOWCASE, "--engine", "pde",
                                    "--theta", "0", "--x-max", "12", "--nx", "600",
                                    "--nt", "100", "--t-grid", "1:1:1",
                                    "--x-grid", "0:1:2"])
    assert code == 3
    assert "numerical failure" in err


def test_exit_code_io_failure(capsys, tmp_path):
    code, _, err = run_cli(capsys, ["field", *SHOWCASE, "--t-grid", "1:1:1",
                                    "--x-grid", "0:1:2",
                                    "-o", str(tmp_path / "no" / "dir" / "f.csv")])
    assert code == 4
    code2, _, _ = run_cli(capsys, ["eval", *SHOWCASE, "--config",
                                   str(tmp_path / "absent.json"), "--t", "1", "--x", "0"])
    assert code2 == 4


def test_malformed_config_is_invalid_arguments(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, _ = run_cli(capsys, ["eval", "--config", str(path), "--t", "1", "--x", "0"])
    assert code == 2
    path.write_text(json.dumps([1, 2, 3]))
    code2, _, _ = run_cli(capsys, ["eval", "--config", str(path), "--t", "1", "--x", "0"])
    assert code2 == 2


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_no_color_env_strips_escapes(capsys, monkeypatch):
    monkeypatch.setenv("NO_COLOR", "1")
    _, _, err = run_cli(capsys, ["eval", "--f", "gaussian:center=abc",
                                 "--t", "1", "--x", "0"])
    assert "\x1b[" not in err
