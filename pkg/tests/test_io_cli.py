import csv
import io
import subprocess
import sys

import pytest

from culturesim import RunConfig
from culturesim.cli import main
from culturesim.experiments import Cell, RunSummary, SweepResult, run, sweep
from culturesim.io import oracle_fitness_dump, parse_axes, write_series_csv, write_summary_csv, write_sweep_csv

from oracle import reference_table


def render(writer, obj=None):
    buf = io.StringIO(newline="")
    writer(obj, buf) if obj is not None else writer(buf)
    return buf.getvalue()


def test_series_csv_format():
    text = render(write_series_csv, run(RunConfig(broadcast_enabled=True, seed=1)))
    lines = text.split("\n")
    assert lines[0] == "iteration,mean_fitness,diversity,best_fitness,leader_action_share"
    assert lines[1] == "0,0.000000,1,0.000000,1.000000"
    assert text.endswith("\n") and "\r" not in text
    assert len(text.splitlines()) == 102


def test_series_csv_no_leader():
    text = render(write_series_csv, run(RunConfig(seed=1, iterations=3)))
    assert text.splitlines()[1] == "0,0.000000,1,0.000000,0.000000"


def test_series_csv_is_byte_stable():
    s = run(RunConfig(seed=5, iterations=20))
    assert render(write_series_csv, s) == render(write_series_csv, s)


def test_sweep_csv_rows_sorted():
    base = RunConfig(width=4, height=4, iterations=10)
    result = sweep(base, {"broadcast_enabled": (True, False)}, 3, seed0=10)
    rows = list(csv.reader(io.StringIO(render(write_sweep_csv, result))))
    assert rows[0] == ["broadcast_enabled", "seed", "final_mean_fitness", "final_diversity", "convergence_iteration"]
    data = rows[1:]
    assert len(data) == 6
    assert [r[0] for r in data] == ["false"] * 3 + ["true"] * 3
    assert [int(r[1]) for r in data] == [13, 14, 15, 10, 11, 12]


def test_sweep_csv_sentinel():
    cell = Cell((("leader_r_change", 0.4),), (RunSummary(3, 1.5, 2, None, 0.5, 0.0, 100),))
    result = SweepResult((("leader_r_change", (0.4,)),), RunConfig(), 1, 3, (cell,))
    text = render(write_sweep_csv, result)
    assert text.splitlines()[1] == "0.400000,3,1.500000,2,-1"
    summary = render(write_summary_csv, result).splitlines()
    assert summary[0].startswith("leader_r_change,replicates,final_mean_fitness_mean,final_mean_fitness_sd")
    assert summary[1].startswith("0.400000,1,1.500000,0.000000,2.000000,0.000000,101.000000")


def test_oracle_dump_matches_reference():
    rows = list(csv.reader(io.StringIO(render(oracle_fitness_dump))))
    assert rows[0] == ["head", "left_arm", "right_arm", "left_leg", "right_leg", "hips", "fitness"]
    data = rows[1:]
    assert len(data) == 729
    assert [(tuple(map(int, r[:6])), float(r[6])) for r in data] == reference_table()
    assert data[364] == ["0"] * 6 + ["0.000000"]
    assert sum(r[6] == "10.000000" for r in data) == 16


def test_parse_axes():
    assert parse_axes("leader_p_invent=0,0.5;broadcast_enabled=true,false") == [
        ("leader_p_invent", (0.0, 0.5)),
        ("broadcast_enabled", (True, False)),
    ]
    assert parse_axes("width=4,5;") == [("width", (4, 5))]
    for bad in ("", "width", "width=", "colour=1"):
        with pytest.raises(ValueError):
            parse_axes(bad)


def test_cli_run_deterministic(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("broadcast_enabled = true\niterations = 15\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "--config", str(cfg), "--seed", "4", "--out", str(a)]) == 0
    assert main(["run", "--config", str(cfg), "--seed", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 17


def test_cli_sweep(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("width = 4\nheight = 4\niterations = 5\n")
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", "--config", str(cfg), "--axes", "follower_p_invent=0.1,0.3", "--replicates", "2", "--seed0", "7", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    assert [l.split(",")[1] for l in lines[1:]] == ["7", "8", "9", "10"]


def test_cli_sweep_cap(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    rc = main(["sweep", "--axes", "width=4,5", "--replicates", "3", "--max-runs", "5", "--out", str(out)])
    assert rc != 0
    err = capsys.readouterr().err.strip()
    assert err.startswith("error: ConfigError:") and "\n" not in err
    assert not out.exists()


def test_cli_config_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("# comment\nleader_p_invent = 1.5\n")
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 1
    err = capsys.readouterr().err
    assert err.count("\n") == 1
    assert "line 2" in err and "leader_p_invent" in err


def test_cli_missing_config(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "x.csv")]) == 1
    assert capsys.readouterr().err.startswith("error: FileNotFoundError")


def test_cli_oracle(tmp_path):
    out = tmp_path / "oracle.csv"
    assert main(["oracle-fitness", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 730


def test_cli_preset_small(tmp_path):
    rc = main(["preset", "e1", "--replicates", "1", "--seed0", "3", "--out-dir", str(tmp_path)])
    assert rc == 0
    runs = (tmp_path / "e1_runs.csv").read_text().splitlines()
    assert len(runs) == 3 and runs[1].startswith("false,3,")
    assert len((tmp_path / "e1_summary.csv").read_text().splitlines()) == 3


def test_cli_module_entry(tmp_path):
    out = tmp_path / "o.csv"
    proc = subprocess.run([sys.executable, "-m", "culturesim.cli", "oracle-fitness", "--out", str(out)], capture_output=True)
    assert proc.returncode == 0 and out.exists()
    proc = subprocess.run([sys.executable, "-m", "culturesim.cli", "bogus"], capture_output=True)
    assert proc.returncode != 0
