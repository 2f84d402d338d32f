import csv
import io
import json
import subprocess
import sys

import pytest

from slidewin import cli
from slidewin.cli import RunConfig, fmt4, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_oracle_command(capsys):
    code, out, _ = run(["oracle", "--case", "best1", "--n", "6", "--k", "2", "--d", "1"], capsys)
    assert code == 0 and out.strip() == "404/720 = 0.561111"


def test_solve_json(capsys):
    code, out, _ = run(["solve", "--case", "best1", "--n", "6", "--k", "2", "--d", "1", "--format", "json"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["result"]["p_win"] == pytest.approx(0.561111, abs=1e-6)
    assert set(obj["result"]) >= {"n", "k", "case", "thresholds", "p_win"}


def test_solve_text(capsys):
    code, out, _ = run(["solve", "--case", "best2", "--n", "4", "--k", "2", "--d1", "1", "--d2", "1"], capsys)
    assert code == 0 and "p_win=0.9167" in out
    code, out, _ = run(["solve", "-c", "best1", "-n", "5", "-k", "5", "-d", "0", "-f", "json"], capsys)
    assert json.loads(out)["result"]["p_win"] == 1.0


def test_simulate_certain_win(capsys):
    code, out, _ = run(["simulate", "--case", "twochoice", "--n", "10", "--k", "5", "--d1", "0",
                        "--d2", "5", "--trials", "1000", "--seed", "7", "-f", "json"], capsys)
    assert code == 0 and json.loads(out)["result"]["p_hat"] == 1.0


def test_asymptotic_command(capsys):
    code, out, _ = run(["asymptotic", "--case", "best1", "--w", "0.2", "-f", "json"], capsys)
    assert code == 0
    point = json.loads(out)["result"]["points"][0]
    assert point["rho_star"][0] == pytest.approx(0.2635, abs=2e-3)


def test_json_round_trip(capsys):
    argvs = [
        ["solve", "-c", "twochoice", "-n", "9", "-k", "3", "-t", "1,5", "-f", "json"],
        ["oracle", "-c", "best2", "-n", "5", "-k", "2", "-t", "1,2", "-f", "json"],
        ["simulate", "-c", "best1", "-n", "6", "-k", "2", "-d", "1", "-T", "500", "-s", "3", "-f", "json"],
        ["optimize", "-c", "best2", "-n", "6", "-k", "2", "-f", "json"],
        ["asymptotic", "-c", "twochoice", "-w", "0.3", "--n-eff", "500", "-f", "json"],
        ["table", "-c", "best1", "--n-min", "4", "--n-max", "5", "-f", "json"],
    ]
    for argv in argvs:
        code, out, _ = run(argv, capsys)
        assert code == 0
        obj = json.loads(out)
        cfg = RunConfig.from_dict(obj["config"])
        assert cfg.command == argv[0]
        assert cli.run(cfg) == out


def test_csv_columns(capsys):
    code, out, _ = run(["simulate", "-c", "best1", "-n", "6", "-k", "2", "-d", "1", "-T", "100",
                        "-s", "1", "-f", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == cli.CSV_COLUMNS["simulate"]
    assert "\r" not in out


def test_table_best1_reference_rows(capsys):
    code, out, _ = run(["table", "--case", "best1", "--n-min", "10", "--n-max", "10",
                        "--k-min", "2", "--k-max", "7"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["p_win"] for r in rows] == ["0.4774", "0.5634", "0.6566", "0.7544", "0.8544", "0.9210"]
    assert rows[3]["thresholds"] == "0;1"


def test_table_twochoice_certainty(capsys):
    code, out, _ = run(["table", "-c", "twochoice", "--n-min", "4", "--n-max", "10"], capsys)
    for r in csv.DictReader(io.StringIO(out)):
        if 2 * int(r["k"]) >= int(r["n"]):
            assert r["p_win"] == "1.0000"


def test_fmt4_half_even():
    assert fmt4(0.12345) == "0.1234"  # shortest repr is an exact tie
    assert fmt4(0.12355) == "0.1236"
    assert fmt4(1.0) == "1.0000"


def test_exit_codes(capsys, monkeypatch):
    assert run(["table", "-c", "best1", "--n-min", "5", "--n-max", "31"], capsys)[0] == 2
    assert run(["oracle", "-c", "best1", "-n", "12", "-k", "2", "-d", "1"], capsys)[0] == 2
    code, _, err = run(["solve", "-c", "best1", "-n", "3", "-k", "2", "-d", "7"], capsys)
    assert code == 1 and "threshold" in err
    assert run(["solve", "-c", "best1", "-n", "3"], capsys)[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--bogus"])
    assert exc.value.code == 1
    assert run(["solve", "-c", "best1", "-n", "6", "-k", "2", "-d", "1", "--check-oracle"], capsys)[0] == 0
    monkeypatch.setattr(cli, "analytic_win", lambda *a: 0.5)
    code, _, err = run(["solve", "-c", "best1", "-n", "6", "-k", "2", "-d", "1", "--check-oracle"], capsys)
    assert code == 3 and "disagreement" in err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# policy\ncase = best1\nn = 6\nk = 2\nd = 1\nformat = json\n")
    code, out, _ = run(["solve", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["result"]["p_win"] == pytest.approx(404 / 720)
    code, out, _ = run(["solve", "--config", str(cfg), "-k", "6", "-d", "0"], capsys)
    assert json.loads(out)["result"]["p_win"] == 1.0
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(["solve", "--config", str(bad)], capsys)[0] == 1


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run(["optimize", "-c", "best1", "-n", "10", "-k", "5", "-f", "csv", "-o", str(target)], capsys)
    assert code == 0 and out == ""
    rows = list(csv.DictReader(target.open(encoding="utf-8")))
    assert rows[0]["thresholds"] == "0;1"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "slidewin.cli", "oracle", "-c", "best1",
                           "-n", "6", "-k", "2", "-d", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "404/720 = 0.561111"
