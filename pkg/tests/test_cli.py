import subprocess
import sys

import pytest

from zetalab.cli import main

RUN = [sys.executable, "-m", "zetalab"]


def run_cli(args, cwd):
    return subprocess.run(RUN + args, cwd=cwd, capture_output=True, text=True)


def test_scheme_command(tmp_path):
    out = tmp_path / "scheme.csv"
    res = run_cli(
        ["scheme", "--T", "1e5", "--boundaries", "7.389,14,30", "--out", str(out)],
        tmp_path,
    )
    assert res.returncode == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "j,T_j,P_j,range_prime_count"
    assert len(lines) == 4


def test_eval_command_with_cache(tmp_path):
    out = tmp_path / "grid.csv"
    cache = tmp_path / "grid.zml"
    res = run_cli(
        ["eval", "--t-min", "100", "--t-max", "102", "--step", "0.5",
         "--out", str(out), "--cache", str(cache)],
        tmp_path,
    )
    assert res.returncode == 0
    assert out.read_text().splitlines()[0] == "t,Z,Z_prime,theta,theta_prime"
    assert cache.read_bytes()[:4] == b"ZML1"


def test_moments_command(tmp_path):
    out = tmp_path / "m.csv"
    res = run_cli(["moments", "--T", "1e3", "--k", "1", "--h", "0", "--out", str(out)], tmp_path)
    assert res.returncode == 0
    assert "ratio_to_conjectured_power" in out.read_text().splitlines()[0]


def test_inequality_command(tmp_path):
    out = tmp_path / "iq.csv"
    res = run_cli(
        ["inequality", "--samples", "25", "--t-min", "10000", "--t-max", "10050",
         "--k", "1.3", "--out", str(out)],
        tmp_path,
    )
    assert res.returncode == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 26
    assert all(line.endswith(",1") for line in lines[1:])


def test_twisted_command(tmp_path):
    out = tmp_path / "tw.csv"
    res = run_cli(
        ["twisted", "--T", "2e3", "--poly", "one", "--weight", "dzeta2",
         "--nodes", "32", "--out", str(out)],
        tmp_path,
    )
    assert res.returncode == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3  # direct and contour rows
    ratio = float(lines[2].rsplit(",", 1)[1])
    assert 0.5 < ratio < 2.0


def test_exit_codes(tmp_path):
    regime = run_cli(["moments", "--T", "10", "--k", "1", "--h", "0"], tmp_path)
    assert regime.returncode == 3
    assert "kind=regime" in regime.stderr
    capacity = run_cli(["scheme", "--T", "1e5", "--threshold", "0.5",
                        "--sieve-limit", "2000000000"], tmp_path)
    assert capacity.returncode == 4
    assert "kind=capacity" in capacity.stderr
    badflag = run_cli(["moments", "--T", "1e3", "--k", "1"], tmp_path)  # missing --h
    assert badflag.returncode == 2


def test_config_file_flags_win(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("t_min = 100\nt-max = 103\nstep = 0.5\n")
    out = tmp_path / "grid.csv"
    # t-min/t-max are required flags; config cannot replace them, but step
    # comes from the file unless overridden.
    res = run_cli(
        ["eval", "--t-min", "100", "--t-max", "103", "--config", str(cfg),
         "--out", str(out)],
        tmp_path,
    )
    assert res.returncode == 0
    assert len(out.read_text().splitlines()) == 7  # ceil(3 / 0.5) samples
    res2 = run_cli(
        ["eval", "--t-min", "100", "--t-max", "103", "--step", "1.0",
         "--config", str(cfg), "--out", str(out)],
        tmp_path,
    )
    assert res2.returncode == 0
    assert len(out.read_text().splitlines()) == 4  # flag beats the file


def test_config_file_errors(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense line\n")
    res = run_cli(
        ["eval", "--t-min", "100", "--t-max", "101", "--config", str(cfg)], tmp_path
    )
    assert res.returncode == 2
    assert "kind=config" in res.stderr
    cfg.write_text("unknown_key = 3\n")
    res2 = run_cli(
        ["eval", "--t-min", "100", "--t-max", "101", "--config", str(cfg)], tmp_path
    )
    assert res2.returncode == 2


def test_main_callable_in_process(tmp_path):
    out = tmp_path / "m.csv"
    code = main(["moments", "--T", "1e3", "--k", "1", "--h", "0.5", "--out", str(out)])
    assert code == 0
    assert out.exists()
