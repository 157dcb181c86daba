"""Tests for sweep orchestration, statistical checks, CSV output, and CLI."""

import json
import re
import subprocess

import numpy as np
import pytest

import onebit.harness as harness
from onebit.cli import main
from onebit.harness import (
    ROOT_TWO_OVER_PI,
    SWEEP_FIELDS,
    ExperimentConfig,
    abs_moment_deviation,
    run_sweep,
    verify_bernoulli_counterexample,
    verify_concentration,
    verify_uniform_concentration,
    write_manifest,
)
from onebit.measurement import gen_gaussian_ensemble
from onebit.recovery import RecoveryError


def small_config(tmp=None, **kw):
    base = dict(task="sweep", n=16, s=2, m_list=[20, 30], trials=2, seed=3)
    base.update(kw)
    if tmp is not None:
        base["output_path"] = str(tmp / "sweep.csv")
    return ExperimentConfig(**base)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_run_sweep_single_row():
    rows = run_sweep(ExperimentConfig(task="sweep", n=2, s=1, m_list=[1],
                                      trials=1, seed=9))
    assert len(rows) == 1
    assert 0.0 <= rows[0].error <= 2.0
    assert rows[0].m == 1 and rows[0].trial == 0


def test_run_sweep_rows_and_order():
    rows = run_sweep(small_config())
    assert [(r.m, r.trial) for r in rows] == [(20, 0), (20, 1), (30, 0), (30, 1)]
    for r in rows:
        assert r.n == 16 and r.s == 2
        assert 0.0 <= r.error <= 2.0
        assert r.l1l2_ratio_in >= 1.0
        assert r.normalization_residual <= 1e-6


def test_run_sweep_row_independence():
    # dropping an m from the plan leaves the surviving rows untouched
    full = run_sweep(small_config())
    only30 = run_sweep(small_config(m_list=[30]))
    kept = [r for r in full if r.m == 30]
    for a, b in zip(kept, only30):
        assert a.seed == b.seed
        assert a.error == b.error
        assert a.l1l2_ratio_out == b.l1l2_ratio_out


def test_run_sweep_csv_determinism(tmp_path):
    cfg1 = small_config(tmp_path)
    run_sweep(cfg1)
    first = (tmp_path / "sweep.csv").read_text(encoding="utf-8")
    run_sweep(cfg1)
    second = (tmp_path / "sweep.csv").read_text(encoding="utf-8")
    # identical bytes in every column except the timing one
    drop = SWEEP_FIELDS.index("wall_time_ms")
    strip = lambda text: [ln.split(",")[:drop] + ln.split(",")[drop + 1:]
                          for ln in text.splitlines()]
    assert strip(first) == strip(second)


def test_sweep_csv_schema_and_format(tmp_path):
    run_sweep(small_config(tmp_path))
    header, data = read_csv(tmp_path / "sweep.csv")
    assert header == SWEEP_FIELDS
    assert len(data) == 4
    float_pat = re.compile(r"-?\d\.\d{11}e[+-]\d{2,}")
    for rec in data:
        row = dict(zip(header, rec))
        assert row["cert_cardinality_ok"] in ("true", "false")
        for name in ("error", "l1l2_ratio_in", "l1l2_ratio_out",
                     "normalization_residual", "wall_time_ms"):
            assert float_pat.fullmatch(row[name]) or row[name] == "nan"
        int(row["n"]); int(row["m"]); int(row["trial"]); int(row["seed"])
    text = (tmp_path / "sweep.csv").read_text(encoding="utf-8")
    assert "\r" not in text


def test_manifest(tmp_path):
    cfg = small_config(tmp_path)
    run_sweep(cfg)
    man = json.loads((tmp_path / "sweep.manifest.json").read_text(encoding="utf-8"))
    assert man["config"]["n"] == 16
    assert man["config"]["m_list"] == [20, 30]
    assert man["config"]["seed"] == 3
    assert "generated_at" in man and "version" in man
    # the timestamp lives in the manifest only, never in the data file
    header, _ = read_csv(tmp_path / "sweep.csv")
    assert "generated_at" not in header


def test_run_sweep_records_error_rows(monkeypatch):
    real = harness.recover

    def flaky(ens, y, tol=None):
        if ens.m == 30:
            raise RecoveryError("synthetic failure")
        return real(ens, y, tol)

    monkeypatch.setattr(harness, "recover", flaky)
    rows = run_sweep(small_config())
    good = [r for r in rows if r.m == 20]
    bad = [r for r in rows if r.m == 30]
    assert all(np.isfinite(r.error) for r in good)
    assert all(np.isnan(r.error) for r in bad)
    assert all(not r.cert_cardinality_ok for r in bad)
    assert all(np.isfinite(r.l1l2_ratio_in) for r in bad)   # input stats survive


def test_run_sweep_all_failures_raise(monkeypatch):
    def broken(ens, y, tol=None):
        raise RecoveryError("synthetic failure")

    monkeypatch.setattr(harness, "recover", broken)
    with pytest.raises(RuntimeError, match="every sweep trial failed"):
        run_sweep(small_config())


def test_abs_moment_deviation_scale_free():
    rows = gen_gaussian_ensemble(500, 8, seed=4).rows
    x = np.arange(1.0, 9.0)
    assert abs(abs_moment_deviation(rows, x)
               - abs_moment_deviation(rows, 5.0 * x)) <= 1e-12
    with pytest.raises(ValueError):
        abs_moment_deviation(rows, np.zeros(8))


def test_verify_concentration_report():
    rep = verify_concentration(16, 2000, trials=30, t=0.05, seed=7)
    assert rep.deviations.shape == (30,)
    assert 0.0 <= rep.exceedance_fraction <= 1.0
    assert rep.exceedance_fraction == np.mean(rep.deviations > 0.05)
    assert abs(rep.mean_abs_moment - ROOT_TWO_OVER_PI) <= 0.05
    # nested events: exceedance can only grow as the threshold shrinks
    assert np.mean(rep.deviations > 0.01) >= np.mean(rep.deviations > 0.02)
    assert (np.diff(rep.fit_fractions) <= 0).all()
    again = verify_concentration(16, 2000, trials=30, t=0.05, seed=7)
    assert np.array_equal(rep.deviations, again.deviations)


def test_verify_uniform_concentration_bound():
    rep = verify_uniform_concentration(64, 4, 5000, sample_count=500,
                                       t=0.1, seed=2)
    assert rep.deviations.shape == (500,)
    assert rep.max_deviation == rep.deviations.max()
    assert rep.max_deviation <= 0.1
    assert not rep.exceeded


def test_verify_uniform_concentration_m_doubling():
    # doubling the rows tightens the sampled supremum for most seeds
    lo, hi = [], []
    for seed in range(20):
        lo.append(verify_uniform_concentration(64, 4, 5000, 300, 0.1,
                                               seed).max_deviation)
        hi.append(verify_uniform_concentration(64, 4, 10000, 300, 0.1,
                                               seed).max_deviation)
    assert np.median(hi) < np.median(lo)


def test_verify_uniform_concentration_single_sample():
    rep = verify_uniform_concentration(16, 2, 1000, sample_count=1,
                                       t=0.05, seed=11)
    assert rep.deviations.shape == (1,)
    assert rep.max_deviation == rep.deviations[0]
    with pytest.raises(ValueError):
        verify_uniform_concentration(16, 2, 1000, sample_count=0, t=0.05, seed=1)


def test_verify_bernoulli_counterexample_report():
    rep = verify_bernoulli_counterexample(n=8, m=500, num_seeds=10, seed=5)
    assert rep.all_identical
    assert all(rep.identical_per_seed)
    assert len(rep.seeds) == 10
    assert rep.gaussian_differs


def test_cli_usage_errors():
    assert main(["sweep", "--frobnicate"]) == 2
    assert main(["frobnicate"]) == 2
    assert main([]) == 2
    assert main(["verify"]) == 2          # --check is required
    assert main(["sweep", "--n", "8", "--s", "2", "--m", ""]) == 2


def test_cli_gen_recover_roundtrip(tmp_path, capsys):
    prefix = str(tmp_path / "inst")
    assert main(["gen", "--n", "8", "--s", "2", "--m", "24",
                 "--seed", "5", "--out", prefix]) == 0
    A = np.loadtxt(prefix + "_matrix.txt", ndmin=2)
    assert A.shape == (24, 8)
    out = str(tmp_path / "dir.txt")
    code = main(["recover", "--matrix", prefix + "_matrix.txt",
                 "--signs", prefix + "_signs.txt",
                 "--signal", prefix + "_signal.txt", "--out", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "status=optimal" in text
    assert "error=" in text
    direction = np.loadtxt(out).ravel()
    assert np.linalg.norm(direction) == pytest.approx(1.0, abs=1e-12)
    x = np.loadtxt(prefix + "_signal.txt").ravel()
    assert np.linalg.norm(direction - x / np.linalg.norm(x)) <= 1.0


def test_cli_recover_synthetic(capsys):
    assert main(["recover", "--n", "12", "--s", "2", "--m", "30",
                 "--seed", "8"]) == 0
    assert "certificate:" in capsys.readouterr().out


def test_cli_recover_bad_inputs(tmp_path, capsys):
    assert main(["recover", "--matrix", str(tmp_path / "missing.txt"),
                 "--signs", str(tmp_path / "missing2.txt")]) == 1
    bad = tmp_path / "signs.txt"
    bad.write_text("1\n2\n-1\n")
    mat = tmp_path / "mat.txt"
    np.savetxt(mat, np.ones((3, 2)))
    assert main(["recover", "--matrix", str(mat), "--signs", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "must be -1, 0, or 1" in err
    # matrix without signs is a usage-level error reported as failure
    assert main(["recover", "--matrix", str(mat)]) == 1


def test_cli_sweep(tmp_path, capsys):
    out = tmp_path / "runs" / "a.csv"
    code = main(["sweep", "--n", "16", "--s", "2", "--m", "20,30",
                 "--trials", "2", "--seed", "3", "--out", str(out)])
    assert code == 0
    header, data = read_csv(out)
    assert header == SWEEP_FIELDS
    assert len(data) == 4
    assert (tmp_path / "runs" / "a.manifest.json").exists()
    assert "median_error" in capsys.readouterr().out


def test_cli_tessellate(tmp_path, capsys):
    out = tmp_path / "tess.csv"
    code = main(["tessellate", "--n", "12", "--s", "2", "--m", "10,20",
                 "--trials", "60", "--seed", "2", "--out", str(out)])
    assert code == 0
    text = capsys.readouterr().out
    assert "max_cell_diameter_lb" in text or "cells=" in text
    header, data = read_csv(out)
    assert header[0] == "m"
    assert len(data) == 2


def test_cli_verify_checks(capsys):
    assert main(["verify", "--check", "bernoulli-counterexample",
                 "--n", "8", "--m", "200", "--trials", "5"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["verify", "--check", "concentration", "--n", "16",
                 "--m", "4000", "--trials", "20", "--seed", "1",
                 "--delta", "0.05"]) == 0
    assert main(["verify", "--check", "separation", "--n", "4",
                 "--trials", "40000", "--seed", "2"]) == 0
    assert main(["verify", "--check", "uniform-concentration", "--n", "32",
                 "--s", "3", "--m", "4000", "--trials", "200",
                 "--seed", "4"]) == 0


def test_console_script_version():
    out = subprocess.run(["onebit", "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "onebit" in out.stdout


def test_manifest_path_derivation(tmp_path):
    cfg = small_config()
    path = write_manifest(cfg, str(tmp_path / "data.csv"))
    assert path.endswith("data.manifest.json")
    assert json.loads(open(path, encoding="utf-8").read())["config"]["task"] == "sweep"
