import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from mtshrink.cli import main
from mtshrink.stat_core import load_csv, sample_covariance

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir(tmp_path, monkeypatch):
    for f in DATA.glob("*.csv"):
        shutil.copy(f, tmp_path)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEstimateMean:
    def test_identical_files(self, data_dir, capsys):
        code, out, _ = run(["estimate-mean", "primary.csv", "--aux", "primary.csv"], capsys)
        assert code == 0
        assert json.loads(out)["lambda"] == pytest.approx([0.5], abs=1e-12)

    def test_wrong_dimension(self, data_dir, capsys):
        code, _, err = run(["estimate-mean", "primary.csv", "--aux", "wrong_dim.csv"], capsys)
        assert code == 2
        assert "wrong_dim.csv" in err and "3" in err and "p=4" in err

    def test_missing_file(self, data_dir, capsys):
        code, _, err = run(["estimate-mean", "primary.csv", "--aux", "nope.csv"], capsys)
        assert code == 2 and "nope.csv" in err

    def test_needs_a_target(self, data_dir, capsys):
        code, _, err = run(["estimate-mean", "primary.csv"], capsys)
        assert code == 2

    def test_golden(self, data_dir, capsys):
        code = main(["estimate-mean", "primary.csv", "--aux", "aux1.csv", "--aux", "aux2.csv", "-o", "out.json"])
        assert code == 0
        assert (data_dir / "out.json").read_bytes() == (DATA / "golden_mean.json").read_bytes()

    def test_target_flag_alias(self, data_dir, capsys):
        _, a, _ = run(["estimate-mean", "primary.csv", "--aux", "aux1.csv"], capsys)
        _, b, _ = run(["estimate-mean", "primary.csv", "--target", "aux:aux1.csv"], capsys)
        assert a == b

    def test_whiten_and_unconstrained(self, data_dir, capsys):
        code, out, _ = run(["estimate-mean", "primary.csv", "--aux", "aux1.csv", "--aux", "aux2.csv",
                            "--whiten", "partial:2", "--no-weight-constraint"], capsys)
        doc = json.loads(out)
        assert code == 0 and sum(doc["lambda"]) <= 1 + 1e-12


class TestEstimateCov:
    def test_identity_schema(self, data_dir, capsys):
        code, out, _ = run(["estimate-cov", "primary.csv", "--target", "identity"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["schema_version"] == 1
        assert set(doc) >= {"estimate", "lambda", "A_hat", "b_hat", "objective"}
        assert 0 <= doc["lambda"][0] <= 1

    def test_aux_same_file(self, data_dir, capsys):
        code, out, _ = run(["estimate-cov", "primary.csv", "--target", "aux:primary.csv"], capsys)
        S = sample_covariance(load_csv("primary.csv"))
        np.testing.assert_allclose(json.loads(out)["estimate"], S, atol=1e-10)

    def test_golden(self, data_dir):
        code = main(["estimate-cov", "primary.csv", "--target", "identity", "--target", "diag",
                     "--target", "const-corr", "--target", "aux:aux1.csv", "--dump-targets", "-o", "out.json"])
        assert code == 0
        assert (data_dir / "out.json").read_bytes() == (DATA / "golden_cov.json").read_bytes()

    def test_unknown_target(self, data_dir, capsys):
        code, _, err = run(["estimate-cov", "primary.csv", "--target", "banana"], capsys)
        assert code == 2 and "banana" in err

    def test_wrong_dimension(self, data_dir, capsys):
        code, _, err = run(["estimate-cov", "primary.csv", "--target", "aux:wrong_dim.csv"], capsys)
        assert code == 2 and "p=4" in err


def write_config(path, **over):
    cfg = {"scenario": "sim1_mean_ldl", "sweep": {"p": [20, 40]}, "reps_model": 3, "reps_noise": 2, "seed": 5}
    cfg.update(over)
    path.write_text(json.dumps(cfg))
    return path


class TestSimulate:
    def test_repeatable(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json")
        for tag in ("a", "b"):
            assert main(["simulate", str(cfg), "-q", "--records", str(tmp_path / f"{tag}.csv"),
                         "--summary", str(tmp_path / f"{tag}.json")]) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_summary_entries(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        main(["simulate", str(cfg), "-q", "--records", str(tmp_path / "r.csv"), "--summary", str(tmp_path / "s.json")])
        summary = json.loads((tmp_path / "s.json").read_text())
        assert summary["schema_version"] == 1
        keys = {(e["sweep_index"], e["estimator"]) for e in summary["entries"]}
        assert len(keys) == len(summary["entries"]) == 2 * 7

    def test_seed_flag_overrides(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", seed=5)

        def records(*extra):
            out = tmp_path / "r.csv"
            main(["simulate", str(cfg), "-q", *extra, "--records", str(out), "--summary", str(tmp_path / "s.json")])
            return out.read_bytes()

        from_config = records()
        assert records("--seed", "5") == from_config
        assert records("--seed", "6") != from_config

    def test_random_seed_printed(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"scenario": "sim1_mean_ldl", "sweep": {"p": [20]}, "reps_model": 2,
                                   "reps_noise": 1}))
        main(["simulate", str(cfg), "-q", "--records", str(tmp_path / "r.csv"), "--summary", str(tmp_path / "s.json")])
        err = capsys.readouterr().err
        seed = int(err.split("seed:")[1].split()[0])
        summary = json.loads((tmp_path / "s.json").read_text())
        assert summary["config"]["seed"] == seed

    def test_invalid_scenario(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", scenario="sim9")
        code = main(["simulate", str(cfg), "-q", "--records", str(tmp_path / "r.csv"),
                     "--summary", str(tmp_path / "s.json")])
        err = capsys.readouterr().err
        assert code != 0 and "sim1_mean_ldl" in err and "sim5_csp" in err
        assert not (tmp_path / "r.csv").exists()

    def test_progress_on_stderr(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json")
        main(["simulate", str(cfg), "--records", str(tmp_path / "r.csv"), "--summary", str(tmp_path / "s.json")])
        captured = capsys.readouterr()
        assert "model draws" in captured.err and captured.out == ""

    def test_env_workers(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path / "c.json")
        main(["simulate", str(cfg), "-q", "--records", str(tmp_path / "a.csv"), "--summary", str(tmp_path / "a.json")])
        monkeypatch.setenv("MTS_WORKERS", "2")
        main(["simulate", str(cfg), "-q", "--records", str(tmp_path / "b.csv"), "--summary", str(tmp_path / "b.json")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_no_partial_output_on_failure(tmp_path, monkeypatch):
    from mtshrink import cli

    target = tmp_path / "out.json"
    target.write_text("old")

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(cli.os, "fdopen", boom)
    with pytest.raises(OSError):
        cli._atomic_write({target: "new"})
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_targets_list(capsys):
    code, out, _ = run(["targets-list"], capsys)
    assert code == 0
    for word in ("identity", "diag", "const-corr", "aux:<path>", "sim3_cov_ldl"):
        assert word in out


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mtshrink", "targets-list"], capture_output=True, text=True)
    assert proc.returncode == 0 and "const-corr" in proc.stdout
