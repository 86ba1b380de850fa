import io
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from saddlevr.dataio import make_synthetic_classification, to_libsvm
from saddlevr.runner import (
    CSV_HEADER,
    RunConfig,
    build_problem,
    default_delta,
    estimate_fstar,
    nnz,
    read_trace,
    run_experiment,
    run_many,
)


@pytest.fixture(scope="module")
def tiny_file(tmp_path_factory):
    ds = make_synthetic_classification(400, 30, 6, seed=21)
    path = tmp_path_factory.mktemp("data") / "tiny.libsvm"
    path.write_text(to_libsvm(ds))
    return str(path)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            RunConfig(problem="svm")
        with pytest.raises(ValueError):
            RunConfig(algo="sgd")
        with pytest.raises(ValueError):
            RunConfig(passes=0)
        with pytest.raises(ValueError):
            RunConfig(lam=-1.0)

    def test_delta_defaults(self):
        assert default_delta(1e-4) == 1e-8
        assert default_delta(1.0) == 1e-8
        assert default_delta(1e-8) == 1e-13
        assert default_delta(0.0) == 1e-13

    def test_nnz_threshold(self):
        x = np.array([0.0, 1e-7, 1.0000001e-7, -2e-7, 5.0])
        assert nnz(x) == 3  # strictly above 1e-7


class TestTraces:
    def test_csv_schema_and_rows(self, tiny_file):
        cfg = RunConfig(data=tiny_file, passes=3, sigma=1e-4, seed=1, fstar=0.0)
        buf = io.StringIO()
        recs = run_experiment(cfg, out_stream=buf)
        lines = buf.getvalue().strip().split("\n")
        assert lines[0] == CSV_HEADER
        assert len(lines) == len(recs) + 1
        assert len(recs) >= 3 * 4  # 4 evaluations per pass by default
        assert recs[-1].pass_no == pytest.approx(3.0)

    def test_rerun_bit_for_bit(self, tiny_file):
        cfg = RunConfig(data=tiny_file, passes=2, sigma=1e-4, seed=7)
        rows1 = [r.csv_row() for r in run_experiment(cfg)]
        rows2 = [r.csv_row() for r in run_experiment(cfg)]
        strip = lambda row: row.rsplit(",", 1)[0]  # wall_ms excluded
        assert [strip(r) for r in rows1] == [strip(r) for r in rows2]

    def test_gap_nan_without_fstar(self, tiny_file):
        cfg = RunConfig(data=tiny_file, passes=1, seed=0)
        recs = run_experiment(cfg)
        assert all(math.isnan(r.gap_avg) for r in recs)

    def test_read_trace_round_trip(self, tiny_file, tmp_path):
        out = tmp_path / "trace.csv"
        cfg = RunConfig(data=tiny_file, passes=1, seed=0, fstar=0.1, out=str(out))
        recs = run_experiment(cfg)
        back = read_trace(str(out))
        assert len(back) == len(recs)
        assert back[0].f_avg == recs[0].f_avg

    def test_avg_iterate_decreases_smoothly(self, tiny_file):
        cfg = RunConfig(data=tiny_file, passes=12, sigma=1e-4, seed=0,
                        estimate_fstar=True)
        recs = run_experiment(cfg)
        fa = [r.f_avg for r in recs if r.pass_no >= 2]
        assert all(b <= a * 1.01 for a, b in zip(fa, fa[1:]))
        gaps = [r.gap_avg for r in recs]
        assert gaps[-1] < gaps[0]
        assert all(g >= 0 for g in gaps)

    def test_pda2_on_box_game_certified_rows(self):
        cfg = RunConfig(problem="box-game", algo="pda2", passes=60, seed=3,
                        eval_every=1.0, game_n=6, game_d=4)
        pr = build_problem(cfg)
        dx2, dy2 = pr.domain_diameters_sq()
        recs = run_experiment(cfg, problem=pr)
        assert len(recs) == 60
        for rec in recs:
            # gap_avg * 2 A_k <= D_X^2 + D_Y^2, with A_k = k/(sqrt(2) R)
            A_k = rec.iter / (math.sqrt(2.0) * pr.R)
            assert rec.gap_avg * 2 * A_k <= (dx2 + dy2) * (1 + 1e-9)

    def test_vrpda2_on_box_game(self):
        cfg = RunConfig(problem="box-game", algo="vrpda2", passes=40, seed=3)
        recs = run_experiment(cfg)
        assert recs[-1].gap_avg < recs[0].gap_avg

    def test_run_many_parallel(self, tiny_file, monkeypatch):
        monkeypatch.setenv("SADDLEVR_THREADS", "2")
        cfgs = [RunConfig(data=tiny_file, passes=1, seed=s) for s in (0, 1, 2)]
        out = run_many(cfgs)
        assert len(out) == 3 and all(len(r) >= 4 for r in out)
        solo = run_experiment(cfgs[0])
        assert [r.f_avg for r in out[0]] == [r.f_avg for r in solo]


class TestEstimateFstar:
    def test_box_game_reaches_known_optimum(self):
        # symmetric game: f* = P(x*) = 0
        cfg = RunConfig(problem="box-game", algo="vrpda2", passes=40, seed=5,
                        delta=1e-8, game_n=8, game_d=4)
        est = estimate_fstar(cfg)
        assert -1e-8 <= est <= 0.05  # f_min - delta, with f_min in [0, small]

    def test_subtraction(self, tiny_file):
        cfg = RunConfig(data=tiny_file, passes=1, seed=0, delta=1e-8)
        est1 = estimate_fstar(cfg)
        cfg2 = RunConfig(data=tiny_file, passes=1, seed=0, delta=0.5)
        est2 = estimate_fstar(cfg2)
        assert est1 - est2 == pytest.approx(0.5 - 1e-8, rel=1e-9)


class TestCli:
    def run_cli(self, *args):
        return subprocess.run([sys.executable, "-m", "saddlevr.cli", *args],
                              capture_output=True, text=True)

    def test_unknown_flag_exits_2(self):
        proc = self.run_cli("run", "--bogus-flag")
        assert proc.returncode == 2

    def test_missing_data_is_error(self):
        proc = self.run_cli("run", "--problem", "svm-elasticnet", "--seed", "0")
        assert proc.returncode == 1
        assert "error" in proc.stderr.lower()

    def test_seed_is_required(self, tiny_file):
        proc = self.run_cli("run", "--data", tiny_file, "--passes", "1")
        assert proc.returncode == 2

    def test_debug_z_mode(self, tiny_file, monkeypatch):
        monkeypatch.setenv("SADDLEVR_DEBUG_Z", "1")
        cfg = RunConfig(data=tiny_file, passes=1, seed=0)
        recs = run_experiment(cfg)
        assert len(recs) >= 4  # debug recomputation does not disturb the run

    def test_run_and_schedule_subcommands(self, tiny_file, tmp_path):
        out = tmp_path / "t.csv"
        proc = self.run_cli("run", "--data", tiny_file, "--passes", "1",
                            "--seed", "0", "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        assert out.read_text().startswith(CSV_HEADER)
        proc = self.run_cli("schedule", "--algo", "vrpda2", "--n", "10", "--k", "25")
        assert proc.returncode == 0
        lines = proc.stdout.strip().split("\n")
        assert lines[0] == "k,a,A,regime"
        assert len(lines) == 26
        assert lines[3].startswith("3,")
