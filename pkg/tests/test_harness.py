"""Experiment harness: output files, schemas, manifest, worker dispatch."""

import json

import numpy as np
import pytest

from gameshift.config import parse_config_text
from gameshift.experiments import read_csv, resolve_workers, run_experiment
from gameshift.gamespace import TransitionRates, expected_counts

BASE = """
replicas = 2
seed = 7

[network]
kind = "lattice"
side = 8

[rates]
lambda = [0.03, 0.04]
mu = [0.03, 0.02]

[run]
horizon = 60
tail = 20
burn_in = 30
"""


def run_kind(tmp_path, header, body=""):
    spec = parse_config_text(header + BASE + body)
    return spec, run_experiment(spec, tmp_path)


def column(path, name):
    head, rows = read_csv(path)
    i = head.index(name)
    return [r[i] for r in rows]


class TestTimeseries:
    def test_outputs(self, tmp_path):
        spec, files = run_kind(tmp_path, "")
        names = [f.name for f in files]
        assert names == ["timeseries_rep0.csv", "timeseries_rep1.csv",
                         "timeseries.csv", "manifest.json"]
        head, rows = read_csv(files[0])
        assert head == ["t", "n_G0", "n_G1", "n_G2", "f_c"]
        assert len(rows) == 61
        # per-replica files differ (different seeds), mean file averages them
        assert files[0].read_bytes() != files[1].read_bytes()
        fc0 = np.array(column(files[0], "f_c"), dtype=float)
        fc1 = np.array(column(files[1], "f_c"), dtype=float)
        fcm = np.array(column(files[2], "f_c"), dtype=float)
        assert np.allclose(fcm, (fc0 + fc1) / 2.0)

    def test_counts_sum_to_n(self, tmp_path):
        spec, files = run_kind(tmp_path, "")
        head, rows = read_csv(files[0])
        for row in rows:
            assert sum(int(float(v)) for v in row[1:4]) == 64


class TestDist:
    def test_theory_column_matches_closed_form(self, tmp_path):
        body = '\n[axes]\nparam = "lambda0"\nvalues = [0.01, 0.05]\n'
        spec, files = run_kind(tmp_path, 'kind = "dist"\n', body)
        names = [f.name for f in files]
        assert names == ["dist.csv", "dist_histogram.csv", "manifest.json"]
        head, rows = read_csv(files[0])
        assert head == ["param", "value", "state", "theory_count", "sim_count", "rel_err"]
        assert len(rows) == 6
        for value in (0.01, 0.05):
            rates = TransitionRates(lam=(value, 0.04), mu=(0.03, 0.02))
            want = expected_counts(rates, 64)
            got = [float(r[3]) for r in rows if float(r[1]) == value]
            assert got == pytest.approx(list(want), abs=1e-12)

    def test_histogram_probabilities(self, tmp_path):
        body = '\n[axes]\nparam = "b"\nvalues = [1.5]\n'
        spec, files = run_kind(tmp_path, 'kind = "dist"\n', body)
        head, rows = read_csv(files[1])
        assert head == ["param", "value", "state", "count", "probability"]
        by_state = {}
        for r in rows:
            by_state.setdefault(int(r[2]), 0.0)
            by_state[int(r[2])] += float(r[4])
        for total in by_state.values():
            assert total == pytest.approx(1.0, abs=1e-9)


class TestSweeps:
    def test_mu_curves(self, tmp_path):
        body = "\n[axes]\nmu1 = [0.02, 0.04]\nmu2 = [0.02]\n"
        spec, files = run_kind(tmp_path, 'kind = "mu_curves"\n', body)
        head, rows = read_csv(files[0])
        assert head == ["mu2", "mu1", "fc_mean", "fc_std", "replicas"]
        assert len(rows) == 2
        assert all(r[4] == "2" for r in rows)
        assert all(0.0 <= float(r[2]) <= 1.0 for r in rows)

    def test_lambda_heatmap(self, tmp_path):
        body = "\n[axes]\nlambda0 = [0.02, 0.04]\nlambda1 = [0.03, 0.05]\n"
        spec, files = run_kind(tmp_path, 'kind = "lambda_heatmap"\n', body)
        head, rows = read_csv(files[0])
        assert head == ["lambda1", "lambda0", "fc_mean", "fc_std", "replicas"]
        assert len(rows) == 4
        got = {(r[0], r[1]) for r in rows}
        assert len(got) == 4

    def test_payoff_heatmap_two_passes(self, tmp_path):
        body = "\n[axes]\nb = [1.2, 1.6]\nr = [0.3]\n"
        spec, files = run_kind(tmp_path, 'kind = "payoff_heatmap"\n', body)
        names = [f.name for f in files]
        assert names == ["payoff_heatmap_reputation.csv",
                         "payoff_heatmap_no_reputation.csv", "manifest.json"]
        for f in files[:2]:
            head, rows = read_csv(f)
            assert head == ["b", "r", "fc_mean", "fc_std", "replicas"]
            assert len(rows) == 2

    def test_schedule_compare(self, tmp_path):
        body = ('\n[axes]\nschedules = [{kind = "fixed", interval = 1.0}, '
                '{kind = "exponential", mean = 1.0}]\n')
        spec, files = run_kind(tmp_path, 'kind = "schedule_compare"\n', body)
        head, rows = read_csv(files[0])
        assert head == ["schedule", "t", "fc"]
        labels = sorted({r[0] for r in rows})
        assert labels == ["exponential_1", "fixed_1"]
        assert len(rows) == 2 * 61

    def test_scale_sweep(self, tmp_path):
        body = "\n[axes]\nsizes = [36, 64]\npairs = [{b = 1.3, r = 0.1}]\n"
        spec, files = run_kind(tmp_path, 'kind = "scale_sweep"\n', body)
        names = [f.name for f in files]
        assert names == ["scale_sweep.csv", "scale_sweep_variance.csv", "manifest.json"]
        head, rows = read_csv(files[0])
        assert head == ["pair", "size", "fc_mean", "fc_std", "replicas"]
        assert [r[1] for r in rows] == ["36", "64"]
        assert rows[0][0] == "b=1.3 r=0.1"
        vhead, vrows = read_csv(files[1])
        assert vhead == ["pair", "sizes", "fc_variance"]
        means = [float(r[2]) for r in rows]
        assert float(vrows[0][2]) == pytest.approx(float(np.var(means)))


class TestManifest:
    def test_contents(self, tmp_path):
        spec, files = run_kind(tmp_path, "")
        manifest = json.loads(files[-1].read_text())
        assert manifest["kind"] == "timeseries"
        assert manifest["replicas"] == 2
        assert manifest["base"]["seed"] == 7
        assert manifest["base"]["network"]["side"] == 8
        assert manifest["base"]["rates"]["lambda"] == [0.03, 0.04]
        assert manifest["outputs"] == [f.name for f in files[:-1]]
        assert "seed = base seed + i" in manifest["seed_scheme"]

    def test_byte_reproducible(self, tmp_path):
        # no clock output allowed: two runs must write identical manifests
        spec = parse_config_text(BASE)
        a = run_experiment(spec, tmp_path / "a")[-1]
        b = run_experiment(spec, tmp_path / "b")[-1]
        assert a.read_bytes() == b.read_bytes()


class TestWorkers:
    def test_resolve_precedence(self, monkeypatch):
        monkeypatch.delenv("GAMESHIFT_WORKERS", raising=False)
        assert resolve_workers(None) == 1
        assert resolve_workers(3) == 3
        monkeypatch.setenv("GAMESHIFT_WORKERS", "4")
        assert resolve_workers(None) == 4
        assert resolve_workers(2) == 2

    def test_invalid_env(self, monkeypatch):
        monkeypatch.setenv("GAMESHIFT_WORKERS", "many")
        with pytest.raises(ValueError, match="GAMESHIFT_WORKERS"):
            resolve_workers(None)

    def test_pool_matches_sequential(self, tmp_path):
        spec = parse_config_text(BASE)
        seq = run_experiment(spec, tmp_path / "seq", workers=1)
        par = run_experiment(spec, tmp_path / "par", workers=2)
        for a, b in zip(seq, par):
            assert a.name == b.name
            assert a.read_bytes() == b.read_bytes()


class TestReadCsv:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b\n1,2\n3,4\n")
        head, rows = read_csv(path)
        assert head == ["a", "b"]
        assert rows == [["1", "2"], ["3", "4"]]

    def test_empty_raises(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            read_csv(path)
