"""CLI behavior: exit codes, output files, local/server parity."""

import pytest
from fastapi.testclient import TestClient

import gameshift.cli as cli
from gameshift.service.app import create_app

CONFIG = """
replicas = 2

[network]
kind = "lattice"
side = 8

[rates]
lambda = [0.03, 0.04]
mu = [0.03, 0.02]

[run]
horizon = 50
tail = 20
burn_in = 20
"""


@pytest.fixture()
def config_file(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(CONFIG)
    return path


class TestTheory:
    def test_prints_csv(self, capsys):
        assert cli.main(["theory", "--rates", "0.01,0.06:0.04,0.08", "--n", "1000"]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        assert lines[0] == "state,pi,expected_count"
        assert len(lines) == 4
        counts = [float(line.split(",")[2]) for line in lines[1:]]
        assert sum(counts) == pytest.approx(1000.0)
        assert counts[0] == pytest.approx(695.652, abs=1e-3)

    def test_bad_rates_arg(self, capsys):
        assert cli.main(["theory", "--rates", "0.01,0.06"]) == 1
        assert "LAMBDAS:MUS" in capsys.readouterr().err

    def test_invalid_rate_values(self, capsys):
        assert cli.main(["theory", "--rates", "0.0:0.1"]) == 1
        assert "positive" in capsys.readouterr().err


class TestExperiments:
    def test_simulate_writes_files(self, config_file, tmp_path, capsys):
        out = tmp_path / "out"
        rc = cli.main(["simulate", "--config", str(config_file), "--out", str(out)])
        assert rc == 0
        stdout = capsys.readouterr().out
        names = ["timeseries_rep0.csv", "timeseries_rep1.csv", "timeseries.csv",
                 "manifest.json"]
        for name in names:
            assert (out / name).is_file()
            assert f"wrote {out / name}" in stdout

    def test_repeat_runs_identical(self, config_file, tmp_path):
        # same config, same seed: every produced byte must match
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert cli.main(["simulate", "--config", str(config_file), "--out", str(out1)]) == 0
        assert cli.main(["simulate", "--config", str(config_file), "--out", str(out2)]) == 0
        files1 = sorted(p.name for p in out1.iterdir())
        files2 = sorted(p.name for p in out2.iterdir())
        assert files1 == files2 and files1
        for name in files1:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_seed_override_changes_output(self, config_file, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        cli.main(["simulate", "--config", str(config_file), "--out", str(out1), "--seed", "1"])
        cli.main(["simulate", "--config", str(config_file), "--out", str(out2), "--seed", "2"])
        a = (out1 / "timeseries_rep0.csv").read_bytes()
        b = (out2 / "timeseries_rep0.csv").read_bytes()
        assert a != b

    def test_missing_config_file(self, tmp_path, capsys):
        rc = cli.main(["simulate", "--config", str(tmp_path / "nope.toml"),
                       "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "error:" in capsys.readouterr().err

    def test_config_error_exit(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("[network\nbroken")
        rc = cli.main(["simulate", "--config", str(bad), "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "config error:" in capsys.readouterr().err

    def test_kind_mismatch(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.toml"
        cfg.write_text('kind = "mu_curves"\n' + CONFIG
                       + "\n[axes]\nmu1 = [0.02]\nmu2 = [0.02]\n")
        rc = cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "out")])
        assert rc == 1
        assert "not valid here" in capsys.readouterr().err

    def test_sweep_kind(self, tmp_path, capsys):
        cfg = tmp_path / "sweep.toml"
        cfg.write_text('kind = "mu_curves"\n' + CONFIG
                       + "\n[axes]\nmu1 = [0.02]\nmu2 = [0.02]\n")
        out = tmp_path / "out"
        assert cli.main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
        assert (out / "mu_curves.csv").is_file()


class _InProcessTransport:
    """Stand-in for httpx.post that routes into a TestClient."""

    def __init__(self):
        self.client = TestClient(create_app())
        self.calls = 0

    def post(self, url, json=None, timeout=None):
        self.calls += 1
        path = "/" + url.split("/", 3)[3]
        return self.client.post(path, json=json)


@pytest.fixture()
def fake_server(monkeypatch):
    transport = _InProcessTransport()
    monkeypatch.setattr(cli.httpx, "post", transport.post)
    return transport


class TestServerMode:
    def test_theory_parity(self, fake_server, capsys):
        cli.main(["theory", "--rates", "0.01,0.06:0.04,0.08"])
        local = capsys.readouterr().out
        cli.main(["theory", "--rates", "0.01,0.06:0.04,0.08",
                  "--server", "http://example.test"])
        remote = capsys.readouterr().out
        assert fake_server.calls == 1
        assert remote == local

    def test_simulate_parity(self, fake_server, config_file, tmp_path, capsys):
        out_local, out_remote = tmp_path / "local", tmp_path / "remote"
        cli.main(["simulate", "--config", str(config_file), "--out", str(out_local)])
        cli.main(["simulate", "--config", str(config_file), "--out", str(out_remote),
                  "--server", "http://example.test"])
        capsys.readouterr()
        assert fake_server.calls == 1
        for path in sorted(out_local.iterdir()):
            assert (out_remote / path.name).read_bytes() == path.read_bytes()

    def test_server_rejection_reported(self, fake_server, tmp_path, capsys):
        cfg = tmp_path / "bad.toml"
        cfg.write_text('kind = "dist"\n' + CONFIG)
        rc = cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "out"),
                       "--server", "http://example.test"])
        assert rc == 1
        err = capsys.readouterr().err
        assert "server rejected the request (400)" in err

    def test_unreachable_server(self, monkeypatch, tmp_path, config_file, capsys):
        def refuse(url, json=None, timeout=None):
            raise cli.httpx.ConnectError("connection refused")

        monkeypatch.setattr(cli.httpx, "post", refuse)
        rc = cli.main(["simulate", "--config", str(config_file),
                       "--out", str(tmp_path / "out"), "--server", "http://example.test"])
        assert rc == 1
        assert "cannot reach server" in capsys.readouterr().err
