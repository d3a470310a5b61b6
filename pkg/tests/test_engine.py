"""Engine behavior: schedules, sampling, determinism, metrics."""

import dataclasses

import numpy as np
import pytest

from gameshift.engine import (
    ExponentialSchedule,
    FixedSchedule,
    PowerLawSchedule,
    RunMetrics,
    SimConfig,
    cooperation_frequency,
    mean_state_counts,
    next_update_interval,
    relative_error,
    run,
    state_count_histogram,
)
from gameshift.gamespace import TransitionRates, expected_counts
from gameshift.topology import NetworkSpec, build_graph

RATES = TransitionRates(lam=(0.03, 0.04), mu=(0.03, 0.02))


def small_config(**overrides) -> SimConfig:
    base = dict(
        network=NetworkSpec(kind="lattice", side=10),
        rates=RATES,
        horizon=100,
        seed=42,
    )
    base.update(overrides)
    return SimConfig(**base)


class TestSchedules:
    def test_fixed_interval_is_constant(self):
        rng = np.random.default_rng(0)
        sched = FixedSchedule(2.5)
        assert all(next_update_interval(sched, rng) == 2.5 for _ in range(10))

    def test_exponential_mean(self):
        rng = np.random.default_rng(1)
        draws = np.array([next_update_interval(ExponentialSchedule(1.0), rng)
                          for _ in range(100_000)])
        assert abs(draws.mean() - 1.0) < 0.02
        assert np.all(draws >= 0)

    def test_powerlaw_support_and_mean(self):
        # alpha=2.5, xmin=0.6: mean alpha*xmin/(alpha-1) = 1.0 and the
        # survival function is (xmin/x)^alpha.
        sched = PowerLawSchedule(alpha=2.5, xmin=0.6)
        assert sched.mean == 1.0
        rng = np.random.default_rng(2)
        draws = np.array([next_update_interval(sched, rng) for _ in range(200_000)])
        assert np.all(draws >= 0.6)
        assert abs(draws.mean() - 1.0) < 0.02
        # P(X > 2 xmin) = 2^-alpha
        assert abs(np.mean(draws > 1.2) - 2 ** -2.5) < 0.01

    def test_validation(self):
        with pytest.raises(ValueError):
            FixedSchedule(0.0).validate()
        with pytest.raises(ValueError):
            ExponentialSchedule(-1.0).validate()
        with pytest.raises(ValueError):
            PowerLawSchedule(alpha=1.0).validate()
        with pytest.raises(ValueError):
            PowerLawSchedule(xmin=0.0).validate()


class TestSimConfigValidation:
    def test_horizon(self):
        with pytest.raises(ValueError):
            small_config(horizon=0).validate()

    def test_reputation_init(self):
        with pytest.raises(ValueError):
            small_config(rep_mean=5.0).validate()
        with pytest.raises(ValueError):
            small_config(rep_sigma=0.0).validate()

    def test_graph_size_mismatch(self):
        cfg = small_config()
        wrong = build_graph(NetworkSpec(kind="lattice", side=5))
        with pytest.raises(ValueError):
            run(cfg, wrong)


class TestRunShape:
    def test_samples_and_conservation(self):
        cfg = small_config()
        metrics = run(cfg, build_graph(cfg.network))
        assert metrics.n_samples == 101
        np.testing.assert_array_equal(metrics.sample_times, np.arange(101, dtype=float))
        assert metrics.state_counts.shape == (101, 3)
        # Agents are conserved at every sample.
        np.testing.assert_array_equal(metrics.state_counts.sum(axis=1), np.full(101, 100))
        assert np.all((metrics.coop_fraction >= 0) & (metrics.coop_fraction <= 1))

    def test_everyone_starts_in_state_zero(self):
        cfg = small_config()
        metrics = run(cfg, build_graph(cfg.network))
        assert metrics.state_counts[0].tolist() == [100, 0, 0]

    def test_initial_coop_near_half(self):
        cfg = small_config(network=NetworkSpec(kind="lattice", side=40), horizon=1)
        metrics = run(cfg, build_graph(cfg.network))
        assert abs(metrics.coop_fraction[0] - 0.5) < 0.05


class TestDeterminism:
    @pytest.mark.parametrize("schedule", [
        FixedSchedule(1.0),
        FixedSchedule(0.5),
        ExponentialSchedule(1.0),
        PowerLawSchedule(2.5, 0.6),
    ])
    def test_bitwise_repeatability(self, schedule):
        cfg = small_config(schedule=schedule, horizon=50)
        g = build_graph(cfg.network)
        a = run(cfg, g)
        b = run(cfg, g)
        np.testing.assert_array_equal(a.state_counts, b.state_counts)
        np.testing.assert_array_equal(a.coop_fraction, b.coop_fraction)

    def test_seed_changes_trajectory(self):
        cfg = small_config()
        g = build_graph(cfg.network)
        a = run(cfg, g)
        c = run(dataclasses.replace(cfg, seed=43), g)
        assert not np.array_equal(a.coop_fraction, c.coop_fraction)


class TestChainMarginals:
    """The game chains are independent of the strategy dynamics, so the
    sampled state counts must match the closed-form stationary law under
    every schedule."""

    @pytest.mark.parametrize("schedule,tol", [
        (FixedSchedule(1.0), 0.06),
        (ExponentialSchedule(1.0), 0.06),
        (PowerLawSchedule(2.5, 0.6), 0.06),
    ])
    def test_stationary_counts(self, schedule, tol):
        cfg = small_config(network=NetworkSpec(kind="lattice", side=16),
                           schedule=schedule, horizon=600, seed=5)
        metrics = run(cfg, build_graph(cfg.network))
        sim = mean_state_counts(metrics, burn_in=200)
        theory = expected_counts(cfg.rates, 256)
        rel = np.abs(theory - sim) / theory
        assert np.all(rel < tol), f"{schedule}: rel err {rel}"


class TestEventDrivenDynamics:
    def test_strategies_actually_revise(self):
        cfg = small_config(schedule=ExponentialSchedule(1.0), horizon=60)
        metrics = run(cfg, build_graph(cfg.network))
        assert len(np.unique(metrics.coop_fraction)) > 5

    def test_interval_mean_shifts_revision_count(self):
        # Slower clocks mean the cooperator share moves less by the
        # same horizon.
        g = build_graph(NetworkSpec(kind="lattice", side=10))
        fast = run(small_config(schedule=ExponentialSchedule(0.5), horizon=30), g)
        slow = run(small_config(schedule=ExponentialSchedule(50.0), horizon=30), g)
        moved_fast = np.abs(np.diff(fast.coop_fraction)).sum()
        moved_slow = np.abs(np.diff(slow.coop_fraction)).sum()
        assert moved_slow < moved_fast


class TestMetricsHelpers:
    def fabricated(self):
        return RunMetrics(
            sample_times=np.arange(4.0),
            state_counts=np.array([[3, 1], [3, 1], [2, 2], [1, 3]]),
            coop_fraction=np.array([0.5, 0.25, 0.75, 1.0]),
        )

    def test_cooperation_frequency(self):
        m = self.fabricated()
        assert cooperation_frequency(m, 2) == pytest.approx(0.875)
        assert cooperation_frequency(m, 4) == pytest.approx(0.625)
        with pytest.raises(ValueError):
            cooperation_frequency(m, 0)
        with pytest.raises(ValueError):
            cooperation_frequency(m, 5)

    def test_state_count_histogram(self):
        m = self.fabricated()
        hist = state_count_histogram(m, burn_in=1)
        assert hist[0] == {3: pytest.approx(1 / 3), 2: pytest.approx(1 / 3),
                           1: pytest.approx(1 / 3)}
        assert hist[1][1] == pytest.approx(1 / 3)
        for state in hist:
            assert sum(hist[state].values()) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            state_count_histogram(m, burn_in=4)
        with pytest.raises(ValueError):
            state_count_histogram(m, burn_in=-1)

    def test_mean_state_counts(self):
        m = self.fabricated()
        np.testing.assert_allclose(mean_state_counts(m, 2), [1.5, 2.5])

    def test_relative_error(self):
        assert relative_error(100.0, 98.5) == pytest.approx(0.015)
        assert relative_error(-2.0, -1.0) == 0.5
        with pytest.raises(ValueError):
            relative_error(0.0, 1.0)
