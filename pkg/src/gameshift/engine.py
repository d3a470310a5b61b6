"""Simulation engine: runs the coupled game-chain / strategy dynamics.

Time is continuous. Each agent's game chain jumps at exponential times;
strategy revisions happen either in synchronous rounds (fixed schedule)
or per agent at event times drawn from a revision-interval distribution
(exponential or power-law schedules). State is sampled at unit-spaced
times 0, 1, ..., horizon.

Randomness is split into four independent substreams spawned from the
run seed (population init, game chains, revision schedule, revision
decisions), so runs are reproducible bit for bit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .gamespace import GameSpec, TransitionRates, sample_holding_and_target, standard_gamespec
from .population import (
    PopulationState,
    RoundContext,
    UpdateParams,
    _payoff_one,
    _round_inplace,
    draw_initial_game_events,
    fermi_adopt_probability,
    init_population,
    select_neighbor,
    update_reputation,
)
from .topology import Graph, NetworkSpec


@dataclass(frozen=True)
class FixedSchedule:
    """Synchronous revision rounds every ``interval`` time units."""

    interval: float = 1.0

    def validate(self) -> None:
        if self.interval <= 0:
            raise ValueError(f"fixed schedule interval must be positive, got {self.interval}")


@dataclass(frozen=True)
class ExponentialSchedule:
    """Per-agent revision intervals drawn Exp with the given mean."""

    mean: float = 1.0

    def validate(self) -> None:
        if self.mean <= 0:
            raise ValueError(f"exponential schedule mean must be positive, got {self.mean}")


@dataclass(frozen=True)
class PowerLawSchedule:
    """Per-agent revision intervals with a Pareto tail.

    Survival function (xmin / x) ** alpha for x >= xmin; the mean is
    alpha * xmin / (alpha - 1), which the defaults pin at 1.0. Requires
    alpha > 1 so the mean exists.
    """

    alpha: float = 2.5
    xmin: float = 0.6

    def validate(self) -> None:
        if self.alpha <= 1:
            raise ValueError(f"power-law alpha must exceed 1 for a finite mean, got {self.alpha}")
        if self.xmin <= 0:
            raise ValueError(f"power-law xmin must be positive, got {self.xmin}")

    @property
    def mean(self) -> float:
        return self.alpha * self.xmin / (self.alpha - 1.0)


Schedule = FixedSchedule | ExponentialSchedule | PowerLawSchedule


def next_update_interval(schedule: Schedule, rng: np.random.Generator) -> float:
    """Draw the time to an agent's next revision."""
    if isinstance(schedule, FixedSchedule):
        return schedule.interval
    if isinstance(schedule, ExponentialSchedule):
        return float(rng.exponential(schedule.mean))
    if isinstance(schedule, PowerLawSchedule):
        # Inverse survival: 1 - u stays in (0, 1], so the draw is finite.
        return schedule.xmin * float(1.0 - rng.random()) ** (-1.0 / schedule.alpha)
    raise TypeError(f"unknown schedule type {type(schedule).__name__}")


@dataclass(frozen=True)
class SimConfig:
    """Everything one run needs besides the graph itself."""

    network: NetworkSpec = field(default_factory=NetworkSpec)
    rates: TransitionRates = field(default_factory=lambda: TransitionRates(lam=(0.03, 0.03), mu=(0.05, 0.02)))
    b: float = 1.5
    r: float = 0.5
    use_reputation: bool = True
    delta: float = 0.04
    kappa: float = 0.1
    rep_mean: float = 2.0
    rep_sigma: float = 0.6
    schedule: Schedule = field(default_factory=FixedSchedule)
    horizon: int = 10_000
    seed: int = 0

    def validate(self) -> None:
        self.network.validate()
        self.schedule.validate()
        self.update_params().validate()
        if self.horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {self.horizon}")
        if not 0 < self.rep_mean < 4 or self.rep_sigma <= 0:
            raise ValueError(
                f"reputation init must have mean in (0, 4) and positive sigma, "
                f"got mean={self.rep_mean}, sigma={self.rep_sigma}"
            )

    def update_params(self) -> UpdateParams:
        return UpdateParams(kappa=self.kappa, delta=self.delta, use_reputation=self.use_reputation)

    def gamespec(self) -> GameSpec:
        return standard_gamespec(self.b, self.r)


@dataclass(frozen=True)
class RunMetrics:
    """Unit-spaced samples of one run.

    state_counts[t, k] is the number of agents whose game sits in chain
    state k at sample time t; coop_fraction[t] the cooperator share.
    """

    sample_times: np.ndarray
    state_counts: np.ndarray
    coop_fraction: np.ndarray

    @property
    def n_samples(self) -> int:
        return int(self.sample_times.size)


@dataclass
class _ChainTables:
    """Per-state exit rates and up-jump probabilities of the game chain."""

    exit_rate: np.ndarray
    up_prob: np.ndarray

    @staticmethod
    def build(rates: TransitionRates) -> "_ChainTables":
        n = rates.n_states
        lam = np.asarray(rates.lam)
        mu = np.asarray(rates.mu)
        exit_rate = np.empty(n)
        up_prob = np.empty(n)
        exit_rate[0], up_prob[0] = lam[0], 1.0
        exit_rate[n - 1], up_prob[n - 1] = mu[n - 2], 0.0
        for i in range(1, n - 1):
            exit_rate[i] = lam[i] + mu[i - 1]
            up_prob[i] = lam[i] / exit_rate[i]
        return _ChainTables(exit_rate=exit_rate, up_prob=up_prob)


def _advance_chains_to(
    pop: PopulationState, tables: _ChainTables, rng: np.random.Generator, t: float
) -> None:
    """Play out every pending chain jump with time <= t, in waves.

    Chains are independent, so applying all due jumps of one wave at
    once and redrawing their next events is an exact simulation of each
    chain. Holding clocks restart at the jump time, not at t.
    """
    while True:
        due = np.nonzero(pop.next_game_time <= t)[0]
        if due.size == 0:
            return
        jumped_at = pop.next_game_time[due]
        pop.game_state[due] = pop.next_game_target[due]
        g = pop.game_state[due]
        holding = rng.exponential(1.0, size=due.size) / tables.exit_rate[g]
        goes_up = rng.random(due.size) < tables.up_prob[g]
        pop.next_game_time[due] = jumped_at + holding
        pop.next_game_target[due] = np.where(goes_up, g + 1, g - 1)


def _advance_one_chain(
    pop: PopulationState, i: int, rates: TransitionRates, rng: np.random.Generator, t: float
) -> None:
    """Lazy scalar version of chain advancement for event-driven mode."""
    while pop.next_game_time[i] <= t:
        jumped_at = float(pop.next_game_time[i])
        pop.game_state[i] = pop.next_game_target[i]
        holding, target = sample_holding_and_target(int(pop.game_state[i]), rates, rng)
        pop.next_game_time[i] = jumped_at + holding
        pop.next_game_target[i] = target


def run(config: SimConfig, graph: Graph) -> RunMetrics:
    """Simulate one run and return its unit-spaced samples.

    The graph must match config.network in node count. Deterministic in
    (config, graph): equal inputs give bitwise-equal metrics.
    """
    config.validate()
    if graph.node_count != config.network.node_count:
        raise ValueError(
            f"graph has {graph.node_count} nodes but config.network describes "
            f"{config.network.node_count}"
        )
    spec = config.gamespec()
    params = config.update_params()
    rates = config.rates
    tables = _ChainTables.build(rates)

    init_ss, game_ss, sched_ss, update_ss = np.random.SeedSequence(config.seed).spawn(4)
    rng_init = np.random.default_rng(init_ss)
    rng_game = np.random.default_rng(game_ss)
    rng_sched = np.random.default_rng(sched_ss)
    rng_update = np.random.default_rng(update_ss)

    pop = init_population(graph, spec, config.rep_mean, config.rep_sigma, rng_init)
    draw_initial_game_events(pop, rates, rng_game)
    ctx = RoundContext.build(graph, spec)

    horizon = int(config.horizon)
    n_states = rates.n_states
    counts = np.zeros((horizon + 1, n_states), dtype=np.int64)
    coop = np.zeros(horizon + 1, dtype=np.float64)
    counts[0] = pop.state_counts(n_states)
    coop[0] = pop.coop_fraction()

    if isinstance(config.schedule, FixedSchedule):
        _run_synchronous(pop, ctx, params, tables, rng_game, rng_update,
                         config.schedule.interval, horizon, counts, coop, n_states)
    else:
        _run_event_driven(pop, ctx, params, rates, tables, config.schedule,
                          rng_game, rng_sched, rng_update, horizon, counts, coop, n_states,
                          graph)

    return RunMetrics(
        sample_times=np.arange(horizon + 1, dtype=np.float64),
        state_counts=counts,
        coop_fraction=coop,
    )


def _run_synchronous(pop, ctx, params, tables, rng_game, rng_update,
                     interval, horizon, counts, coop, n_states) -> None:
    # Round instants are k * interval, computed by index to avoid
    # accumulating float drift over long runs.
    k = 1
    for ts in range(1, horizon + 1):
        while k * interval <= ts:
            at = k * interval
            _advance_chains_to(pop, tables, rng_game, at)
            _round_inplace(pop, ctx, params, rng_update)
            pop.time = at
            k += 1
        _advance_chains_to(pop, tables, rng_game, float(ts))
        pop.time = float(ts)
        counts[ts] = pop.state_counts(n_states)
        coop[ts] = pop.coop_fraction()


def _run_event_driven(pop, ctx, params, rates, tables, schedule,
                      rng_game, rng_sched, rng_update, horizon, counts, coop, n_states,
                      graph) -> None:
    # Every agent carries its own revision clock. Revisions apply one at
    # a time against the then-current state; ties resolve by agent id.
    events = [(next_update_interval(schedule, rng_sched), i) for i in range(pop.n)]
    heapq.heapify(events)
    for ts in range(1, horizon + 1):
        while events and events[0][0] <= ts:
            at, focal = heapq.heappop(events)
            _advance_one_chain(pop, focal, rates, rng_game, at)
            model = _select_and_advance(pop, focal, graph, rates, rng_game, rng_update,
                                        params, at)
            _finish_single_update(pop, focal, model, graph, ctx, params, rng_update)
            pop.next_update_time[focal] = at + next_update_interval(schedule, rng_sched)
            pop.time = at
            heapq.heappush(events, (float(pop.next_update_time[focal]), focal))
        _advance_chains_to(pop, tables, rng_game, float(ts))
        pop.time = float(ts)
        counts[ts] = pop.state_counts(n_states)
        coop[ts] = pop.coop_fraction()


def _select_and_advance(pop, focal, graph, rates, rng_game, rng_update, params, at):
    model = select_neighbor(focal, pop, graph, rng_update, params.use_reputation)
    # The model's payoff reads its own game state, so its chain must be
    # current as of the revision instant too.
    _advance_one_chain(pop, model, rates, rng_game, at)
    return model


def _finish_single_update(pop, focal, model, graph, ctx, params, rng_update) -> None:
    u_f = _payoff_one(focal, pop, graph, ctx.pay)
    u_m = _payoff_one(model, pop, graph, ctx.pay)
    held = int(pop.strategy[focal])
    if rng_update.random() < fermi_adopt_probability(u_f, u_m, params.kappa):
        pop.strategy[focal] = pop.strategy[model]
    pop.reputation[focal] = update_reputation(float(pop.reputation[focal]), held == 1, params.delta)


def cooperation_frequency(metrics: RunMetrics, tail: int) -> float:
    """Mean cooperator share over the last ``tail`` samples."""
    if not 0 < tail <= metrics.n_samples:
        raise ValueError(f"tail must lie in [1, {metrics.n_samples}], got {tail}")
    return float(metrics.coop_fraction[-tail:].mean())


def state_count_histogram(metrics: RunMetrics, burn_in: int) -> dict[int, dict[int, float]]:
    """Empirical distribution of per-state agent counts after burn-in.

    Returns {state: {count: relative frequency}} over samples with
    t >= burn_in.
    """
    if not 0 <= burn_in < metrics.n_samples:
        raise ValueError(f"burn_in must lie in [0, {metrics.n_samples - 1}], got {burn_in}")
    kept = metrics.state_counts[burn_in:]
    total = kept.shape[0]
    out: dict[int, dict[int, float]] = {}
    for k in range(kept.shape[1]):
        values, freqs = np.unique(kept[:, k], return_counts=True)
        out[k] = {int(v): float(c) / total for v, c in zip(values, freqs)}
    return out


def mean_state_counts(metrics: RunMetrics, burn_in: int) -> np.ndarray:
    """Time-averaged per-state agent counts after burn-in."""
    if not 0 <= burn_in < metrics.n_samples:
        raise ValueError(f"burn_in must lie in [0, {metrics.n_samples - 1}], got {burn_in}")
    return metrics.state_counts[burn_in:].mean(axis=0)


def relative_error(theory: float, simulated: float) -> float:
    """|theory - simulated| / theory; undefined at theory == 0."""
    if theory == 0:
        raise ValueError("relative error is undefined for a zero theoretical value")
    return abs(theory - simulated) / abs(theory)
