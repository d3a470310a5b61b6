"""Agent state and the strategy-update dynamics.

Agents hold a strategy (cooperate or defect), a reputation score, and a
position in the game chain. Strategy revisions pick a neighbor with
probability proportional to reputation and adopt its strategy with a
Fermi probability in the payoff difference. Cooperation raises
reputation by a fixed step, defection lowers it, clamped to (0, 4].

The scalar functions are the reference semantics. The engine drives the
vectorized round in ``_round_inplace``, which consumes the same random
stream shapes (one selection uniform and one adoption uniform per agent
per round) so both paths stay comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .gamespace import GameSpec, TransitionRates
from .topology import Graph

REPUTATION_CAP = 4.0


class Strategy(IntEnum):
    DEFECT = 0
    COOPERATE = 1


@dataclass(frozen=True)
class Agent:
    """Read-only view of one agent, handy for tests and debugging."""

    strategy: Strategy
    reputation: float
    game_state: int
    next_game_time: float
    next_game_target: int
    next_update_time: float


@dataclass
class PopulationState:
    """Columnar state of all agents at a given simulation time.

    strategy holds 0/1 codes (see Strategy), game_state the chain index
    per agent. next_game_time/next_game_target is the agent's pending
    chain jump; next_update_time is only used by event-driven schedules.
    """

    strategy: np.ndarray
    reputation: np.ndarray
    game_state: np.ndarray
    next_game_time: np.ndarray
    next_game_target: np.ndarray
    next_update_time: np.ndarray
    time: float = 0.0

    @property
    def n(self) -> int:
        return int(self.strategy.size)

    def agent(self, i: int) -> Agent:
        return Agent(
            strategy=Strategy(int(self.strategy[i])),
            reputation=float(self.reputation[i]),
            game_state=int(self.game_state[i]),
            next_game_time=float(self.next_game_time[i]),
            next_game_target=int(self.next_game_target[i]),
            next_update_time=float(self.next_update_time[i]),
        )

    def state_counts(self, n_states: int) -> np.ndarray:
        return np.bincount(self.game_state, minlength=n_states)

    def coop_fraction(self) -> float:
        return float(self.strategy.mean())


@dataclass(frozen=True)
class UpdateParams:
    """Knobs of the revision rule."""

    kappa: float = 0.1
    delta: float = 0.04
    use_reputation: bool = True

    def validate(self) -> None:
        if self.kappa <= 0:
            raise ValueError(f"selection temperature kappa must be positive, got {self.kappa}")
        if not 0 < self.delta < REPUTATION_CAP:
            raise ValueError(f"reputation step delta must lie in (0, {REPUTATION_CAP}), got {self.delta}")


def init_population(
    graph: Graph,
    spec: GameSpec,
    rep_mean: float = 2.0,
    rep_sigma: float = 0.6,
    rng: np.random.Generator | None = None,
) -> PopulationState:
    """Fresh population: uniform random strategies, everyone in chain
    state 0, reputations drawn from a gaussian truncated to (0, 4) by
    rejection. Pending chain events are left unscheduled; the engine
    draws them.
    """
    if rng is None:
        rng = np.random.default_rng()
    n = graph.node_count
    reputation = rng.normal(rep_mean, rep_sigma, size=n)
    bad = (reputation <= 0.0) | (reputation >= REPUTATION_CAP)
    while bad.any():
        reputation[bad] = rng.normal(rep_mean, rep_sigma, size=int(bad.sum()))
        bad = (reputation <= 0.0) | (reputation >= REPUTATION_CAP)
    return PopulationState(
        strategy=rng.integers(0, 2, size=n).astype(np.uint8),
        reputation=reputation,
        game_state=np.zeros(n, dtype=np.int64),
        next_game_time=np.full(n, np.inf),
        next_game_target=np.zeros(n, dtype=np.int64),
        next_update_time=np.zeros(n, dtype=np.float64),
        time=0.0,
    )


def accumulate_payoff(focal: int, pop: PopulationState, graph: Graph, spec: GameSpec) -> float:
    """Total payoff of ``focal`` against all neighbors, using the payoff
    matrix of the focal agent's own current game. Isolated agents earn 0.
    """
    return _payoff_one(focal, pop, graph, spec.payoff_tensor())


def _payoff_one(focal: int, pop: PopulationState, graph: Graph, pay: np.ndarray) -> float:
    # Same semantics as accumulate_payoff with the tensor prebuilt.
    nbrs = graph.neighbors(focal)
    if nbrs.size == 0:
        return 0.0
    g = int(pop.game_state[focal])
    s = int(pop.strategy[focal])
    return float(pay[g, s, pop.strategy[nbrs]].sum())


def update_reputation(reputation: float, cooperated: bool, delta: float = 0.04) -> float:
    """One reputation step: +delta for cooperation capped at 4, -delta
    for defection, but a score that would drop to 0 or below is reset to
    delta / 2 so it stays positive.
    """
    if cooperated:
        return min(reputation + delta, REPUTATION_CAP)
    lowered = reputation - delta
    return delta / 2.0 if lowered <= 0.0 else lowered


def select_neighbor(
    focal: int,
    pop: PopulationState,
    graph: Graph,
    rng: np.random.Generator,
    use_reputation: bool = True,
) -> int:
    """Pick the model neighbor for a strategy revision.

    With reputation on, neighbor j is chosen with probability
    reputation_j / sum of neighbor reputations; with reputation off
    (ablation) the choice is uniform. Either way exactly one uniform
    draw is consumed, so paired runs stay seed-comparable.
    """
    nbrs = graph.neighbors(focal)
    if nbrs.size == 0:
        raise ValueError(f"agent {focal} has no neighbors to imitate")
    u = rng.random()
    if use_reputation:
        cum = np.cumsum(pop.reputation[nbrs])
        idx = int(np.searchsorted(cum, u * cum[-1], side="right"))
    else:
        idx = int(u * nbrs.size)
    return int(nbrs[min(idx, nbrs.size - 1)])


def fermi_adopt_probability(u_focal: float, u_model: float, kappa: float = 0.1) -> float:
    """Probability of adopting the model's strategy.

    Logistic in the payoff gap: 1 / (1 + exp((u_focal - u_model) / kappa)).
    The branch with probability >= 1/2 is computed directly from exp of
    a non-positive argument (no overflow) and the other branch as its
    float complement, which is exact for values in [1/2, 1], so
    p(a, b) + p(b, a) == 1 holds bit for bit.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    x = (u_focal - u_model) / kappa
    big = 1.0 / (1.0 + np.exp(-abs(x)))
    return float(big) if x <= 0 else float(1.0 - big)


def _fermi_vector(u_focal: np.ndarray, u_model: np.ndarray, kappa: float) -> np.ndarray:
    # Same branch arithmetic as the scalar version, elementwise.
    x = (u_focal - u_model) / kappa
    big = 1.0 / (1.0 + np.exp(-np.abs(x)))
    return np.where(x <= 0, big, 1.0 - big)


@dataclass(frozen=True)
class RoundContext:
    """Precomputed per-graph tables for the vectorized round.

    dense_nbrs is the neighbor list padded to the maximum degree (pad
    slots point at node 0 and are masked out), so per-agent cumulative
    sums run along one axis with the same addition order as the scalar
    path.
    """

    pay: np.ndarray
    degrees: np.ndarray
    dense_nbrs: np.ndarray
    dense_mask: np.ndarray

    @staticmethod
    def build(graph: Graph, spec: GameSpec) -> "RoundContext":
        n = graph.node_count
        degs = graph.degrees
        if n and int(degs.min()) == 0:
            raise ValueError("graph has isolated nodes; every agent needs at least one neighbor")
        dmax = int(degs.max()) if n else 0
        dense = np.zeros((n, dmax), dtype=np.int64)
        mask = np.zeros((n, dmax), dtype=np.float64)
        for u in range(n):
            d = int(degs[u])
            dense[u, :d] = graph.indices[graph.indptr[u]:graph.indptr[u] + d]
            mask[u, :d] = 1.0
        return RoundContext(
            pay=spec.payoff_tensor(),
            degrees=degs.astype(np.float64),
            dense_nbrs=dense,
            dense_mask=mask,
        )


def _payoffs_all(pop: PopulationState, ctx: RoundContext) -> np.ndarray:
    """Payoff of every agent against its neighborhood, one shot."""
    coop_nbrs = (pop.strategy[ctx.dense_nbrs] * ctx.dense_mask).sum(axis=1)
    pay_c = ctx.pay[pop.game_state, pop.strategy, 1]
    pay_d = ctx.pay[pop.game_state, pop.strategy, 0]
    return pay_c * coop_nbrs + pay_d * (ctx.degrees - coop_nbrs)


def _select_all(
    pop: PopulationState, ctx: RoundContext, rng: np.random.Generator, use_reputation: bool
) -> np.ndarray:
    """Model neighbor for every agent, one uniform draw per agent."""
    if use_reputation:
        w = pop.reputation[ctx.dense_nbrs] * ctx.dense_mask
    else:
        w = ctx.dense_mask
    cum = np.cumsum(w, axis=1)
    u = rng.random(pop.n)
    target = u * cum[:, -1]
    idx = (cum <= target[:, None]).sum(axis=1)
    np.minimum(idx, (ctx.degrees - 1).astype(np.int64), out=idx)
    return ctx.dense_nbrs[np.arange(pop.n), idx]


def _round_inplace(
    pop: PopulationState, ctx: RoundContext, params: UpdateParams, rng: np.random.Generator
) -> None:
    """One synchronous two-phase revision round.

    Payoffs, selections and adoption decisions are all computed from the
    pre-round snapshot, then applied simultaneously. Reputation moves by
    the strategy each agent actually played this round (its pre-update
    strategy).
    """
    old_strategy = pop.strategy.copy()
    payoff = _payoffs_all(pop, ctx)
    model = _select_all(pop, ctx, rng, params.use_reputation)
    p_adopt = _fermi_vector(payoff, payoff[model], params.kappa)
    adopt = rng.random(pop.n) < p_adopt
    pop.strategy = np.where(adopt, old_strategy[model], old_strategy).astype(np.uint8)

    raised = np.minimum(pop.reputation + params.delta, REPUTATION_CAP)
    lowered = pop.reputation - params.delta
    lowered = np.where(lowered <= 0.0, params.delta / 2.0, lowered)
    pop.reputation = np.where(old_strategy == 1, raised, lowered)


def strategy_update_round(
    pop: PopulationState,
    graph: Graph,
    spec: GameSpec,
    params: UpdateParams,
    rng: np.random.Generator,
) -> PopulationState:
    """Synchronous revision round over the whole population (in place)."""
    params.validate()
    _round_inplace(pop, RoundContext.build(graph, spec), params, rng)
    return pop


def update_single_agent(
    focal: int,
    pop: PopulationState,
    graph: Graph,
    spec: GameSpec,
    params: UpdateParams,
    rng: np.random.Generator,
) -> None:
    """One event-driven revision of a single agent against current state.

    Used by the non-synchronous schedules: the focal agent compares
    against one neighbor at its own revision instant, then its
    reputation moves by the strategy it held up to this instant.
    """
    model = select_neighbor(focal, pop, graph, rng, params.use_reputation)
    u_f = accumulate_payoff(focal, pop, graph, spec)
    u_m = accumulate_payoff(model, pop, graph, spec)
    held = int(pop.strategy[focal])
    if rng.random() < fermi_adopt_probability(u_f, u_m, params.kappa):
        pop.strategy[focal] = pop.strategy[model]
    pop.reputation[focal] = update_reputation(float(pop.reputation[focal]), held == 1, params.delta)


def draw_initial_game_events(
    pop: PopulationState, rates: TransitionRates, rng: np.random.Generator
) -> None:
    """Schedule every agent's first chain jump out of state 0."""
    n = pop.n
    pop.next_game_time = pop.time + rng.exponential(1.0 / rates.lam[0], size=n)
    pop.next_game_target = np.ones(n, dtype=np.int64)
