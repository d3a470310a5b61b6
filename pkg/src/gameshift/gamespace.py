"""Game definitions and the birth-death chain each agent's game follows.

An agent's current game is a state in a linear chain G0, G1, ..., Gn.
Upward transitions Gi -> Gi+1 fire at rate lam[i], downward transitions
Gi+1 -> Gi at rate mu[i]. The chain is reversible, so its stationary law
has a closed product form; a linear solve of the global balance
equations is kept alongside as an independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PayoffMatrix:
    """Two-strategy payoff matrix in standard (R, S, T, P) form.

    R: both cooperate. S: cooperator against defector. T: defector
    against cooperator. P: both defect. Row player is the focal agent.
    """

    R: float
    S: float
    T: float
    P: float

    def payoff(self, focal_cooperates: bool, other_cooperates: bool) -> float:
        if focal_cooperates:
            return self.R if other_cooperates else self.S
        return self.T if other_cooperates else self.P


def standard_matrices(b: float, r: float) -> dict[str, PayoffMatrix]:
    """The three normalized social dilemmas, keyed by name.

    b is the defector's temptation in the prisoner's dilemma, r the
    cost-to-benefit ratio in the snowdrift and stag-hunt games.
    """
    return {
        "PDG": PayoffMatrix(R=1.0, S=0.0, T=b, P=0.0),
        "SDG": PayoffMatrix(R=1.0, S=1.0 - r, T=1.0 + r, P=0.0),
        "SHG": PayoffMatrix(R=1.0, S=-r, T=r, P=0.0),
    }


def validate_dilemma(m: PayoffMatrix) -> bool:
    """True when the matrix is a genuine social dilemma.

    Mutual cooperation must beat mutual defection and unilateral
    cooperation, must be the social optimum against mixed pairings,
    and defection must tempt at least one side.
    """
    return (
        m.R > m.P
        and m.R > m.S
        and 2.0 * m.R > m.T + m.S
        and (m.T > m.R or m.P > m.S)
    )


@dataclass(frozen=True)
class GameSpec:
    """Ordered chain of games the agents drift through.

    ``states[i]`` is the (name, matrix) pair for chain state Gi. At least
    two states are required for the chain to move at all.
    """

    states: tuple[tuple[str, PayoffMatrix], ...]

    def __post_init__(self) -> None:
        if len(self.states) < 2:
            raise ValueError(f"a game chain needs at least 2 states, got {len(self.states)}")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.states)

    def payoff_tensor(self) -> np.ndarray:
        """Array ``pay[g, s_focal, s_other]`` with strategies coded D=0, C=1."""
        pay = np.empty((self.n_states, 2, 2), dtype=np.float64)
        for g, (_, m) in enumerate(self.states):
            pay[g, 1, 1] = m.R
            pay[g, 1, 0] = m.S
            pay[g, 0, 1] = m.T
            pay[g, 0, 0] = m.P
        return pay


def standard_gamespec(b: float, r: float) -> GameSpec:
    """PDG -> SDG -> SHG chain with the standard normalized matrices."""
    mats = standard_matrices(b, r)
    return GameSpec(states=(("PDG", mats["PDG"]), ("SDG", mats["SDG"]), ("SHG", mats["SHG"])))


@dataclass(frozen=True)
class TransitionRates:
    """Birth-death rates: lam[i] drives Gi -> Gi+1, mu[i] drives Gi+1 -> Gi.

    Both tuples must have the same length (one entry per chain edge) and
    every rate must be strictly positive, which keeps the chain
    irreducible.
    """

    lam: tuple[float, ...]
    mu: tuple[float, ...]

    def __post_init__(self) -> None:
        lam = tuple(float(x) for x in self.lam)
        mu = tuple(float(x) for x in self.mu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)
        if len(lam) != len(mu):
            raise ValueError(f"lam and mu must have equal length, got {len(lam)} and {len(mu)}")
        if len(lam) == 0:
            raise ValueError("at least one transition rate pair is required")
        if any(x <= 0 for x in lam) or any(x <= 0 for x in mu):
            raise ValueError("all transition rates must be strictly positive")

    @property
    def n_states(self) -> int:
        return len(self.lam) + 1


@dataclass(frozen=True)
class StationaryDistribution:
    """Stationary law of a game chain, ``pi[k] = P(state Gk)`` at equilibrium."""

    pi: np.ndarray

    def __post_init__(self) -> None:
        if abs(float(self.pi.sum()) - 1.0) > 1e-12:
            raise ValueError("stationary probabilities must sum to 1")


def stationary_distribution(rates: TransitionRates) -> StationaryDistribution:
    """Closed-form stationary law of the birth-death chain.

    Detailed balance pins pi[k+1] / pi[k] = lam[k] / mu[k], so pi[k] is
    the running product of those ratios, normalized. Computed with a
    running product rather than separate numerator/denominator products
    to avoid overflow on long chains.
    """
    m = len(rates.lam)
    weights = np.empty(m + 1, dtype=np.float64)
    weights[0] = 1.0
    ratio = 1.0
    for k in range(m):
        ratio *= rates.lam[k] / rates.mu[k]
        weights[k + 1] = ratio
    return StationaryDistribution(pi=weights / weights.sum())


def expected_counts(rates: TransitionRates, n_agents: int) -> np.ndarray:
    """Expected number of agents in each chain state at stationarity.

    Agents' chains are independent and identical, so the expectation is
    just ``n_agents * pi``.
    """
    if n_agents < 0:
        raise ValueError(f"agent count must be non-negative, got {n_agents}")
    return n_agents * stationary_distribution(rates).pi


def generator_matrix(rates: TransitionRates) -> np.ndarray:
    """Infinitesimal generator Q of the chain, rows summing to zero."""
    n = rates.n_states
    q = np.zeros((n, n), dtype=np.float64)
    for i, rate in enumerate(rates.lam):
        q[i, i + 1] = rate
    for i, rate in enumerate(rates.mu):
        q[i + 1, i] = rate
    np.fill_diagonal(q, -q.sum(axis=1))
    return q


def stationary_from_generator(q: np.ndarray) -> np.ndarray:
    """Stationary law of an arbitrary irreducible generator matrix.

    Solves the global balance equations pi Q = 0 with the normalization
    sum(pi) = 1 as a least-squares linear system. Independent of the
    closed form above; used to cross-check it.
    """
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError(f"generator must be square, got shape {q.shape}")
    n = q.shape[0]
    a = np.vstack([q.T, np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    return pi


def sample_holding_and_target(
    current: int, rates: TransitionRates, rng: np.random.Generator
) -> tuple[float, int]:
    """Draw (holding time, next state) for the chain sitting in ``current``.

    Interior states race two exponential clocks; the total exit rate is
    lam + mu and the jump goes up with probability lam / (lam + mu).
    Boundary states have a single clock and a deterministic target.
    """
    n = rates.n_states
    if not 0 <= current < n:
        raise ValueError(f"state {current} out of range for chain of {n} states")
    if current == 0:
        return float(rng.exponential(1.0 / rates.lam[0])), 1
    if current == n - 1:
        return float(rng.exponential(1.0 / rates.mu[n - 2])), n - 2
    up, down = rates.lam[current], rates.mu[current - 1]
    total = up + down
    holding = float(rng.exponential(1.0 / total))
    target = current + 1 if rng.random() < up / total else current - 1
    return holding, target
