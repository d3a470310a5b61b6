"""Evolutionary games on networks with drifting game chains.

Each agent plays a two-strategy game against its neighbors, but which
game it plays wanders through a birth-death Markov chain in continuous
time. Strategy revisions follow a reputation-weighted imitation rule
with Fermi adoption. The package bundles the closed-form stationary law
of the chain, a vectorized simulator, an experiment harness with CSV
outputs, and an HTTP service plus CLI around the harness.
"""

__version__ = "0.1.0"

from .config import ConfigError, ExperimentSpec, parse_config, parse_config_text
from .engine import (
    ExponentialSchedule,
    FixedSchedule,
    PowerLawSchedule,
    RunMetrics,
    SimConfig,
    cooperation_frequency,
    relative_error,
    run,
    state_count_histogram,
)
from .experiments import run_experiment
from .gamespace import (
    GameSpec,
    PayoffMatrix,
    StationaryDistribution,
    TransitionRates,
    expected_counts,
    standard_gamespec,
    standard_matrices,
    stationary_distribution,
    validate_dilemma,
)
from .population import (
    Agent,
    PopulationState,
    Strategy,
    UpdateParams,
    accumulate_payoff,
    fermi_adopt_probability,
    init_population,
    select_neighbor,
    strategy_update_round,
    update_reputation,
)
from .topology import Graph, NetworkSpec, build_graph, degree, make_square_lattice, make_watts_strogatz

__all__ = [
    "__version__",
    "Agent",
    "ConfigError",
    "ExperimentSpec",
    "ExponentialSchedule",
    "FixedSchedule",
    "GameSpec",
    "Graph",
    "NetworkSpec",
    "PayoffMatrix",
    "PopulationState",
    "PowerLawSchedule",
    "RunMetrics",
    "SimConfig",
    "StationaryDistribution",
    "Strategy",
    "TransitionRates",
    "UpdateParams",
    "accumulate_payoff",
    "build_graph",
    "cooperation_frequency",
    "degree",
    "expected_counts",
    "fermi_adopt_probability",
    "init_population",
    "make_square_lattice",
    "make_watts_strogatz",
    "parse_config",
    "parse_config_text",
    "relative_error",
    "run",
    "run_experiment",
    "select_neighbor",
    "standard_gamespec",
    "standard_matrices",
    "state_count_histogram",
    "stationary_distribution",
    "strategy_update_round",
    "update_reputation",
    "validate_dilemma",
]
