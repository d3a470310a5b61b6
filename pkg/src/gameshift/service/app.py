"""HTTP service wrapping the simulation harness.

Stateless compute endpoints: every request carries its full config and
every response carries the produced files inline. Nothing is stored
server side; the CLI runs the same code paths in process when no server
is configured.
"""

from __future__ import annotations

import tempfile
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import ConfigError, ExperimentSpec, parse_config_text
from ..experiments import run_experiment
from ..gamespace import TransitionRates, expected_counts, stationary_distribution
from .schemas import (
    ExperimentRequest,
    ExperimentResponse,
    FilePayload,
    HealthResponse,
    TheoryRequest,
    TheoryResponse,
    TheoryRow,
)

SWEEP_KINDS = ("mu_curves", "lambda_heatmap", "payoff_heatmap", "schedule_compare", "scale_sweep")


def theory_rows(lam: list[float], mu: list[float], agents: int) -> list[TheoryRow]:
    """Stationary law and expected counts for one chain."""
    if agents < 0:
        raise ValueError(f"agents must be non-negative, got {agents}")
    rates = TransitionRates(lam=tuple(lam), mu=tuple(mu))
    pi = stationary_distribution(rates).pi
    counts = expected_counts(rates, agents)
    return [
        TheoryRow(state=k, pi=float(pi[k]), expected_count=float(counts[k]))
        for k in range(rates.n_states)
    ]


def theory_csv(rows: list[TheoryRow]) -> str:
    lines = ["state,pi,expected_count"]
    lines.extend(f"{row.state},{row.pi!r},{row.expected_count!r}" for row in rows)
    return "\n".join(lines) + "\n"


def _prepare_spec(req: ExperimentRequest, allowed: tuple[str, ...]) -> ExperimentSpec:
    spec = parse_config_text(req.config)
    if spec.kind not in allowed:
        raise ConfigError(
            f"kind {spec.kind!r} is not valid here, expected one of {', '.join(allowed)}"
        )
    if req.seed is not None:
        spec = replace(spec, base=replace(spec.base, seed=req.seed))
    return spec


def execute_experiment(req: ExperimentRequest, allowed: tuple[str, ...]) -> ExperimentResponse:
    """Run an experiment request and collect its output files."""
    spec = _prepare_spec(req, allowed)
    with tempfile.TemporaryDirectory(prefix="gameshift-") as tmp:
        paths = run_experiment(spec, Path(tmp))
        files = [FilePayload(name=p.name, content=p.read_text()) for p in paths]
    return ExperimentResponse(kind=spec.kind, files=files)


def create_app() -> FastAPI:
    app = FastAPI(title="gameshift", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/theory", response_model=TheoryResponse)
    def theory(req: TheoryRequest) -> TheoryResponse:
        rows = _guard(lambda: theory_rows(req.lam, req.mu, req.agents))
        return TheoryResponse(states=rows, csv=theory_csv(rows))

    @app.post("/simulate", response_model=ExperimentResponse)
    def simulate(req: ExperimentRequest) -> ExperimentResponse:
        return _guard(lambda: execute_experiment(req, ("timeseries",)))

    @app.post("/dist", response_model=ExperimentResponse)
    def dist(req: ExperimentRequest) -> ExperimentResponse:
        return _guard(lambda: execute_experiment(req, ("dist",)))

    @app.post("/sweep", response_model=ExperimentResponse)
    def sweep(req: ExperimentRequest) -> ExperimentResponse:
        return _guard(lambda: execute_experiment(req, SWEEP_KINDS))

    return app


def _guard(fn):
    # Config and value errors are the client's fault; everything else
    # surfaces as a plain 500 from the framework.
    try:
        return fn()
    except (ConfigError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e)) from e


app = create_app()
