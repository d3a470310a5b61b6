"""Request and response models of the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class TheoryRequest(BaseModel):
    """Stationary-law query for one birth-death game chain.

    ``lambda`` / ``mu`` are the up and down rate lists; ``agents``
    scales the expected state counts.
    """

    model_config = ConfigDict(populate_by_name=True)

    lam: list[float] = Field(alias="lambda")
    mu: list[float]
    agents: int = 1000


class TheoryRow(BaseModel):
    state: int
    pi: float
    expected_count: float


class TheoryResponse(BaseModel):
    states: list[TheoryRow]
    csv: str


class ExperimentRequest(BaseModel):
    """An experiment config as TOML text, with an optional seed override."""

    config: str
    seed: int | None = None


class FilePayload(BaseModel):
    name: str
    content: str


class ExperimentResponse(BaseModel):
    kind: str
    files: list[FilePayload]
