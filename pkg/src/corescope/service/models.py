"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class IngestRequest(BaseModel):
    input: str
    format: Literal["pair", "adj"] = "pair"
    out: str
    seed: int = 0


class IngestResponse(BaseModel):
    seed: int
    n: int
    m: int
    max_degree: int
    graph_path: str
    summary_path: str


class KcoreRequest(BaseModel):
    input: str
    out: str
    seed: int = 0


class KcoreResponse(BaseModel):
    seed: int
    n: int
    k_max: int
    coreness_path: str


class ResilienceRequest(BaseModel):
    inputs: list[str] = Field(min_length=1)
    survival: list[float] = [0.2]
    out: str
    seed: int = 0


class DatasetResilience(BaseModel):
    k_max: int
    catastrophic: dict[str, int]  # survival level (as string) -> K


class ResilienceResponse(BaseModel):
    seed: int
    datasets: dict[str, DatasetResilience]
    ccdf_path: str
    catastrophic_path: str


class EquilibriumRequest(BaseModel):
    input: str
    c: int
    b: int
    out: str
    seed: int = 0


class EquilibriumResponse(BaseModel):
    seed: int
    K: int
    size: int
    stable: bool
    member_violations: list[int]
    outsider_violations: list[int]
    members_path: str
    summary_path: str


class UnravelRequest(BaseModel):
    input: str
    k0: int = 3
    rate: float
    t0: float = 0.0
    horizon: float
    step: float = 1.0
    out: str
    seed: int = 0


class UnravelResponse(BaseModel):
    seed: int
    n_points: int
    final_remaining: int
    csv_path: str


class FitRequest(BaseModel):
    input: str
    observed: str
    k0: int = 3
    rate: float
    out: str
    seed: int = 0


class FitResponse(BaseModel):
    seed: int
    r_squared: float
    n_points: int
    json_path: str
    residuals_path: str


class PlfitRequest(BaseModel):
    input: str
    kind: Literal["auto", "graph", "histogram"] = "auto"
    dataset: Optional[str] = None
    trials: int = 100
    emit_trials: bool = False
    out: str
    seed: int = 0


class PlfitResponse(BaseModel):
    seed: int
    dataset: str
    deg_min: int
    alpha: float
    n_tail: int
    D: float
    p: float
    range_decades: float
    tail_pct: float
    flagged: bool
    csv_path: str
    trials_path: Optional[str] = None


class TimesliceRequest(BaseModel):
    input: str
    width: int
    origin: Optional[int] = None
    out: str
    seed: int = 0


class TimesliceResponse(BaseModel):
    seed: int
    n_slices: int
    csv_path: str


class AtRiskRequest(BaseModel):
    input: str
    width: int
    threshold: Optional[float] = None
    out: str
    seed: int = 0


class AtRiskResponse(BaseModel):
    seed: int
    threshold: float
    n_slices: int
    csv_path: str


class ReportRequest(BaseModel):
    out: str
    seed: int = 0


class ReportResponse(BaseModel):
    seed: int
    report_path: str
    schema_version: int
