"""Pydantic request/response models for the HTTP service.

The ``config`` field of every request accepts either the name of a bundled
config or a full config document as text; the server resolves it, so clients
never need the package's data files.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class StateModel(BaseModel):
    dl_m: float = 0.0
    dphi_rad: float = 0.0


class GridAxisModel(BaseModel):
    name: str = Field(description="platform coordinate, 'dl' or 'dphi'")
    start: float
    stop: float
    count: int = Field(ge=1)


class DescribeRequest(BaseModel):
    config: str


class FreeSummary(BaseModel):
    name: str
    length_m: float
    radius_m: float
    fiber_angle_deg: float
    p_max_pa: float
    fiber_length_m: float
    fiber_turns: float
    d_m: list[float]
    axis: list[float]


class DescribeResponse(BaseModel):
    frees: list[FreeSummary]
    dofs: list[str]
    kinematic_map: str


class JacobianRequest(BaseModel):
    config: str
    state: StateModel = StateModel()


class JacobianRowModel(BaseModel):
    free: str
    dv_dl_m2: float
    dv_dphi_m3_per_rad: float
    wrench_row: list[float]


class JacobianResponse(BaseModel):
    components: list[str]
    rows: list[JacobianRowModel]


class WrenchRequest(BaseModel):
    config: str
    state: StateModel = StateModel()
    pressures_pa: list[float]


class WrenchResponse(BaseModel):
    force_n: list[float]
    moment_nm: list[float]
    dofs: list[str]
    projected: list[float]


class ZonotopeRequest(BaseModel):
    config: str
    state: StateModel = StateModel()
    dofs: list[str] | None = None


class ZonotopeResponse(BaseModel):
    dofs: list[str]
    generators: list[list[float]]
    vertices: list[list[float]]
    center: list[float]
    area: float | None
    csv: str
    svg: str | None


class SolveRequest(BaseModel):
    config: str
    state: StateModel = StateModel()
    target: list[float]
    tol: float = 1e-6


class SolveResponse(BaseModel):
    pressures_pa: list[float]
    residual: float
    feasible: bool


class SweepRequest(BaseModel):
    config: str
    axes: list[GridAxisModel]
    dofs: list[str] | None = None


class SweepRowModel(BaseModel):
    dl_m: float
    dphi_rad: float
    verdict: str
    area: float | None
    attainable_min: list[float] | None
    attainable_max: list[float] | None
    collapsed: bool | None


class CollapseLocusModel(BaseModel):
    axis: str
    dl_m: float
    dphi_rad: float


class SweepResponse(BaseModel):
    dofs: list[str]
    rows: list[SweepRowModel]
    collapse_loci: list[CollapseLocusModel]
    csv: str


class AnalyzeRequest(BaseModel):
    config: str
    data_csv: str


class AnalyzeResponse(BaseModel):
    components: list[str]
    rmse: list[float]
    max_abs_error: list[float]
    count: int
    csv: str


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    error: str
    detail: str
