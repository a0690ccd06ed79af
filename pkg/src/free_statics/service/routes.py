"""FastAPI service wrapping the core package.

All endpoints are pure functions of their request body, so the service can
be scaled or called in-process (the CLI does the latter by default). Library
errors surface as HTTP 422 with ``{"error": <name>, "detail": <message>}``.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..assembly import (
    WRENCH_COMPONENTS,
    Assembly,
    PlatformState,
    assembly_jacobian,
    map_platform_state,
    net_wrench,
    project_wrench,
)
from ..errors import ModelError
from ..experiment_io import (
    analyze_measurements,
    builtin_config_text,
    error_report_csv,
    load_measurements,
    parse_config,
    sweep_csv,
    to_assembly,
    wrench_column_names,
    zonotope_csv,
    zonotope_svg,
)
from ..force_analysis import (
    GridAxis,
    force_zonotope,
    solve_pressures,
    workspace_sweep,
    zonotope_area,
)
from ..free_core import derive_geometry, fluid_jacobian
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    CollapseLocusModel,
    DescribeRequest,
    DescribeResponse,
    ErrorBody,
    FreeSummary,
    HealthResponse,
    JacobianRequest,
    JacobianResponse,
    JacobianRowModel,
    SolveRequest,
    SolveResponse,
    StateModel,
    SweepRequest,
    SweepResponse,
    SweepRowModel,
    WrenchRequest,
    WrenchResponse,
    ZonotopeRequest,
    ZonotopeResponse,
)

app = FastAPI(title="free-statics", version=__version__)


@app.exception_handler(ModelError)
def _model_error_handler(request: Request, exc: ModelError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content=ErrorBody(error=type(exc).__name__, detail=str(exc)).model_dump(),
    )


def _load_assembly(config: str) -> Assembly:
    text = config if config.lstrip().startswith("{") else builtin_config_text(config)
    return to_assembly(parse_config(text))


def _state(model: StateModel) -> PlatformState:
    return PlatformState(dl=model.dl_m, dphi=model.dphi_rad)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/describe", response_model=DescribeResponse)
def describe(req: DescribeRequest) -> DescribeResponse:
    assembly = _load_assembly(req.config)
    frees = []
    for design, placement in assembly.frees:
        geometry = derive_geometry(design)
        frees.append(
            FreeSummary(
                name=design.name,
                length_m=design.length,
                radius_m=design.radius,
                fiber_angle_deg=math.degrees(design.fiber_angle),
                p_max_pa=design.p_max,
                fiber_length_m=geometry.fiber_length,
                fiber_turns=geometry.turns,
                d_m=list(placement.d),
                axis=list(placement.axis),
            )
        )
    return DescribeResponse(
        frees=frees, dofs=list(assembly.dofs), kinematic_map=assembly.kinematic_map
    )


@app.post("/jacobian", response_model=JacobianResponse)
def jacobian(req: JacobianRequest) -> JacobianResponse:
    assembly = _load_assembly(req.config)
    state = _state(req.state)
    matrix = assembly_jacobian(assembly, state)
    deformations = map_platform_state(assembly, state)
    rows = []
    for (design, _), deformation, row in zip(assembly.frees, deformations, matrix):
        local = fluid_jacobian(design, deformation)
        rows.append(
            JacobianRowModel(
                free=design.name,
                dv_dl_m2=local.dv_dl,
                dv_dphi_m3_per_rad=local.dv_dphi,
                wrench_row=list(row),
            )
        )
    return JacobianResponse(components=list(WRENCH_COMPONENTS), rows=rows)


@app.post("/wrench", response_model=WrenchResponse)
def wrench(req: WrenchRequest) -> WrenchResponse:
    assembly = _load_assembly(req.config)
    result = net_wrench(assembly, _state(req.state), req.pressures_pa)
    projected = project_wrench(result, assembly.dofs)
    return WrenchResponse(
        force_n=list(result.force),
        moment_nm=list(result.moment),
        dofs=list(assembly.dofs),
        projected=list(projected),
    )


@app.post("/zonotope", response_model=ZonotopeResponse)
def zonotope(req: ZonotopeRequest) -> ZonotopeResponse:
    assembly = _load_assembly(req.config)
    result = force_zonotope(assembly, _state(req.state), req.dofs)
    planar = result.dim == 2
    return ZonotopeResponse(
        dofs=list(result.dofs),
        generators=[list(g) for g in result.generators],
        vertices=[list(v) for v in result.vertices],
        center=list(result.center),
        area=zonotope_area(result) if planar else None,
        csv=zonotope_csv(result),
        svg=zonotope_svg(result) if planar else None,
    )


@app.post("/solve", response_model=SolveResponse)
def solve(req: SolveRequest) -> SolveResponse:
    assembly = _load_assembly(req.config)
    solution = solve_pressures(assembly, _state(req.state), req.target, tol=req.tol)
    return SolveResponse(
        pressures_pa=list(solution.pressures),
        residual=solution.residual,
        feasible=solution.feasible,
    )


@app.post("/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest) -> SweepResponse:
    assembly = _load_assembly(req.config)
    axes = tuple(
        GridAxis(name=a.name, start=a.start, stop=a.stop, count=a.count) for a in req.axes
    )
    report = workspace_sweep(assembly, axes, req.dofs)
    rows = [
        SweepRowModel(
            dl_m=entry.state.dl,
            dphi_rad=entry.state.dphi,
            verdict=entry.verdict,
            area=entry.area,
            attainable_min=None if entry.attainable_min is None else list(entry.attainable_min),
            attainable_max=None if entry.attainable_max is None else list(entry.attainable_max),
            collapsed=entry.collapsed,
        )
        for entry in report.entries
    ]
    loci = [
        CollapseLocusModel(axis=locus.axis, dl_m=locus.state.dl, dphi_rad=locus.state.dphi)
        for locus in report.collapse_loci
    ]
    return SweepResponse(
        dofs=list(report.dofs), rows=rows, collapse_loci=loci, csv=sweep_csv(report)
    )


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    assembly = _load_assembly(req.config)
    records = load_measurements(req.data_csv, assembly)
    report = analyze_measurements(assembly, records)
    return AnalyzeResponse(
        components=wrench_column_names(report.dofs),
        rmse=list(report.rmse),
        max_abs_error=list(report.max_abs),
        count=report.count,
        csv=error_report_csv(report),
    )
