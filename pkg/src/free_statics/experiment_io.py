"""Rig configuration, pressure grids, measurement ingestion and exports.

This is the unit boundary of the package: config documents use degrees and
kilopascals because that is how rigs get written down, everything behind
``to_assembly`` is SI. Measurement CSVs follow a fixed schema
(``dl_m,dphi_rad,p1_pa,...,pn_pa,Fz_N,Mz_Nm`` with the wrench columns in
platform-dof order, LF line endings, ``.`` decimals) so files are exact,
diffable test artifacts.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .assembly import (
    WRENCH_COMPONENTS,
    Assembly,
    Placement,
    PlatformState,
    net_wrench,
    project_wrench,
)
from .errors import (
    DimensionMismatch,
    EmptyInput,
    InvalidDesign,
    IoError,
    LengthMismatch,
    MissingBaseline,
    NegativePressure,
    NonUnitAxis,
    ParseError,
    PressureLimit,
    ValidationError,
    WrongDimension,
)
from .force_analysis import SweepReport, Zonotope
from .free_core import FreeDesign

STATE_MATCH_TOL = 1e-9  # states are commanded values, not noisy measurements


# ---------------------------------------------------------------------------
# Rig configuration


@dataclass(frozen=True)
class FreeConfig:
    name: str
    length_m: float
    radius_m: float
    fiber_angle_deg: float
    p_max_kpa: float


@dataclass(frozen=True)
class PlacementConfig:
    free: str
    d_m: tuple
    axis: tuple


@dataclass(frozen=True)
class PlatformConfig:
    dofs: tuple
    kinematic_map: str


@dataclass(frozen=True)
class RigConfig:
    frees: tuple
    placements: tuple
    platform: PlatformConfig


def _require_keys(obj, keys, field):
    if not isinstance(obj, dict):
        raise ValidationError(f"{field}: expected an object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ValidationError(f"{field}: missing field {missing[0]!r}")
    unknown = [k for k in obj if k not in keys]
    if unknown:
        raise ValidationError(f"{field}: unknown field {unknown[0]!r}")


def _number(value, field) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{field}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{field}: expected a finite number")
    return value


def _vector3(value, field) -> tuple:
    if not isinstance(value, list) or len(value) != 3:
        raise ValidationError(f"{field}: expected an array of 3 numbers")
    return tuple(_number(v, f"{field}[{i}]") for i, v in enumerate(value))


def parse_config(text: str) -> RigConfig:
    """Parse and fully validate a rig configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None

    _require_keys(doc, ("frees", "placements", "platform"), "config")
    if not isinstance(doc["frees"], list) or not doc["frees"]:
        raise ValidationError("frees: expected a non-empty array")
    frees = []
    for i, entry in enumerate(doc["frees"]):
        field = f"frees[{i}]"
        _require_keys(
            entry, ("name", "length_m", "radius_m", "fiber_angle_deg", "p_max_kpa"), field
        )
        name = entry["name"]
        if not isinstance(name, str) or not name:
            raise ValidationError(f"{field}.name: expected a non-empty string")
        frees.append(
            FreeConfig(
                name=name,
                length_m=_number(entry["length_m"], f"{field}.length_m"),
                radius_m=_number(entry["radius_m"], f"{field}.radius_m"),
                fiber_angle_deg=_number(entry["fiber_angle_deg"], f"{field}.fiber_angle_deg"),
                p_max_kpa=_number(entry["p_max_kpa"], f"{field}.p_max_kpa"),
            )
        )
    names = [f.name for f in frees]
    if len(set(names)) != len(names):
        raise ValidationError("frees: duplicate name")

    if not isinstance(doc["placements"], list):
        raise ValidationError("placements: expected an array")
    placements = []
    for i, entry in enumerate(doc["placements"]):
        field = f"placements[{i}]"
        _require_keys(entry, ("free", "d_m", "axis"), field)
        ref = entry["free"]
        if ref not in names:
            raise ValidationError(f"{field}.free: unknown actuator {ref!r}")
        placements.append(
            PlacementConfig(
                free=ref,
                d_m=_vector3(entry["d_m"], f"{field}.d_m"),
                axis=_vector3(entry["axis"], f"{field}.axis"),
            )
        )
    refs = [p.free for p in placements]
    if sorted(refs) != sorted(names):
        raise ValidationError("placements: every declared actuator must be placed exactly once")

    _require_keys(doc["platform"], ("dofs", "kinematic_map"), "platform")
    dofs = doc["platform"]["dofs"]
    if not isinstance(dofs, list) or not dofs:
        raise ValidationError("platform.dofs: expected a non-empty array of component names")
    for name in dofs:
        if name not in WRENCH_COMPONENTS:
            raise ValidationError(f"platform.dofs: unknown wrench component {name!r}")
    kinematic_map = doc["platform"]["kinematic_map"]
    if not isinstance(kinematic_map, str):
        raise ValidationError("platform.kinematic_map: expected a string")

    rig = RigConfig(
        frees=tuple(frees),
        placements=tuple(placements),
        platform=PlatformConfig(dofs=tuple(dofs), kinematic_map=kinematic_map),
    )
    to_assembly(rig)  # surface unit-level invariant violations at parse time
    return rig


def serialize_config(rig: RigConfig) -> str:
    """Canonical text form of a config; parse(serialize(parse(t))) == parse(t)."""
    doc = {
        "frees": [
            {
                "name": f.name,
                "length_m": f.length_m,
                "radius_m": f.radius_m,
                "fiber_angle_deg": f.fiber_angle_deg,
                "p_max_kpa": f.p_max_kpa,
            }
            for f in rig.frees
        ],
        "placements": [
            {"free": p.free, "d_m": list(p.d_m), "axis": list(p.axis)}
            for p in rig.placements
        ],
        "platform": {
            "dofs": list(rig.platform.dofs),
            "kinematic_map": rig.platform.kinematic_map,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def to_assembly(rig: RigConfig) -> Assembly:
    """Convert a validated config into an SI assembly, in placement order."""
    designs = {}
    for i, f in enumerate(rig.frees):
        try:
            designs[f.name] = FreeDesign(
                name=f.name,
                length=f.length_m,
                radius=f.radius_m,
                fiber_angle=math.radians(f.fiber_angle_deg),
                p_max=f.p_max_kpa * 1e3,
            )
        except InvalidDesign as exc:
            raise ValidationError(f"frees[{i}]: InvalidDesign: {exc}") from None
    frees = []
    for i, p in enumerate(rig.placements):
        try:
            placement = Placement(d=p.d_m, axis=p.axis)
        except (NonUnitAxis, DimensionMismatch) as exc:
            raise ValidationError(f"placements[{i}]: {type(exc).__name__}: {exc}") from None
        frees.append((designs[p.free], placement))
    return Assembly(
        frees=tuple(frees),
        dofs=rig.platform.dofs,
        kinematic_map=rig.platform.kinematic_map,
    )


def builtin_config_names() -> list[str]:
    root = resources.files(__package__).joinpath("data")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_config_text(name: str) -> str:
    """Text of a config shipped with the package."""
    if "/" in name or "\\" in name:
        raise ValidationError(f"config: invalid built-in name {name!r}")
    candidate = resources.files(__package__).joinpath("data", f"{name}.json")
    if not candidate.is_file():
        raise ValidationError(
            f"config: unknown built-in config {name!r}; "
            f"available: {', '.join(builtin_config_names())}"
        )
    return candidate.read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# Pressure grids and measurements


def pressure_grid(assembly: Assembly, levels) -> np.ndarray:
    """All combinations of per-actuator pressures at the given p_max fractions.

    Rows are ordered lexicographically by actuator index then level index,
    i.e. the last actuator's level varies fastest.
    """
    levels = [float(v) for v in levels]
    if not levels:
        raise ValidationError("levels: at least one fraction required")
    for v in levels:
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"levels: fraction {v} outside [0, 1]")
    if len(set(levels)) != len(levels):
        raise ValidationError("levels: duplicate fraction")
    n = len(assembly.frees)
    alphas = np.array(list(itertools.product(levels, repeat=n)))
    return alphas * assembly.p_max()[None, :]


@dataclass(frozen=True)
class MeasurementRecord:
    """One trial: commanded state, pressure vector, wrench in platform-dof order."""

    state: PlatformState
    pressures: np.ndarray
    wrench: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pressures, dtype=float)
        w = np.asarray(self.wrench, dtype=float)
        p.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "pressures", p)
        object.__setattr__(self, "wrench", w)

    @property
    def zero_pressure(self) -> bool:
        return bool(np.all(self.pressures == 0.0))


def wrench_column_names(dofs) -> list[str]:
    return [f"{d}_N" if d.startswith("F") else f"{d}_Nm" for d in dofs]


def measurement_header(assembly: Assembly) -> str:
    pressure_cols = [f"p{i + 1}_pa" for i in range(len(assembly.frees))]
    return ",".join(["dl_m", "dphi_rad", *pressure_cols, *wrench_column_names(assembly.dofs)])


def measurements_to_csv(records, assembly: Assembly) -> str:
    """Serialize records in the measurement CSV schema (shortest exact floats)."""
    lines = [measurement_header(assembly)]
    for record in records:
        values = [record.state.dl, record.state.dphi, *record.pressures, *record.wrench]
        lines.append(",".join(repr(float(v)) for v in values))
    return "\n".join(lines) + "\n"


def load_measurements(text: str, assembly: Assembly) -> list[MeasurementRecord]:
    """Parse a measurement CSV, validating pressures against each p_max."""
    lines = [line.rstrip("\r") for line in text.split("\n")]
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("row 1: empty document")
    expected = measurement_header(assembly)
    if lines[0] != expected:
        raise ParseError(f"row 1: header mismatch, expected {expected!r}")
    n = len(assembly.frees)
    k = len(assembly.dofs)
    records = []
    for row, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 2 + n + k:
            raise ParseError(f"row {row}: expected {2 + n + k} fields, got {len(parts)}")
        values = []
        for part in parts:
            try:
                value = float(part)
            except ValueError:
                raise ParseError(f"row {row}: invalid number {part!r}") from None
            if not math.isfinite(value):
                raise ParseError(f"row {row}: non-finite value {part!r}")
            values.append(value)
        pressures = np.array(values[2 : 2 + n])
        for (design, _), pressure in zip(assembly.frees, pressures):
            if pressure < 0.0:
                raise NegativePressure(f"row {row}: {design.name}: pressure {pressure} Pa is negative")
            if pressure > design.p_max:
                raise PressureLimit(
                    f"row {row}: {design.name}: pressure {pressure} Pa exceeds "
                    f"p_max {design.p_max} Pa"
                )
        records.append(
            MeasurementRecord(
                state=PlatformState(dl=values[0], dphi=values[1]),
                pressures=pressures,
                wrench=np.array(values[2 + n :]),
            )
        )
    return records


def _states_match(a: PlatformState, b: PlatformState) -> bool:
    return abs(a.dl - b.dl) <= STATE_MATCH_TOL and abs(a.dphi - b.dphi) <= STATE_MATCH_TOL


def baseline_subtract(records) -> list[MeasurementRecord]:
    """Isolate the pressure-driven wrench by subtracting the zero-pressure row.

    Every record's wrench is replaced by wrench - wrench(state, p=0); records
    that are themselves zero-pressure rows map to exactly zero. The first
    zero-pressure row found for a state is its baseline.
    """
    records = list(records)
    baselines = [(r.state, r.wrench) for r in records if r.zero_pressure]
    out = []
    for record in records:
        if record.zero_pressure:
            active = np.zeros_like(record.wrench)
        else:
            for state, wrench in baselines:
                if _states_match(state, record.state):
                    active = record.wrench - wrench
                    break
            else:
                raise MissingBaseline(
                    f"no zero-pressure record for state "
                    f"dl={record.state.dl}, dphi={record.state.dphi}"
                )
        out.append(
            MeasurementRecord(state=record.state, pressures=record.pressures, wrench=active)
        )
    return out


# ---------------------------------------------------------------------------
# Error metrics


@dataclass(frozen=True)
class ErrorReport:
    """Componentwise RMSE and maximum absolute error over aligned wrench lists."""

    dofs: tuple
    rmse: np.ndarray
    max_abs: np.ndarray
    count: int


def error_metrics(predicted, measured, dofs) -> ErrorReport:
    predicted = np.atleast_2d(np.asarray(predicted, dtype=float))
    measured = np.atleast_2d(np.asarray(measured, dtype=float))
    if predicted.size == 0 or measured.size == 0:
        raise EmptyInput("error metrics need at least one evaluation point")
    if predicted.shape != measured.shape:
        raise LengthMismatch(
            f"predicted {predicted.shape} and measured {measured.shape} differ"
        )
    errors = predicted - measured
    return ErrorReport(
        dofs=tuple(dofs),
        rmse=np.sqrt(np.mean(errors**2, axis=0)),
        max_abs=np.max(np.abs(errors), axis=0),
        count=predicted.shape[0],
    )


def analyze_measurements(assembly: Assembly, records) -> ErrorReport:
    """Model-vs-measurement errors after baseline subtraction.

    For every record the model wrench is evaluated at the record's state and
    pressures and compared against the measured wrench with its zero-pressure
    baseline removed.
    """
    active = baseline_subtract(records)
    predicted = [
        project_wrench(net_wrench(assembly, r.state, r.pressures), assembly.dofs)
        for r in records
    ]
    measured = [r.wrench for r in active]
    return error_metrics(predicted, measured, assembly.dofs)


# ---------------------------------------------------------------------------
# Exports


def zonotope_csv(zonotope: Zonotope) -> str:
    """Vertices then generators, one row each, with a kind/units header."""
    header = ",".join(["kind", *wrench_column_names(zonotope.dofs)])
    lines = [header]
    for vertex in zonotope.vertices:
        lines.append(",".join(["vertex", *(repr(float(v)) for v in vertex)]))
    for generator in zonotope.generators:
        lines.append(",".join(["generator", *(repr(float(v)) for v in generator)]))
    return "\n".join(lines) + "\n"


_SVG_PALETTE = ("#4878cf", "#ee854a", "#6acc64", "#d65f5f", "#956cb4", "#8c613c")
_SVG_WIDTH = 640.0
_SVG_HEIGHT = 480.0
_SVG_MARGIN = 60.0


def _axis_unit(dof: str) -> str:
    return "N" if dof.startswith("F") else "N*m"


def zonotope_svg(zonotope: Zonotope) -> str:
    """Fixed-style SVG: filled hull, one arrow per generator, labeled axes.

    Styling is deliberately not configurable so identical zonotopes always
    produce identical bytes.
    """
    if zonotope.dim != 2:
        raise WrongDimension(f"svg rendering requires 2 selected components, got {zonotope.dim}")
    points = np.vstack([zonotope.vertices, zonotope.generators, np.zeros((1, 2))])
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    span = hi - lo
    span[span == 0.0] = 1.0
    lo = lo - 0.08 * span
    hi = hi + 0.08 * span
    span = hi - lo

    def sx(v: float) -> float:
        return _SVG_MARGIN + (v - lo[0]) / span[0] * (_SVG_WIDTH - 2 * _SVG_MARGIN)

    def sy(v: float) -> float:
        return _SVG_HEIGHT - _SVG_MARGIN - (v - lo[1]) / span[1] * (_SVG_HEIGHT - 2 * _SVG_MARGIN)

    def fmt(v: float) -> str:
        return f"{v:.2f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(_SVG_WIDTH)}" height="{fmt(_SVG_HEIGHT)}" '
        f'viewBox="0 0 {fmt(_SVG_WIDTH)} {fmt(_SVG_HEIGHT)}">',
        f'<rect x="0" y="0" width="{fmt(_SVG_WIDTH)}" height="{fmt(_SVG_HEIGHT)}" fill="#ffffff"/>',
    ]
    if lo[1] <= 0.0 <= hi[1]:
        y0 = fmt(sy(0.0))
        parts.append(
            f'<line x1="{fmt(sx(lo[0]))}" y1="{y0}" x2="{fmt(sx(hi[0]))}" y2="{y0}" '
            f'stroke="#999999" stroke-width="0.5"/>'
        )
    if lo[0] <= 0.0 <= hi[0]:
        x0 = fmt(sx(0.0))
        parts.append(
            f'<line x1="{x0}" y1="{fmt(sy(lo[1]))}" x2="{x0}" y2="{fmt(sy(hi[1]))}" '
            f'stroke="#999999" stroke-width="0.5"/>'
        )
    if len(zonotope.vertices) >= 2:
        coords = " ".join(f"{fmt(sx(v[0]))},{fmt(sy(v[1]))}" for v in zonotope.vertices)
        parts.append(
            f'<polygon points="{coords}" fill="#4878cf" fill-opacity="0.3" '
            f'stroke="#1f3a5f" stroke-width="1"/>'
        )
    origin = np.array([sx(0.0), sy(0.0)])
    for i, generator in enumerate(zonotope.generators):
        color = _SVG_PALETTE[i % len(_SVG_PALETTE)]
        tip = np.array([sx(generator[0]), sy(generator[1])])
        parts.append(
            f'<line x1="{fmt(origin[0])}" y1="{fmt(origin[1])}" '
            f'x2="{fmt(tip[0])}" y2="{fmt(tip[1])}" stroke="{color}" stroke-width="2"/>'
        )
        direction = tip - origin
        norm = float(np.hypot(*direction))
        if norm > 0.0:
            u = direction / norm
            left = tip - 8.0 * u + 4.0 * np.array([-u[1], u[0]])
            right = tip - 8.0 * u - 4.0 * np.array([-u[1], u[0]])
            parts.append(
                f'<polygon points="{fmt(tip[0])},{fmt(tip[1])} {fmt(left[0])},{fmt(left[1])} '
                f'{fmt(right[0])},{fmt(right[1])}" fill="{color}"/>'
            )
    x_label = f"{zonotope.dofs[0]} [{_axis_unit(zonotope.dofs[0])}]"
    y_label = f"{zonotope.dofs[1]} [{_axis_unit(zonotope.dofs[1])}]"
    parts.extend(
        [
            f'<text x="{fmt(_SVG_WIDTH / 2)}" y="{fmt(_SVG_HEIGHT - 16.0)}" '
            f'font-family="sans-serif" font-size="14" text-anchor="middle">{x_label}</text>',
            f'<text x="16.0" y="20.0" font-family="sans-serif" font-size="14">{y_label}</text>',
            f'<text x="{fmt(_SVG_MARGIN)}" y="{fmt(_SVG_HEIGHT - 38.0)}" '
            f'font-family="sans-serif" font-size="11">{lo[0]:.6g}</text>',
            f'<text x="{fmt(_SVG_WIDTH - _SVG_MARGIN)}" y="{fmt(_SVG_HEIGHT - 38.0)}" '
            f'font-family="sans-serif" font-size="11" text-anchor="end">{hi[0]:.6g}</text>',
            f'<text x="{fmt(_SVG_MARGIN - 4.0)}" y="{fmt(sy(hi[1]) + 12.0)}" '
            f'font-family="sans-serif" font-size="11" text-anchor="end">{hi[1]:.6g}</text>',
            f'<text x="{fmt(_SVG_MARGIN - 4.0)}" y="{fmt(sy(lo[1]))}" '
            f'font-family="sans-serif" font-size="11" text-anchor="end">{lo[1]:.6g}</text>',
            "</svg>",
        ]
    )
    return "\n".join(parts) + "\n"


def export_zonotope(zonotope: Zonotope, format: str, path) -> None:
    """Write a zonotope to ``path`` as csv or svg, deterministically."""
    if format == "csv":
        text = zonotope_csv(zonotope)
    elif format == "svg":
        text = zonotope_svg(zonotope)
    else:
        raise ValidationError(f"format: expected 'csv' or 'svg', got {format!r}")
    _write_text(path, text)


def sweep_csv(report: SweepReport) -> str:
    """Per-state sweep rows: state, verdict, area, attainable extremes, collapse."""
    columns = ["dl_m", "dphi_rad", "verdict", "area"]
    for column in wrench_column_names(report.dofs):
        columns.append(f"min_{column}")
        columns.append(f"max_{column}")
    columns.append("collapsed")
    lines = [",".join(columns)]
    for entry in report.entries:
        row = [repr(float(entry.state.dl)), repr(float(entry.state.dphi)), entry.verdict]
        if entry.valid:
            row.append(repr(float(entry.area)) if entry.area is not None else "")
            for j in range(len(report.dofs)):
                row.append(repr(float(entry.attainable_min[j])))
                row.append(repr(float(entry.attainable_max[j])))
            row.append("" if entry.collapsed is None else ("true" if entry.collapsed else "false"))
        else:
            row.extend([""] * (1 + 2 * len(report.dofs) + 1))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def export_sweep(report: SweepReport, path) -> None:
    _write_text(path, sweep_csv(report))


def error_report_csv(report: ErrorReport) -> str:
    lines = ["component,rmse,max_abs_error,count"]
    for name, rmse, max_abs in zip(
        wrench_column_names(report.dofs), report.rmse, report.max_abs
    ):
        lines.append(f"{name},{repr(float(rmse))},{repr(float(max_abs))},{report.count}")
    return "\n".join(lines) + "\n"


def export_error_report(report: ErrorReport, path) -> None:
    _write_text(path, error_report_csv(report))


def _write_text(path, text: str) -> None:
    try:
        with open(path, "wb") as handle:
            handle.write(text.encode("utf-8"))
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None
