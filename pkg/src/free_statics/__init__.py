"""Statics of fiber-reinforced elastomeric enclosures (FREEs).

Models single actuators as ideal fiber-wound cylinders, composes parallel
assemblies, builds force zonotopes, solves box-constrained inverse statics
and runs measurement-analysis pipelines. Ships with a FastAPI service and a
CLI front end.
"""

from . import errors
from .assembly import (
    WRENCH_COMPONENTS,
    Assembly,
    Placement,
    PlatformState,
    Wrench6,
    assembly_jacobian,
    dof_indices,
    map_platform_state,
    net_wrench,
    project_wrench,
    register_kinematic_map,
    wrench_transform,
)
from .experiment_io import (
    ErrorReport,
    MeasurementRecord,
    RigConfig,
    analyze_measurements,
    baseline_subtract,
    builtin_config_names,
    builtin_config_text,
    error_metrics,
    export_sweep,
    export_zonotope,
    load_measurements,
    measurements_to_csv,
    parse_config,
    pressure_grid,
    serialize_config,
    to_assembly,
)
from .force_analysis import (
    CollapseLocus,
    GridAxis,
    PressureSolution,
    SweepEntry,
    SweepReport,
    Zonotope,
    contains,
    force_zonotope,
    full_authority,
    generator_extremes,
    hull_distance,
    origin_strictly_inside,
    solve_box_lsq,
    solve_pressures,
    workspace_sweep,
    zonotope_area,
    zonotope_from_generators,
)
from .free_core import (
    AxialWrench,
    Deformation,
    DerivedGeometry,
    FreeDesign,
    JacobianRow,
    Validity,
    axial_wrench,
    deformed_length,
    deformed_radius,
    derive_geometry,
    enclosed_volume,
    fluid_jacobian,
    force_moment_ratio,
    validate_deformation,
)

__version__ = "0.1.0"
