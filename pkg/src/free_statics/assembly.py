"""Parallel composition of placed actuators acting on a shared end effector.

Each actuator attaches to the end effector at a displacement ``d`` along a
unit axis, both expressed in the body-fixed end-effector frame. Its axial
force and twisting moment map into a 6-component wrench about the
end-effector origin through a constant 6x2 transform; stacking the
transformed volume gradients of all actuators gives the assembly Jacobian,
whose transpose maps the pressure vector to the net wrench.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptySelection,
    KinematicsInvalid,
    NegativePressure,
    NonUnitAxis,
    PressureLimit,
    ValidationError,
)
from .free_core import Deformation, FreeDesign, fluid_jacobian, validate_deformation

WRENCH_COMPONENTS = ("Fx", "Fy", "Fz", "Mx", "My", "Mz")

UNIT_AXIS_TOL = 1e-9


def dof_indices(dofs) -> tuple[int, ...]:
    """Indices of the selected wrench components, validating the selection."""
    dofs = tuple(dofs)
    if not dofs:
        raise EmptySelection("dofs: at least one wrench component must be selected")
    indices = []
    for name in dofs:
        if name not in WRENCH_COMPONENTS:
            raise ValidationError(
                f"dofs: unknown wrench component {name!r}, expected one of "
                f"{', '.join(WRENCH_COMPONENTS)}"
            )
        indices.append(WRENCH_COMPONENTS.index(name))
    if len(set(indices)) != len(indices):
        raise ValidationError("dofs: duplicate wrench component")
    return tuple(indices)


def _frozen_vector(value, name: str) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.shape != (3,):
        raise DimensionMismatch(f"{name}: expected 3 components, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Placement:
    """Attachment point ``d`` and unit actuator axis in the end-effector frame."""

    d: np.ndarray
    axis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "d", _frozen_vector(self.d, "d"))
        axis = _frozen_vector(self.axis, "axis")
        norm = float(np.linalg.norm(axis))
        if abs(norm - 1.0) > UNIT_AXIS_TOL:
            raise NonUnitAxis(f"axis norm {norm} deviates from 1 beyond {UNIT_AXIS_TOL}")
        object.__setattr__(self, "axis", axis)


@dataclass(frozen=True)
class PlatformState:
    """End-effector displacement for the default 2-DOF platform: slide and twist."""

    dl: float = 0.0
    dphi: float = 0.0


@dataclass(frozen=True)
class Wrench6:
    """Force and moment 3-vectors about the end-effector origin."""

    force: np.ndarray
    moment: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "force", _frozen_vector(self.force, "force"))
        object.__setattr__(self, "moment", _frozen_vector(self.moment, "moment"))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.force, self.moment])


def _coaxial_map(assembly: "Assembly", state: PlatformState) -> list[Deformation]:
    # All actuator axes parallel to the platform motion: every actuator sees
    # the platform slide and twist directly.
    q = Deformation(dl=state.dl, dphi=state.dphi)
    return [q] * len(assembly.frees)


KINEMATIC_MAPS = {"coaxial": _coaxial_map}


def register_kinematic_map(name: str, mapper) -> None:
    """Register an alternative platform-state-to-deformation map by identifier."""
    KINEMATIC_MAPS[name] = mapper


@dataclass(frozen=True)
class Assembly:
    """Ordered parallel combination of (design, placement) pairs.

    ``dofs`` selects which wrench components the platform actuates/reports;
    ``kinematic_map`` names the registered map from platform state to
    per-actuator deformations.
    """

    frees: tuple
    dofs: tuple = ("Fz", "Mz")
    kinematic_map: str = "coaxial"

    def __post_init__(self):
        frees = tuple((design, placement) for design, placement in self.frees)
        if not frees:
            raise ValidationError("frees: assembly needs at least one actuator")
        names = [design.name for design, _ in frees]
        if len(set(names)) != len(names):
            raise ValidationError("frees: actuator names must be unique")
        object.__setattr__(self, "frees", frees)
        object.__setattr__(self, "dofs", tuple(self.dofs))
        dof_indices(self.dofs)
        if self.kinematic_map not in KINEMATIC_MAPS:
            raise ValidationError(f"kinematic_map: unknown identifier {self.kinematic_map!r}")

    @property
    def designs(self) -> tuple[FreeDesign, ...]:
        return tuple(design for design, _ in self.frees)

    @property
    def placements(self) -> tuple[Placement, ...]:
        return tuple(placement for _, placement in self.frees)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(design.name for design, _ in self.frees)

    def p_max(self) -> np.ndarray:
        return np.array([design.p_max for design, _ in self.frees])


def wrench_transform(placement: Placement) -> np.ndarray:
    """6x2 matrix mapping one actuator's (force, moment) to an end-effector wrench.

    Column 0 carries the axial force: axis on top, lever arm d x axis below.
    Column 1 carries the twisting moment along the axis alone.
    """
    transform = np.zeros((6, 2))
    transform[0:3, 0] = placement.axis
    transform[3:6, 0] = np.cross(placement.d, placement.axis)
    transform[3:6, 1] = placement.axis
    return transform


def map_platform_state(assembly: Assembly, state: PlatformState) -> list[Deformation]:
    """Per-actuator deformations for a platform state, validated per actuator."""
    mapper = KINEMATIC_MAPS[assembly.kinematic_map]
    deformations = mapper(assembly, state)
    if len(deformations) != len(assembly.frees):
        raise ValidationError(
            f"kinematic_map {assembly.kinematic_map!r} returned "
            f"{len(deformations)} deformations for {len(assembly.frees)} actuators"
        )
    for (design, _), deformation in zip(assembly.frees, deformations):
        verdict = validate_deformation(design, deformation)
        if not verdict.ok:
            raise KinematicsInvalid(
                design.name,
                verdict.value,
                f"dl={deformation.dl}, dphi={deformation.dphi}",
            )
    return list(deformations)


def assembly_jacobian(assembly: Assembly, state: PlatformState) -> np.ndarray:
    """n x 6 fluid Jacobian of the assembly in end-effector coordinates.

    Row i is the actuator's volume gradient pushed through its wrench
    transform; the transpose maps pressures to the net wrench.
    """
    deformations = map_platform_state(assembly, state)
    rows = []
    for (design, placement), deformation in zip(assembly.frees, deformations):
        row = fluid_jacobian(design, deformation)
        rows.append(wrench_transform(placement) @ row.as_array())
    return np.array(rows)


def net_wrench(assembly: Assembly, state: PlatformState, pressures) -> Wrench6:
    """Net end-effector wrench for a pressure vector inside the pressure box."""
    pressures = np.asarray(pressures, dtype=float)
    if pressures.shape != (len(assembly.frees),):
        raise DimensionMismatch(
            f"pressures: expected {len(assembly.frees)} values, got shape {pressures.shape}"
        )
    for (design, _), pressure in zip(assembly.frees, pressures):
        if pressure < 0.0:
            raise NegativePressure(f"{design.name}: pressure {pressure} Pa is negative")
        if pressure > design.p_max:
            raise PressureLimit(
                f"{design.name}: pressure {pressure} Pa exceeds p_max {design.p_max} Pa"
            )
    stacked = assembly_jacobian(assembly, state).T @ pressures
    return Wrench6(force=stacked[0:3], moment=stacked[3:6])


def project_wrench(wrench, dofs) -> np.ndarray:
    """Selected components of a wrench, in selection order."""
    indices = dof_indices(dofs)
    vector = wrench.as_array() if isinstance(wrench, Wrench6) else np.asarray(wrench, dtype=float)
    if vector.shape != (6,):
        raise DimensionMismatch(f"wrench: expected 6 components, got shape {vector.shape}")
    return vector[list(indices)]
