"""Geometry and kinetics of a single fiber-reinforced elastomeric enclosure.

The actuator is modeled as an ideal cylinder wound with inextensible fibers,
so radius, length and twist are coupled and the deformation reduces to two
coordinates: an axial length change ``dl`` and a twist ``dphi``. The gradient
of the enclosed volume with respect to these coordinates maps gauge pressure
linearly to an axial force and a twisting moment.

All quantities are SI (meters, radians, pascals, newtons). Functions are pure
and the value types immutable, so everything here is thread-safe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    FiberUnwound,
    InvalidAngle,
    InvalidDesign,
    NegativePressure,
    OverExtended,
    PressureLimit,
    ZeroLength,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FreeDesign:
    """Relaxed-state parameters of one actuator.

    The sign of ``fiber_angle`` encodes the winding chirality. Angles of
    exactly 0 or +-pi/2 are rejected: both make the deformed-shape formulas
    singular and carry no physical winding.
    """

    name: str
    length: float
    radius: float
    fiber_angle: float
    p_max: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise InvalidDesign(f"{self.name}: length must be positive, got {self.length}")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise InvalidDesign(f"{self.name}: radius must be positive, got {self.radius}")
        if not (math.isfinite(self.fiber_angle) and 0.0 < abs(self.fiber_angle) < math.pi / 2.0):
            raise InvalidDesign(
                f"{self.name}: fiber angle must satisfy 0 < |angle| < pi/2 rad, "
                f"got {self.fiber_angle}"
            )
        if not (math.isfinite(self.p_max) and self.p_max > 0.0):
            raise InvalidDesign(f"{self.name}: p_max must be positive, got {self.p_max}")


@dataclass(frozen=True)
class DerivedGeometry:
    """Fiber constants implied by a design: helix length and signed turns."""

    fiber_length: float
    turns: float


@dataclass(frozen=True)
class Deformation:
    """Generalized deformation of one actuator: axial stretch and twist."""

    dl: float = 0.0
    dphi: float = 0.0


@dataclass(frozen=True)
class JacobianRow:
    """Volume gradient [dV/d(dl), dV/d(dphi)] at a deformation."""

    dv_dl: float
    dv_dphi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.dv_dl, self.dv_dphi])


@dataclass(frozen=True)
class AxialWrench:
    """Axial force (N) and twisting moment (N*m) about the actuator axis."""

    force: float
    moment: float


class Validity(enum.Enum):
    """Verdict of validate_deformation."""

    VALID = "Valid"
    ZERO_LENGTH = "ZeroLength"
    OVER_EXTENDED = "OverExtended"
    FIBER_UNWOUND = "FiberUnwound"

    @property
    def ok(self) -> bool:
        return self is Validity.VALID


_VIOLATION_ERRORS = {
    Validity.ZERO_LENGTH: ZeroLength,
    Validity.OVER_EXTENDED: OverExtended,
    Validity.FIBER_UNWOUND: FiberUnwound,
}


def derive_geometry(design: FreeDesign) -> DerivedGeometry:
    """Fiber length and signed fiber revolutions in the relaxed state.

    fiber_length = |L / cos(angle)| and turns = -(L / (2 pi R)) tan(angle),
    so turns always carries the opposite sign of the fiber angle.
    """
    fiber_length = abs(design.length / math.cos(design.fiber_angle))
    turns = -(design.length / (TWO_PI * design.radius)) * math.tan(design.fiber_angle)
    return DerivedGeometry(fiber_length=fiber_length, turns=turns)


def validate_deformation(design: FreeDesign, deformation: Deformation) -> Validity:
    """Classify a deformation without raising.

    A deformation is valid when the deformed length stays strictly between
    zero and the fiber length, and the twist has not cancelled the relaxed
    winding (the winding term 2*pi*turns + dphi must keep its relaxed sign).
    """
    geo = derive_geometry(design)
    length = design.length + deformation.dl
    if length <= 0.0:
        return Validity.ZERO_LENGTH
    if length >= geo.fiber_length:
        return Validity.OVER_EXTENDED
    wound = TWO_PI * geo.turns
    if (wound + deformation.dphi) * wound <= 0.0:
        return Validity.FIBER_UNWOUND
    return Validity.VALID


def _require_valid(design: FreeDesign, deformation: Deformation) -> None:
    verdict = validate_deformation(design, deformation)
    if not verdict.ok:
        raise _VIOLATION_ERRORS[verdict](
            f"{design.name}: {verdict.value} at dl={deformation.dl}, dphi={deformation.dphi}"
        )


def deformed_length(design: FreeDesign, deformation: Deformation) -> float:
    """Length of the deformed cylinder, L + dl."""
    _require_valid(design, deformation)
    return design.length + deformation.dl


def deformed_radius(design: FreeDesign, deformation: Deformation) -> float:
    """Radius of the deformed cylinder implied by the inextensible fiber."""
    _require_valid(design, deformation)
    geo = derive_geometry(design)
    length = design.length + deformation.dl
    winding = TWO_PI * geo.turns + deformation.dphi
    return geo.fiber_length / abs(winding) * math.sqrt(1.0 - (length / geo.fiber_length) ** 2)


def enclosed_volume(design: FreeDesign, deformation: Deformation) -> float:
    """Cavity volume pi * l * (B^2 - l^2) / (2 pi N + dphi)^2 with l = L + dl."""
    _require_valid(design, deformation)
    geo = derive_geometry(design)
    length = design.length + deformation.dl
    winding = TWO_PI * geo.turns + deformation.dphi
    return math.pi * length * (geo.fiber_length**2 - length**2) / winding**2


def fluid_jacobian(design: FreeDesign, deformation: Deformation) -> JacobianRow:
    """Closed-form gradient of enclosed_volume at a deformation.

    dV/d(dl)   = pi (B^2 - 3 l^2) / w^2
    dV/d(dphi) = 2 pi l (l^2 - B^2) / w^3
    with l = L + dl and w = 2 pi N + dphi.
    """
    _require_valid(design, deformation)
    geo = derive_geometry(design)
    length = design.length + deformation.dl
    winding = TWO_PI * geo.turns + deformation.dphi
    dv_dl = math.pi * (geo.fiber_length**2 - 3.0 * length**2) / winding**2
    dv_dphi = TWO_PI * length * (length**2 - geo.fiber_length**2) / winding**3
    return JacobianRow(dv_dl=dv_dl, dv_dphi=dv_dphi)


def axial_wrench(design: FreeDesign, deformation: Deformation, pressure: float) -> AxialWrench:
    """Fiber-generated force and moment at a deformation and gauge pressure."""
    if pressure < 0.0:
        raise NegativePressure(f"{design.name}: pressure {pressure} Pa is negative")
    if pressure > design.p_max:
        raise PressureLimit(
            f"{design.name}: pressure {pressure} Pa exceeds p_max {design.p_max} Pa"
        )
    row = fluid_jacobian(design, deformation)
    return AxialWrench(force=row.dv_dl * pressure, moment=row.dv_dphi * pressure)


def force_moment_ratio(fiber_angle: float) -> float:
    """Relaxed-state ratio force * radius / moment for a given fiber angle.

    Dimensionless closed form (1 - 2 cot^2) / (2 cot); crosses zero at
    arctan(sqrt(2)), where the axial force changes between contractile and
    extensile. Equals radius * dv_dl / dv_dphi of any relaxed design with
    that fiber angle.
    """
    if not (math.isfinite(fiber_angle) and 0.0 < abs(fiber_angle) < math.pi / 2.0):
        raise InvalidAngle(f"fiber angle must satisfy 0 < |angle| < pi/2 rad, got {fiber_angle}")
    cot = 1.0 / math.tan(fiber_angle)
    return (1.0 - 2.0 * cot * cot) / (2.0 * cot)
