"""Exception hierarchy shared by all modules.

Everything raised on purpose derives from ModelError, so callers (service,
CLI) can map the whole family to user-facing diagnostics in one place.
"""


class ModelError(Exception):
    """Base class for every error raised by this package."""


class InvalidDesign(ModelError):
    """Actuator parameters violate the ideal-cylinder model assumptions."""


class InvalidAngle(ModelError):
    """Fiber angle outside the open interval 0 < |angle| < pi/2."""


class DegenerateState(ModelError):
    """Deformation reached a geometric degeneracy of the cylinder model."""


class ZeroLength(DegenerateState):
    """Deformed length is zero or negative."""


class OverExtended(DegenerateState):
    """Deformed length reached the fiber length; the fiber is taut."""


class FiberUnwound(DegenerateState):
    """Twist cancelled the relaxed fiber winding."""


class NegativePressure(ModelError):
    """Gauge pressure below zero is outside the model."""


class PressureLimit(ModelError):
    """Pressure above the actuator's rated maximum."""


class NonUnitAxis(ModelError):
    """Placement axis is not a unit vector."""


class KinematicsInvalid(ModelError):
    """Platform state maps to an invalid deformation for some actuator."""

    def __init__(self, free_name, verdict, detail=""):
        self.free_name = free_name
        self.verdict = verdict
        msg = f"{free_name}: {verdict}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class TooManyFrees(ModelError):
    """Actuator count exceeds the corner-enumeration guard."""


class EmptySelection(ModelError):
    """No wrench components selected."""


class DimensionMismatch(ModelError):
    """Vector or selection dimensions disagree."""


class WrongDimension(ModelError):
    """Operation defined only for a specific projection dimension."""


class LengthMismatch(ModelError):
    """Paired sequences have different lengths."""


class EmptyInput(ModelError):
    """Operation needs at least one element."""


class MissingBaseline(ModelError):
    """No zero-pressure record for a state present in the dataset."""


class ParseError(ModelError):
    """Malformed input document."""


class ValidationError(ModelError):
    """Well-formed input violating an invariant; message names the field."""


class IoError(ModelError):
    """Filesystem or transport failure."""
