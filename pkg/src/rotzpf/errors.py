class PhysicsConstraintError(ValueError):
    """Input violates a physical constraint (e.g. speed at or beyond light)."""


class LightCylinderError(PhysicsConstraintError):
    """Detector at or beyond the light cylinder r = c / Omega."""


class PoleError(ValueError):
    """Evaluation point sits on a pole of a lag kernel."""


class NumericalError(RuntimeError):
    """Quadrature or summation failed to reach the requested tolerance."""


class NearLightCylinderError(PhysicsConstraintError):
    """beta above the supported ceiling (0.999): gamma^2 grows without bound."""
