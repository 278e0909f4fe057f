from django.db import models

EARTH_RADIUS_M = 6_371_000.0
DEFAULT_ALTITUDE_M = 500_000.0

# end-point shrink for occlusion tests
SELF_INTERSECTION_EPS_M = 1e-6

DEFAULT_GRID_SIDE_M = 4.0
DEFAULT_GRID_POINTS = 15

MIN_SIN_BETA0 = 1e-6
EDGE_PARAM_MARGIN = 1e-9
KELLER_TOLERANCE = 1e-9


class InteractionKind(models.TextChoices):
    REFLECTION = "R", "Reflection"
    DIFFRACTION = "D", "Diffraction"
    SCATTERING = "S", "Scattering"


class MechanismLabel(models.TextChoices):
    LOS = "L", "Line of sight"
    REFLECTION = "R", "Reflections"
    REFLECTION_DIFFRACTION = "RD", "Reflections and diffractions"
    DIFFRACTION = "D", "Diffractions"
    SCATTERING = "S", "Diffuse scattering"
    REFLECTION_SCATTERING = "RS", "Reflections and diffuse scattering"


MECHANISM_ORDER = ("L", "R", "RD", "D", "S", "RS")

# maximum interactions per mechanism combination
DEFAULT_BUDGET = {
    "reflections": 3,
    "diffractions": 2,
    "reflections_diffractions": 2,
    "scatterings": 1,
    "reflections_scatterings": 2,
    "diffractions_scatterings": 0,
}

BUDGET_LIMITS = {
    "reflections": 3,
    "diffractions": 2,
    "reflections_diffractions": 2,
    "scatterings": 1,
    "reflections_scatterings": 2,
    "diffractions_scatterings": 0,
}
