from django.db import models


TERRAIN_OWNER = "terrain"
SCENE_FORMAT_JSON = "json"

MIN_BUILDING_HEIGHT_M = 3.0
DEFAULT_TILE_SIDE_M = 5.0

# tolerance for collinear footprint vertices and tile slivers
GEOMETRY_EPS = 1e-9


class Scenario(models.TextChoices):
    DENSE_URBAN = "dense-urban", "Dense urban"
    URBAN = "urban", "Urban"
    SUBURBAN = "suburban", "Suburban"
    CUSTOM = "custom", "Custom"


class BandGroup(models.TextChoices):
    LOW = "sc", "S/C band"
    HIGH = "kaqv", "Ka/Q/V band"


class FaceKind(models.TextChoices):
    WALL = "wall", "Wall"
    ROOF = "roof", "Roof"
    TERRAIN = "terrain", "Terrain"


# (eps_r, sigma S/m, scattering coefficient)
WALL_MATERIALS = {
    BandGroup.LOW: (5.0, 0.01, 0.4),
    BandGroup.HIGH: (5.5, 0.4, 0.6),
}

TERRAIN_MATERIALS = {
    (BandGroup.LOW, Scenario.DENSE_URBAN): (5.0, 0.01, 0.5),
    (BandGroup.LOW, Scenario.URBAN): (5.0, 0.01, 0.4),
    (BandGroup.LOW, Scenario.SUBURBAN): (5.0, 0.01, 0.25),
    (BandGroup.HIGH, Scenario.DENSE_URBAN): (5.5, 0.4, 0.75),
    (BandGroup.HIGH, Scenario.URBAN): (5.5, 0.4, 0.6),
    (BandGroup.HIGH, Scenario.SUBURBAN): (5.5, 0.4, 0.375),
}

# Generator presets tuned to the published density and height statistics.
SCENARIO_PRESETS = {
    Scenario.DENSE_URBAN: {
        "rows": 14, "cols": 14, "block_m": 12.0, "street_m": 10.0,
        "height_mean_m": 15.0, "height_std_m": 9.0,
        "target_density_per_km2": 2028.0,
    },
    Scenario.URBAN: {
        "rows": 14, "cols": 14, "block_m": 18.0, "street_m": 14.0,
        "height_mean_m": 13.0, "height_std_m": 7.0,
        "target_density_per_km2": 971.0,
    },
    Scenario.SUBURBAN: {
        "rows": 14, "cols": 14, "block_m": 14.0, "street_m": 26.0,
        "height_mean_m": 8.0, "height_std_m": 5.0,
        "target_density_per_km2": 631.0,
    },
}
