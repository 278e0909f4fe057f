import math

from django.db import models

from apps.scene.constants import BandGroup


class Band(models.TextChoices):
    S = "S", "S band"
    C = "C", "C band"
    KA = "Ka", "Ka band"
    Q = "Q", "Q band"
    V = "V", "V band"


# Hz
BAND_CENTER_HZ = {
    Band.S: 2.1e9,
    Band.C: 3.5e9,
    Band.KA: 23.5e9,
    Band.Q: 41.0e9,
    Band.V: 51.0e9,
}

BAND_RANGE_HZ = {
    Band.S: (1.98e9, 2.2e9),
    Band.C: (3.4e9, 3.9e9),
    Band.KA: (17.0e9, 30.0e9),
    Band.Q: (36.0e9, 46.0e9),
    Band.V: (46.0e9, 56.0e9),
}

BAND_GROUP = {
    Band.S: BandGroup.LOW,
    Band.C: BandGroup.LOW,
    Band.KA: BandGroup.HIGH,
    Band.Q: BandGroup.HIGH,
    Band.V: BandGroup.HIGH,
}


class PatternKind(models.TextChoices):
    ISOTROPIC = "isotropic", "Isotropic"
    PATCH = "patch", "Patch"
    APERTURE = "aperture", "Aperture"


class PolarizationKind(models.TextChoices):
    LINEAR_VERTICAL = "linear-vertical", "Linear (vertical)"
    RHCP = "circular-RHCP", "Right-hand circular"
    LHCP = "circular-LHCP", "Left-hand circular"


class MountHeight(models.TextChoices):
    GROUND = "ground-1.5m", "Ground, 1.5 m"
    ROOFTOP = "rooftop-mean", "Mean rooftop level"


class UseCase(models.TextChoices):
    HANDHELD = "handheld", "Handheld"
    VEHICULAR = "vehicular", "Vehicular"
    FIXED = "fixed", "Fixed"


GROUND_MOUNT_HEIGHT_M = 1.5

# cos^q power pattern with q = 1: peak 2(q+1), HPBW 120 deg
PATCH_PEAK_GAIN = 4.0
PATCH_HPBW_DEG = 120.0

APERTURE_DIAMETER_M = 0.6

# (peak directivity dBi, HPBW deg)
APERTURE_BEAMS = {
    Band.KA: (44.0, 2.9),
    Band.Q: (48.0, 1.8),
    Band.V: (50.0, 1.5),
}

USE_CASES = {
    UseCase.HANDHELD: {
        "pattern": PatternKind.ISOTROPIC,
        "polarization": PolarizationKind.LINEAR_VERTICAL,
        "mount_height": MountHeight.GROUND,
        "bands": (Band.S, Band.C),
    },
    UseCase.VEHICULAR: {
        "pattern": PatternKind.PATCH,
        "polarization": PolarizationKind.LINEAR_VERTICAL,
        "mount_height": MountHeight.GROUND,
        "bands": (Band.S, Band.C),
    },
    UseCase.FIXED: {
        "pattern": PatternKind.APERTURE,
        "polarization": PolarizationKind.RHCP,
        "mount_height": MountHeight.ROOFTOP,
        "bands": (Band.KA, Band.Q, Band.V),
    },
}

SATELLITE_POLARIZATION = PolarizationKind.RHCP
SATELLITE_POWER_W = 1.0

UNIT_TOLERANCE = 1e-6
TRANSVERSALITY_TOLERANCE = 1e-6

HALF_POWER_EXPONENT = 4.0 * math.log(2.0)
