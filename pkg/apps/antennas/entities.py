import math
from dataclasses import dataclass, replace

import numpy as np

from apps.antennas.constants import (
    MountHeight,
    PATCH_HPBW_DEG,
    PATCH_PEAK_GAIN,
    PatternKind,
    PolarizationKind,
)
from apps.antennas.exceptions import AntennaArgumentError

ZENITH = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Polarization:
    kind: str

    def __post_init__(self):
        if self.kind not in PolarizationKind.values:
            raise AntennaArgumentError(f"unknown polarization '{self.kind}'")

    @property
    def is_circular(self) -> bool:
        return self.kind != PolarizationKind.LINEAR_VERTICAL


@dataclass(frozen=True)
class AntennaConfig:
    pattern: str
    polarization: Polarization
    boresight: tuple = ZENITH
    directivity_dbi: float = 0.0
    hpbw_deg: float | None = None
    aperture_diameter_m: float | None = None
    mount_height: str = MountHeight.GROUND

    def __post_init__(self):
        if self.pattern not in PatternKind.values:
            raise AntennaArgumentError(f"unknown antenna pattern '{self.pattern}'")
        if self.pattern == PatternKind.ISOTROPIC and self.directivity_dbi != 0.0:
            raise AntennaArgumentError("isotropic antenna must have 0 dBi directivity")
        if self.pattern != PatternKind.ISOTROPIC and not (self.hpbw_deg and self.hpbw_deg > 0):
            raise AntennaArgumentError(f"{self.pattern} antenna needs a positive hpbw_deg")
        norm = math.sqrt(sum(c * c for c in self.boresight))
        if abs(norm - 1.0) > 1e-6:
            raise AntennaArgumentError(f"boresight must be a unit vector, got norm {norm}")

    @property
    def peak_gain(self) -> float:
        return 10.0 ** (self.directivity_dbi / 10.0)

    @property
    def boresight_vector(self) -> np.ndarray:
        return np.asarray(self.boresight, dtype=float)

    def pointed_at(self, direction) -> "AntennaConfig":
        d = np.asarray(direction, dtype=float)
        d = d / np.linalg.norm(d)
        return replace(self, boresight=tuple(float(c) for c in d))

    @classmethod
    def isotropic(cls, polarization: str, mount_height: str = MountHeight.GROUND) -> "AntennaConfig":
        return cls(
            pattern=PatternKind.ISOTROPIC,
            polarization=Polarization(polarization),
            mount_height=mount_height,
        )

    @classmethod
    def patch(cls, polarization: str, mount_height: str = MountHeight.GROUND) -> "AntennaConfig":
        return cls(
            pattern=PatternKind.PATCH,
            polarization=Polarization(polarization),
            directivity_dbi=10.0 * math.log10(PATCH_PEAK_GAIN),
            hpbw_deg=PATCH_HPBW_DEG,
            mount_height=mount_height,
        )


@dataclass(frozen=True)
class TxFieldSpec:
    """Satellite transmitter: isotropic pattern, fixed polarization and radiated power."""

    polarization: Polarization
    power_w: float = 1.0

    def field_at_1m(self, direction) -> np.ndarray:
        from apps.antennas.services.polarization_service import tx_field_at_1m

        return tx_field_at_1m(self.polarization, direction, power_w=self.power_w)
