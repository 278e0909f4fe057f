import hashlib
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc

from apps.antennas.entities import AntennaConfig
from apps.field.exceptions import FieldArgumentError
from apps.tracer.entities import RayPath, RxGridSpec, SatellitePose


@dataclass(frozen=True, eq=False)
class PathContribution:
    """Complex field one traced path delivers at the grid center."""

    path: RayPath
    e_field: np.ndarray
    frequency_hz: float

    @property
    def path_id(self) -> str:
        return self.path.path_id

    @property
    def mechanism_label(self) -> str:
        return str(self.path.label)

    @property
    def delay_s(self) -> float:
        return self.path.total_length / sc.c

    @property
    def arrival_direction(self) -> np.ndarray:
        return self.path.arrival_direction

    @property
    def power(self) -> float:
        return float(np.vdot(self.e_field, self.e_field).real)

    def arrival_angles_deg(self) -> tuple[float, float]:
        """(azimuth, elevation) of the direction the ray arrives from."""
        look = self.path.look_direction
        azimuth = math.degrees(math.atan2(look[0], look[1])) % 360.0
        elevation = math.degrees(math.asin(max(-1.0, min(1.0, float(look[2])))))
        return azimuth, elevation


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    contributions: tuple
    frequency_hz: float
    pose: SatellitePose
    grid: RxGridSpec
    antenna: AntennaConfig
    rx_amplitudes: np.ndarray
    center_weights: np.ndarray
    seed: int

    def __post_init__(self):
        expected = self.grid.points_per_side ** 2
        if len(self.rx_amplitudes) != expected:
            raise FieldArgumentError(f"expected {expected} grid amplitudes, got {len(self.rx_amplitudes)}")
        if len(self.center_weights) != len(self.contributions):
            raise FieldArgumentError("one center weight per contribution is required")

    @property
    def los(self) -> bool:
        return any(c.mechanism_label == "L" for c in self.contributions)


@dataclass(frozen=True)
class ScatterPhaseSource:
    """Deterministic uniform phases for diffuse-scattering contributions."""

    master_seed: int

    def phase(self, tile_id, path_id: str, frequency_hz: float) -> float:
        key = f"{self.master_seed}|{'-'.join(str(i) for i in tile_id)}|{path_id}|{round(frequency_hz)}"
        digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest()
        u = int.from_bytes(digest, "big") / 2.0 ** 64
        return 2.0 * math.pi * u - math.pi
