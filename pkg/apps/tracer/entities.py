import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from apps.antennas.constants import GROUND_MOUNT_HEIGHT_M, MountHeight
from apps.tracer.constants import (
    BUDGET_LIMITS,
    DEFAULT_ALTITUDE_M,
    DEFAULT_BUDGET,
    DEFAULT_GRID_POINTS,
    DEFAULT_GRID_SIDE_M,
    InteractionKind,
    MechanismLabel,
)
from apps.tracer.exceptions import GeometryError, TracerArgumentError


@dataclass(frozen=True)
class SatellitePose:
    elevation_deg: float
    azimuth_deg: float
    altitude_m: float = DEFAULT_ALTITUDE_M

    def __post_init__(self):
        if not 0.0 < self.elevation_deg <= 90.0:
            raise TracerArgumentError(f"elevation must be in (0, 90], got {self.elevation_deg}")
        if not self.altitude_m > 0:
            raise TracerArgumentError(f"altitude must be > 0, got {self.altitude_m}")

    @property
    def direction(self) -> np.ndarray:
        """Unit vector toward the satellite; azimuth clockwise from +y toward +x."""
        el = math.radians(self.elevation_deg)
        az = math.radians(self.azimuth_deg % 360.0)
        return np.array([math.cos(el) * math.sin(az), math.cos(el) * math.cos(az), math.sin(el)])


@dataclass(frozen=True)
class RxGridSpec:
    center: tuple
    side: float = DEFAULT_GRID_SIDE_M
    points_per_side: int = DEFAULT_GRID_POINTS
    height_mode: str = MountHeight.GROUND

    def __post_init__(self):
        if not self.side >= 0:
            raise TracerArgumentError(f"grid side must be >= 0, got {self.side}")
        if self.points_per_side < 1:
            raise TracerArgumentError(f"points_per_side must be >= 1, got {self.points_per_side}")

    @property
    def center_point(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    @property
    def spacing(self) -> float:
        if self.points_per_side == 1:
            return 0.0
        return self.side / (self.points_per_side - 1)

    def offsets(self) -> np.ndarray:
        """(N², 3) displacements from the center, row-major in (y, x)."""
        n = self.points_per_side
        axis = (np.arange(n) - (n - 1) / 2.0) * self.spacing
        yy, xx = np.meshgrid(axis, axis, indexing="ij")
        return np.stack([xx.ravel(), yy.ravel(), np.zeros(n * n)], axis=1)

    def points(self) -> np.ndarray:
        return self.center_point + self.offsets()

    @staticmethod
    def mount_z(height_mode: str, mean_building_height: float) -> float:
        if height_mode == MountHeight.ROOFTOP:
            return max(mean_building_height, GROUND_MOUNT_HEIGHT_M)
        return GROUND_MOUNT_HEIGHT_M


@dataclass(frozen=True)
class InteractionBudget:
    reflections: int = DEFAULT_BUDGET["reflections"]
    diffractions: int = DEFAULT_BUDGET["diffractions"]
    reflections_diffractions: int = DEFAULT_BUDGET["reflections_diffractions"]
    scatterings: int = DEFAULT_BUDGET["scatterings"]
    reflections_scatterings: int = DEFAULT_BUDGET["reflections_scatterings"]
    diffractions_scatterings: int = DEFAULT_BUDGET["diffractions_scatterings"]

    def __post_init__(self):
        for name, limit in BUDGET_LIMITS.items():
            value = getattr(self, name)
            if not 0 <= value <= limit:
                raise TracerArgumentError(f"budget '{name}' must be in [0, {limit}], got {value}")

    def allows(self, n_refl: int, n_diff: int, n_scat: int) -> bool:
        if n_scat and n_diff:
            return n_refl == 0 and n_scat + n_diff <= self.diffractions_scatterings
        if n_scat:
            if n_refl:
                return n_refl + n_scat <= self.reflections_scatterings
            return n_scat <= self.scatterings
        if n_diff:
            if n_refl:
                return n_refl + n_diff <= self.reflections_diffractions
            return n_diff <= self.diffractions
        return n_refl <= self.reflections

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in BUDGET_LIMITS}


@dataclass(frozen=True)
class Interaction:
    kind: str
    index: int
    tile_id: tuple | None = None

    @property
    def token(self) -> str:
        if self.kind == InteractionKind.SCATTERING:
            return "S{}-{}-{}".format(*self.tile_id)
        return f"{self.kind}{self.index}"


def mechanism_label(interactions) -> str:
    kinds = {i.kind for i in interactions}
    has_r = InteractionKind.REFLECTION in kinds
    has_d = InteractionKind.DIFFRACTION in kinds
    has_s = InteractionKind.SCATTERING in kinds
    if has_s and has_d:
        raise GeometryError("diffraction combined with scattering has no mechanism label")
    if has_s:
        return MechanismLabel.REFLECTION_SCATTERING if has_r else MechanismLabel.SCATTERING
    if has_d:
        return MechanismLabel.REFLECTION_DIFFRACTION if has_r else MechanismLabel.DIFFRACTION
    if has_r:
        return MechanismLabel.REFLECTION
    return MechanismLabel.LOS


@dataclass(frozen=True, eq=False)
class RayPath:
    """Frequency-independent geometry of one ray from the satellite to the receiver."""

    interactions: tuple
    vertices: np.ndarray

    def __post_init__(self):
        if len(self.vertices) != len(self.interactions) + 2:
            raise GeometryError("vertex count must equal interaction count + 2")
        if np.any(self.segment_lengths <= 0):
            raise GeometryError(f"zero-length segment in path {self.path_id}")

    @cached_property
    def segment_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self.vertices, axis=0), axis=1)

    @property
    def total_length(self) -> float:
        return float(self.segment_lengths.sum())

    @cached_property
    def label(self) -> str:
        return mechanism_label(self.interactions)

    @property
    def departure_direction(self) -> np.ndarray:
        d = self.vertices[1] - self.vertices[0]
        return d / np.linalg.norm(d)

    @property
    def arrival_direction(self) -> np.ndarray:
        """Propagation direction of the ray at the receiver."""
        d = self.vertices[-1] - self.vertices[-2]
        return d / np.linalg.norm(d)

    @property
    def look_direction(self) -> np.ndarray:
        return -self.arrival_direction

    @cached_property
    def path_id(self) -> str:
        if not self.interactions:
            return "L"
        return ".".join(i.token for i in self.interactions)

    def count(self, kind: str) -> int:
        return sum(1 for i in self.interactions if i.kind == kind)

    def as_record(self) -> dict:
        return {
            "path_id": self.path_id,
            "label": str(self.label),
            "interactions": [
                {"kind": str(i.kind), "index": i.index, **({"tile_id": list(i.tile_id)} if i.tile_id else {})}
                for i in self.interactions
            ],
            "vertices": self.vertices.tolist(),
            "segment_lengths": self.segment_lengths.tolist(),
        }


@dataclass(frozen=True, eq=False)
class TraceResult:
    tx: np.ndarray
    rx: np.ndarray
    paths: tuple
    los: bool
    timings: dict = field(default_factory=dict)

    def by_label(self) -> dict:
        grouped: dict[str, list] = {}
        for path in self.paths:
            grouped.setdefault(str(path.label), []).append(path)
        return grouped
