import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import constants as sc
from shapely.geometry import Polygon

from apps.scene.constants import GEOMETRY_EPS, FaceKind, TERRAIN_OWNER
from apps.scene.exceptions import SceneValidationError


@dataclass(frozen=True)
class Material:
    """Dielectric half-space parameters plus the effective-roughness scattering coefficient."""

    eps_r: float
    sigma: float
    scattering_s: float

    def __post_init__(self):
        if not self.eps_r >= 1.0:
            raise SceneValidationError(f"eps_r must be >= 1, got {self.eps_r}")
        if not self.sigma >= 0.0:
            raise SceneValidationError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 <= self.scattering_s <= 1.0:
            raise SceneValidationError(f"S must be in [0, 1], got {self.scattering_s}")

    @property
    def specular_reduction(self) -> float:
        return math.sqrt(1.0 - self.scattering_s ** 2)

    def complex_permittivity(self, frequency_hz: float) -> complex:
        return complex(self.eps_r, -self.sigma / (2.0 * math.pi * frequency_hz * sc.epsilon_0))

    def as_dict(self) -> dict:
        return {"eps_r": self.eps_r, "sigma": self.sigma, "S": self.scattering_s}

    @classmethod
    def from_tuple(cls, values) -> "Material":
        eps_r, sigma, s = values
        return cls(eps_r=float(eps_r), sigma=float(sigma), scattering_s=float(s))


@dataclass(frozen=True)
class BuildingPrism:
    id: str
    footprint: tuple
    height: float
    wall_material: Material
    material_explicit: bool = False

    @cached_property
    def polygon(self) -> Polygon:
        return Polygon(self.footprint)

    @property
    def vertices(self) -> np.ndarray:
        return np.asarray(self.footprint, dtype=float)

    def as_dict(self) -> dict:
        data = {
            "id": self.id,
            "height_m": self.height,
            "footprint": [list(p) for p in self.footprint],
        }
        if self.material_explicit:
            data["material"] = self.wall_material.as_dict()
        return data


@dataclass(frozen=True)
class Scene:
    buildings: tuple
    terrain_material: Material
    bounds: tuple
    scenario: str
    terrain_explicit: bool = False

    @property
    def area_m2(self) -> float:
        xmin, ymin, xmax, ymax = self.bounds
        return (xmax - xmin) * (ymax - ymin)

    @property
    def mean_building_height(self) -> float:
        if not self.buildings:
            return 0.0
        return float(np.mean([b.height for b in self.buildings]))

    def building(self, building_id: str) -> BuildingPrism:
        for b in self.buildings:
            if b.id == building_id:
                return b
        raise KeyError(building_id)

    def statistics(self) -> dict:
        heights = np.array([b.height for b in self.buildings], dtype=float)
        return {
            "building_count": len(self.buildings),
            "area_km2": self.area_m2 / 1e6,
            "density_per_km2": len(self.buildings) / (self.area_m2 / 1e6) if self.area_m2 > 0 else 0.0,
            "height_mean_m": float(heights.mean()) if heights.size else 0.0,
            "height_std_m": float(heights.std()) if heights.size else 0.0,
        }

    def as_dict(self) -> dict:
        data = {
            "scenario": self.scenario,
            "bounds": list(self.bounds),
            "buildings": [b.as_dict() for b in self.buildings],
        }
        if self.terrain_explicit:
            data["terrain"] = self.terrain_material.as_dict()
        return data

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    @cached_property
    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()


@dataclass(frozen=True, eq=False)
class Face:
    """Planar polygon in world space.

    The polygon lives in plane coordinates (u, v) with ``origin + u*u_axis + v*v_axis``;
    ``normal = u_axis x v_axis`` points into the air.
    """

    index: int
    owner: str
    kind: str
    origin: np.ndarray
    u_axis: np.ndarray
    v_axis: np.ndarray
    polygon: Polygon
    material: Material

    @cached_property
    def normal(self) -> np.ndarray:
        n = np.cross(self.u_axis, self.v_axis)
        return n / np.linalg.norm(n)

    @property
    def area(self) -> float:
        return float(self.polygon.area)

    @property
    def is_terrain(self) -> bool:
        return self.owner == TERRAIN_OWNER

    def to_plane(self, points) -> np.ndarray:
        rel = np.asarray(points, dtype=float) - self.origin
        return np.stack([rel @ self.u_axis, rel @ self.v_axis], axis=-1)

    def to_world(self, uv) -> np.ndarray:
        uv = np.asarray(uv, dtype=float)
        return self.origin + uv[..., :1] * self.u_axis + uv[..., 1:2] * self.v_axis

    def signed_distance(self, points) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.origin) @ self.normal

    def mirror(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=float)
        return p - 2.0 * self.signed_distance(p)[..., None] * self.normal

    @cached_property
    def bounding_sphere(self) -> tuple:
        minx, miny, maxx, maxy = self.polygon.bounds
        coords = np.array([[minx, miny], [maxx, miny], [maxx, maxy], [minx, maxy]])
        world = self.to_world(coords)
        center = world.mean(axis=0)
        radius = float(np.max(np.linalg.norm(world - center, axis=1)))
        return center, radius


@dataclass(frozen=True, eq=False)
class Edge:
    """Straight wedge edge.

    ``face_tangents`` are unit vectors perpendicular to the edge, lying in each
    wedge face and pointing from the edge into that face. ``interior_angle`` is
    the angle of the air region between the two faces.
    """

    index: int
    start: np.ndarray
    end: np.ndarray
    faces: tuple
    face_tangents: tuple
    interior_angle: float

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    @cached_property
    def direction(self) -> np.ndarray:
        d = self.end - self.start
        return d / np.linalg.norm(d)

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.start + self.end)

    @property
    def is_diffracting(self) -> bool:
        return self.interior_angle > math.pi + GEOMETRY_EPS

    @property
    def wedge_n(self) -> float:
        return self.interior_angle / math.pi

    def point_at(self, t: float) -> np.ndarray:
        return self.start + t * (self.end - self.start)


@dataclass(frozen=True, eq=False)
class ScatterTile:
    tile_id: tuple
    face_index: int
    center: np.ndarray
    normal: np.ndarray
    area: float
    material: Material

    @property
    def key(self) -> str:
        return "t{}-{}-{}".format(*self.tile_id)


@dataclass(frozen=True, eq=False)
class SceneGeometry:
    """Derived faces, edges and tiles of one scene at one tile side."""

    scene: Scene
    faces: tuple
    edges: tuple
    tiles: tuple
    tile_side: float
    tiles_by_face: dict = field(default_factory=dict)

    @property
    def diffracting_edges(self) -> tuple:
        return tuple(e for e in self.edges if e.is_diffracting)

    def face_kind(self, index: int) -> str:
        return self.faces[index].kind

    def is_wall(self, index: int) -> bool:
        return self.faces[index].kind == FaceKind.WALL
