import json
import logging
from pathlib import Path

from shapely import STRtree
from shapely.geometry import Polygon, box
from shapely.geometry.polygon import orient

from apps.scene.api.serializers.scene_serializer import SceneFileSerializer
from apps.scene.constants import BandGroup, Scenario, SCENE_FORMAT_JSON, TERRAIN_OWNER
from apps.scene.entities import BuildingPrism, Material, Scene
from apps.scene.exceptions import SceneFormatError, SceneValidationError
from apps.scene.services.material_service import material_service

logger = logging.getLogger(__name__)


def flatten_errors(errors, prefix: str = "") -> list[str]:
    messages = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            if isinstance(key, int) or (isinstance(key, str) and key.isdigit()):
                child = f"{prefix}[{key}]"
            else:
                child = f"{prefix}.{key}" if prefix else str(key)
            messages.extend(flatten_errors(value, child))
    elif isinstance(errors, list):
        if errors and all(not isinstance(e, (dict, list)) for e in errors):
            messages.append(f"{prefix or 'scene'}: {' '.join(str(e) for e in errors)}")
        else:
            for index, value in enumerate(errors):
                if value:
                    messages.extend(flatten_errors(value, f"{prefix}[{index}]"))
    else:
        messages.append(f"{prefix or 'scene'}: {errors}")
    return messages


class SceneLoaderService:

    SUPPORTED_FORMATS = (SCENE_FORMAT_JSON,)

    def load_scene(self, path, scene_format: str = SCENE_FORMAT_JSON) -> Scene:
        if scene_format not in self.SUPPORTED_FORMATS:
            raise SceneFormatError(f"unsupported scene format '{scene_format}'")
        path = Path(path)
        if not path.is_file():
            raise SceneFormatError(f"scene file not found: {path}")
        text = path.read_text(encoding="utf-8")
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SceneFormatError(
                f"{path.name}: line {exc.lineno} column {exc.colno}: {exc.msg}"
            ) from exc
        scene = self.parse_scene(payload, source=path.name)
        logger.info(
            "loaded scene %s: %d buildings, scenario=%s",
            path.name, len(scene.buildings), scene.scenario,
        )
        return scene

    def parse_scene(self, payload, source: str = "scene") -> Scene:
        if not isinstance(payload, dict):
            raise SceneFormatError(f"{source}: top-level value must be an object")
        serializer = SceneFileSerializer(data=payload)
        if not serializer.is_valid():
            raise SceneFormatError(f"{source}: " + "; ".join(flatten_errors(serializer.errors)))
        data = serializer.validated_data
        return self.build_scene(
            bounds=data["bounds"],
            buildings=data["buildings"],
            terrain=data.get("terrain"),
            scenario=data["scenario"],
        )

    def build_scene(self, bounds, buildings, terrain=None, scenario: str = Scenario.CUSTOM) -> Scene:
        xmin, ymin, xmax, ymax = (float(v) for v in bounds)
        if not (xmin < xmax and ymin < ymax):
            raise SceneValidationError(f"bounds must satisfy xmin < xmax and ymin < ymax, got {list(bounds)}")
        scenario = str(scenario)
        extent = box(xmin, ymin, xmax, ymax)
        default_wall = material_service.wall_material(BandGroup.LOW)

        prisms = []
        seen = set()
        for raw in buildings:
            building_id = str(raw["id"])
            label = f"building '{building_id}'"
            if building_id == TERRAIN_OWNER:
                raise SceneValidationError(f"{label}: id is reserved for the terrain surface")
            if building_id in seen:
                raise SceneValidationError(f"{label}: duplicate building id")
            seen.add(building_id)

            height = float(raw["height_m"])
            if not height > 0:
                raise SceneValidationError(f"{label}: height must be > 0, got {height}")

            polygon = self._footprint_polygon(raw["footprint"], label)
            if not extent.covers(polygon):
                raise SceneValidationError(f"{label}: footprint lies outside the scene bounds")

            material = raw.get("material")
            if material is not None:
                wall = self._material(material, label)
            else:
                wall = default_wall
            prisms.append(BuildingPrism(
                id=building_id,
                footprint=tuple(tuple(p) for p in list(polygon.exterior.coords)[:-1]),
                height=height,
                wall_material=wall,
                material_explicit=material is not None,
            ))

        self._check_overlaps(prisms)

        if terrain is not None:
            terrain_material = self._material(terrain, "terrain")
        else:
            terrain_material = material_service.terrain_material(BandGroup.LOW, scenario)
        return Scene(
            buildings=tuple(prisms),
            terrain_material=terrain_material,
            bounds=(xmin, ymin, xmax, ymax),
            scenario=scenario,
            terrain_explicit=terrain is not None,
        )

    def _footprint_polygon(self, footprint, label: str) -> Polygon:
        points = [(float(x), float(y)) for x, y in footprint]
        if len(points) >= 2 and points[0] == points[-1]:
            points = points[:-1]
        if len(points) < 3:
            raise SceneValidationError(f"{label}: footprint needs at least 3 vertices, got {len(points)}")
        polygon = Polygon(points)
        if not polygon.is_valid or polygon.area <= 0:
            raise SceneValidationError(f"{label}: footprint is not a simple polygon (self-intersecting or degenerate)")
        return orient(polygon, sign=1.0)

    def _material(self, values: dict, label: str) -> Material:
        try:
            return Material(eps_r=float(values["eps_r"]), sigma=float(values["sigma"]), scattering_s=float(values["S"]))
        except SceneValidationError as exc:
            raise SceneValidationError(f"{label}: {exc.detail}") from exc

    def _check_overlaps(self, prisms: list[BuildingPrism]) -> None:
        if len(prisms) < 2:
            return
        polygons = [p.polygon for p in prisms]
        tree = STRtree(polygons)
        left, right = tree.query(polygons, predicate="intersects")
        for i, j in zip(left, right):
            if i >= j:
                continue
            if polygons[i].intersection(polygons[j]).area > 1e-9:
                raise SceneValidationError(
                    f"building '{prisms[i].id}' overlaps building '{prisms[j].id}'"
                )


scene_loader_service = SceneLoaderService()
