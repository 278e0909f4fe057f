import logging
import math
import threading

import numpy as np
import shapely
from cachetools import LRUCache, cached
from django.conf import settings
from shapely.geometry import Polygon, box
from shapely.ops import unary_union

from apps.scene.constants import DEFAULT_TILE_SIDE_M, GEOMETRY_EPS, FaceKind, TERRAIN_OWNER
from apps.scene.entities import Edge, Face, ScatterTile, Scene, SceneGeometry
from apps.scene.exceptions import SceneArgumentError

logger = logging.getLogger(__name__)

_UP = np.array([0.0, 0.0, 1.0])
_DOWN = np.array([0.0, 0.0, -1.0])
_X = np.array([1.0, 0.0, 0.0])
_Y = np.array([0.0, 1.0, 0.0])

_geometry_cache = LRUCache(maxsize=getattr(settings, "SIMULATION_GEOMETRY_CACHE_SIZE", 8))
_geometry_lock = threading.Lock()


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


class GeometryService:

    def derive_faces_edges(self, scene: Scene) -> tuple[list[Face], list[Edge]]:
        faces: list[Face] = []
        edges: list[Edge] = []

        terrain_polygon = box(*scene.bounds)
        if scene.buildings:
            terrain_polygon = terrain_polygon.difference(unary_union([b.polygon for b in scene.buildings]))
        faces.append(Face(
            index=0,
            owner=TERRAIN_OWNER,
            kind=FaceKind.TERRAIN,
            origin=np.zeros(3),
            u_axis=_X,
            v_axis=_Y,
            polygon=terrain_polygon,
            material=scene.terrain_material,
        ))

        for building in scene.buildings:
            pts = building.vertices
            n = len(pts)
            h = building.height
            wall_index = {}
            for i in range(n):
                a, b = pts[i], pts[(i + 1) % n]
                seg = b - a
                length = float(np.hypot(*seg))
                if length <= GEOMETRY_EPS:
                    continue
                wall_index[i] = len(faces)
                faces.append(Face(
                    index=len(faces),
                    owner=building.id,
                    kind=FaceKind.WALL,
                    origin=np.array([a[0], a[1], 0.0]),
                    u_axis=np.array([seg[0] / length, seg[1] / length, 0.0]),
                    v_axis=_UP,
                    polygon=box(0.0, 0.0, length, h),
                    material=building.wall_material,
                ))
            roof_index = len(faces)
            faces.append(Face(
                index=roof_index,
                owner=building.id,
                kind=FaceKind.ROOF,
                origin=np.array([0.0, 0.0, h]),
                u_axis=_X,
                v_axis=_Y,
                polygon=Polygon(building.footprint),
                material=building.wall_material,
            ))

            for i in range(n):
                prev_i = (i - 1) % n
                if i not in wall_index or prev_i not in wall_index:
                    continue
                d_prev = pts[i] - pts[prev_i]
                d_next = pts[(i + 1) % n] - pts[i]
                cross = d_prev[0] * d_next[1] - d_prev[1] * d_next[0]
                dot = float(d_prev @ d_next)
                turn = math.atan2(cross, dot)
                if abs(turn) <= GEOMETRY_EPS:
                    continue
                corner = np.array([pts[i][0], pts[i][1], 0.0])
                edges.append(Edge(
                    index=len(edges),
                    start=corner,
                    end=corner + h * _UP,
                    faces=(wall_index[prev_i], wall_index[i]),
                    face_tangents=(
                        _unit(np.array([-d_prev[0], -d_prev[1], 0.0])),
                        _unit(np.array([d_next[0], d_next[1], 0.0])),
                    ),
                    interior_angle=math.pi + turn,
                ))

            for i, face_index in wall_index.items():
                a, b = pts[i], pts[(i + 1) % n]
                along = faces[face_index].u_axis
                edges.append(Edge(
                    index=len(edges),
                    start=np.array([a[0], a[1], h]),
                    end=np.array([b[0], b[1], h]),
                    faces=(face_index, roof_index),
                    face_tangents=(_DOWN, np.cross(_UP, along)),
                    interior_angle=1.5 * math.pi,
                ))

        return faces, edges

    def tessellate_tiles(self, faces: list[Face], tile_side: float = DEFAULT_TILE_SIDE_M) -> list[ScatterTile]:
        if not tile_side > 0:
            raise SceneArgumentError(f"tile_side must be > 0, got {tile_side}")
        tiles: list[ScatterTile] = []
        for face in faces:
            tiles.extend(self._tessellate_face(face, tile_side))
        return tiles

    def _tessellate_face(self, face: Face, side: float) -> list[ScatterTile]:
        polygon = face.polygon
        if polygon.is_empty:
            return []
        minx, miny, maxx, maxy = polygon.bounds
        n_cols = max(1, math.ceil((maxx - minx) / side - GEOMETRY_EPS))
        n_rows = max(1, math.ceil((maxy - miny) / side - GEOMETRY_EPS))
        rows, cols = np.meshgrid(np.arange(n_rows), np.arange(n_cols), indexing="ij")
        rows, cols = rows.ravel(), cols.ravel()
        x0 = minx + cols * side
        y0 = miny + rows * side
        cells = shapely.box(x0, y0, x0 + side, y0 + side)

        shapely.prepare(polygon)
        inside = shapely.contains_properly(polygon, cells)
        touching = shapely.intersects(polygon, cells)

        tiles = []
        for k in np.flatnonzero(touching):
            if inside[k]:
                area = side * side
                center_uv = (x0[k] + side / 2.0, y0[k] + side / 2.0)
            else:
                piece = polygon.intersection(cells[k])
                area = float(piece.area)
                if area <= GEOMETRY_EPS * side * side:
                    continue
                center = piece.centroid
                if not piece.covers(center):
                    center = piece.representative_point()
                center_uv = (center.x, center.y)
            tiles.append(ScatterTile(
                tile_id=(face.index, int(rows[k]), int(cols[k])),
                face_index=face.index,
                center=face.to_world(np.array(center_uv)),
                normal=face.normal,
                area=area,
                material=face.material,
            ))
        return tiles

    def prepare(self, scene: Scene, tile_side: float = DEFAULT_TILE_SIDE_M) -> SceneGeometry:
        return _prepare_cached(scene, float(tile_side))


@cached(cache=_geometry_cache, key=lambda scene, tile_side: (scene.fingerprint, tile_side), lock=_geometry_lock)
def _prepare_cached(scene: Scene, tile_side: float) -> SceneGeometry:
    faces, edges = geometry_service.derive_faces_edges(scene)
    tiles = geometry_service.tessellate_tiles(faces, tile_side)
    by_face: dict[int, list[int]] = {}
    for i, tile in enumerate(tiles):
        by_face.setdefault(tile.face_index, []).append(i)
    logger.info(
        "scene geometry ready: %d faces, %d edges (%d diffracting), %d tiles",
        len(faces), len(edges), sum(1 for e in edges if e.is_diffracting), len(tiles),
    )
    return SceneGeometry(
        scene=scene,
        faces=tuple(faces),
        edges=tuple(edges),
        tiles=tuple(tiles),
        tile_side=tile_side,
        tiles_by_face={k: tuple(v) for k, v in by_face.items()},
    )


geometry_service = GeometryService()
