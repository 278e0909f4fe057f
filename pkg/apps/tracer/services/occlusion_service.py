import threading
from dataclasses import dataclass

import numpy as np
import shapely
from cachetools import LRUCache, cached
from django.conf import settings

from apps.scene.constants import FaceKind
from apps.scene.entities import SceneGeometry
from apps.tracer.constants import SELF_INTERSECTION_EPS_M
from apps.tracer.exceptions import TracerArgumentError
from apps.tracer.services.scene_access import as_geometry

_CHUNK = 256
_index_cache = LRUCache(maxsize=getattr(settings, "SIMULATION_GEOMETRY_CACHE_SIZE", 8))
_index_lock = threading.Lock()


@dataclass(frozen=True, eq=False)
class OcclusionIndex:
    """Flat arrays of every blocking surface (walls and roofs) of a scene."""

    wall_origin: np.ndarray
    wall_u: np.ndarray
    wall_length: np.ndarray
    wall_height: np.ndarray
    wall_face: np.ndarray
    roof_height: np.ndarray
    roof_bbox: np.ndarray
    roof_polygons: np.ndarray
    roof_face: np.ndarray
    max_height: float

    @property
    def is_empty(self) -> bool:
        return self.wall_face.size == 0 and self.roof_face.size == 0


def _build_index(geometry: SceneGeometry) -> OcclusionIndex:
    walls = [f for f in geometry.faces if f.kind == FaceKind.WALL]
    roofs = [f for f in geometry.faces if f.kind == FaceKind.ROOF]
    for roof in roofs:
        shapely.prepare(roof.polygon)
    heights = [r.origin[2] for r in roofs]
    return OcclusionIndex(
        wall_origin=np.array([w.origin[:2] for w in walls]).reshape(-1, 2),
        wall_u=np.array([w.u_axis[:2] for w in walls]).reshape(-1, 2),
        wall_length=np.array([w.polygon.bounds[2] for w in walls]),
        wall_height=np.array([w.polygon.bounds[3] for w in walls]),
        wall_face=np.array([w.index for w in walls], dtype=int),
        roof_height=np.array(heights, dtype=float),
        roof_bbox=np.array([r.polygon.bounds for r in roofs]).reshape(-1, 4),
        roof_polygons=np.array([r.polygon for r in roofs], dtype=object),
        roof_face=np.array([r.index for r in roofs], dtype=int),
        max_height=float(max(heights)) if heights else 0.0,
    )


@cached(cache=_index_cache, key=lambda geometry: (geometry.scene.fingerprint, geometry.tile_side), lock=_index_lock)
def occlusion_index(geometry: SceneGeometry) -> OcclusionIndex:
    return _build_index(geometry)


def _ignore_array(ignore, n: int) -> np.ndarray:
    if ignore is None:
        return np.full((n, 1), -1, dtype=int)
    if isinstance(ignore, np.ndarray) and ignore.ndim == 2:
        return ignore.astype(int)
    rows = [tuple(row) for row in ignore]
    width = max([len(r) for r in rows] + [1])
    out = np.full((n, width), -1, dtype=int)
    for i, row in enumerate(rows):
        out[i, :len(row)] = row
    return out


class OcclusionService:

    def segments_clear(self, index: OcclusionIndex, starts, ends, ignore=None) -> np.ndarray:
        """True where the open segment starts[i] -> ends[i] crosses no wall or roof.

        ``ignore`` gives, per segment, face indices that never block it (the
        faces the segment's end points lie on).
        """
        starts = np.atleast_2d(np.asarray(starts, dtype=float))
        ends = np.atleast_2d(np.asarray(ends, dtype=float))
        n = len(starts)
        clear = np.ones(n, dtype=bool)
        if n == 0 or index.is_empty:
            return clear
        ignore = _ignore_array(ignore, n)
        for lo in range(0, n, _CHUNK):
            hi = min(lo + _CHUNK, n)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                clear[lo:hi] = self._chunk_clear(index, starts[lo:hi], ends[lo:hi], ignore[lo:hi])
        return clear

    def _chunk_clear(self, index, p0, p1, ignore) -> np.ndarray:
        d = p1 - p0
        length = np.linalg.norm(d, axis=1)
        eps = SELF_INTERSECTION_EPS_M / np.maximum(length, 1e-300)
        t_lo = eps.copy()
        t_hi = 1.0 - eps

        # Above the tallest roof nothing can block.
        ceiling = index.max_height + 1e-6
        dz = d[:, 2]
        t_ceiling = np.where(np.abs(dz) > 0, (ceiling - p0[:, 2]) / dz, np.inf)
        rising = dz > 0
        falling = dz < 0
        t_hi = np.where(rising, np.minimum(t_hi, t_ceiling), t_hi)
        t_lo = np.where(falling, np.maximum(t_lo, t_ceiling), t_lo)
        flat_above = (dz == 0) & (p0[:, 2] > ceiling)
        active = (t_lo < t_hi) & ~flat_above
        blocked = np.zeros(len(p0), dtype=bool)
        if not active.any():
            return ~blocked

        if index.wall_face.size:
            blocked |= self._walls_block(index, p0, d, t_lo, t_hi, ignore) & active
        if index.roof_face.size:
            remaining = active & ~blocked
            if remaining.any():
                blocked |= self._roofs_block(index, p0, d, t_lo, t_hi, ignore, remaining)
        return ~blocked

    def _walls_block(self, index, p0, d, t_lo, t_hi, ignore) -> np.ndarray:
        u = index.wall_u
        normal = np.stack([u[:, 1], -u[:, 0]], axis=1)
        denom = d[:, :2] @ normal.T
        num = (index.wall_origin * normal).sum(axis=1)[None, :] - p0[:, :2] @ normal.T
        t = num / denom
        ok = (np.abs(denom) > 1e-15) & (t > t_lo[:, None]) & (t < t_hi[:, None])
        hx = p0[:, 0:1] + t * d[:, 0:1]
        hy = p0[:, 1:2] + t * d[:, 1:2]
        hz = p0[:, 2:3] + t * d[:, 2:3]
        s = (hx - index.wall_origin[:, 0]) * u[:, 0] + (hy - index.wall_origin[:, 1]) * u[:, 1]
        ok &= (s >= 0.0) & (s <= index.wall_length) & (hz >= 0.0) & (hz <= index.wall_height)
        ok &= ~(index.wall_face[None, None, :] == ignore[:, :, None]).any(axis=1)
        return ok.any(axis=1)

    def _roofs_block(self, index, p0, d, t_lo, t_hi, ignore, rows) -> np.ndarray:
        dz = d[:, 2:3]
        t = (index.roof_height[None, :] - p0[:, 2:3]) / dz
        ok = (np.abs(dz) > 1e-15) & (t > t_lo[:, None]) & (t < t_hi[:, None]) & rows[:, None]
        hx = p0[:, 0:1] + t * d[:, 0:1]
        hy = p0[:, 1:2] + t * d[:, 1:2]
        bbox = index.roof_bbox
        ok &= (hx >= bbox[:, 0]) & (hx <= bbox[:, 2]) & (hy >= bbox[:, 1]) & (hy <= bbox[:, 3])
        ok &= ~(index.roof_face[None, None, :] == ignore[:, :, None]).any(axis=1)
        seg, roof = np.nonzero(ok)
        blocked = np.zeros(len(p0), dtype=bool)
        if seg.size:
            inside = shapely.intersects_xy(index.roof_polygons[roof], hx[seg, roof], hy[seg, roof])
            blocked[seg[inside]] = True
        return blocked

    def segment_clear(self, index: OcclusionIndex, a, b, ignore=()) -> bool:
        return bool(self.segments_clear(index, [a], [b], [tuple(ignore)])[0])

    def los_test(self, scene, a, b) -> bool:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if np.allclose(a, b):
            raise TracerArgumentError("line-of-sight end points must differ")
        return self.segment_clear(occlusion_index(as_geometry(scene)), a, b)


occlusion_service = OcclusionService()
