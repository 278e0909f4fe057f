import math
import threading
from dataclasses import dataclass

import numpy as np
from cachetools import LRUCache, cached
from django.conf import settings

from apps.scene.entities import Edge, SceneGeometry

_frame_cache = LRUCache(maxsize=getattr(settings, "SIMULATION_GEOMETRY_CACHE_SIZE", 8))
_frame_lock = threading.Lock()

# offset of visibility test points into the air region
PROBE_OFFSET_M = 1e-3


@dataclass(frozen=True, eq=False)
class WedgeFrames:
    """Per-edge local frames, arrays aligned with ``edge_index``.

    ``axis`` is the edge direction oriented so that rotating ``t_o`` about it
    by ``alpha`` (the air-side angle) lands on the n-face tangent.
    """

    edge_index: np.ndarray
    start: np.ndarray
    end: np.ndarray
    axis: np.ndarray
    t_o: np.ndarray
    n_o: np.ndarray
    alpha: np.ndarray
    bisector: np.ndarray

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (self.start + self.end)

    @property
    def half_length(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.end - self.start, axis=1)


def _rotate(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    return v * math.cos(angle) + np.cross(axis, v) * math.sin(angle)


def edge_frame(edge: Edge) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(axis, t_o, n_o) with ``n_o`` the o-face normal pointing into the air."""
    t_o, t_n = edge.face_tangents
    axis = edge.direction
    if np.linalg.norm(_rotate(t_o, axis, edge.interior_angle) - t_n) > 1e-6:
        axis = -axis
    # Rotating t_o by a small positive angle about the axis enters the air.
    n_o = np.cross(axis, t_o)
    return axis, t_o, n_o


def build_frames(edges) -> WedgeFrames:
    rows = []
    for edge in edges:
        axis, t_o, n_o = edge_frame(edge)
        bisector = _rotate(t_o, axis, edge.interior_angle / 2.0)
        rows.append((edge.index, edge.start, edge.end, axis, t_o, n_o, edge.interior_angle, bisector))
    if not rows:
        empty = np.zeros((0, 3))
        return WedgeFrames(np.zeros(0, dtype=int), empty, empty, empty, empty, empty, np.zeros(0), empty)
    cols = list(zip(*rows))
    return WedgeFrames(
        edge_index=np.array(cols[0], dtype=int),
        start=np.array(cols[1]),
        end=np.array(cols[2]),
        axis=np.array(cols[3]),
        t_o=np.array(cols[4]),
        n_o=np.array(cols[5]),
        alpha=np.array(cols[6]),
        bisector=np.array(cols[7]),
    )


@cached(cache=_frame_cache, key=lambda geometry: (geometry.scene.fingerprint, geometry.tile_side), lock=_frame_lock)
def diffracting_frames(geometry: SceneGeometry) -> WedgeFrames:
    return build_frames(geometry.diffracting_edges)


def wedge_angle(axis, t_o, n_o, direction) -> np.ndarray:
    """Angle in [0, 2pi) of ``direction`` around the edge, measured from the o-face through the air."""
    d = np.asarray(direction, dtype=float)
    along = (d * axis).sum(axis=-1, keepdims=True)
    transverse = d - along * axis
    x = (transverse * t_o).sum(axis=-1)
    y = (transverse * n_o).sum(axis=-1)
    return np.mod(np.arctan2(y, x), 2.0 * np.pi)


def in_air(axis, t_o, n_o, alpha, direction, tol: float = 1e-9) -> np.ndarray:
    phi = wedge_angle(axis, t_o, n_o, direction)
    # grazing along the o-face wraps to just below 2pi
    return (phi <= alpha + tol) | (phi >= 2.0 * np.pi - tol)


def air_points(frames: WedgeFrames) -> np.ndarray:
    """(E, 3, 3): near-start, middle and near-end points nudged off each edge into the air."""
    fractions = np.array([0.05, 0.5, 0.95])
    along = frames.start[:, None, :] + fractions[None, :, None] * (frames.end - frames.start)[:, None, :]
    return along + PROBE_OFFSET_M * frames.bisector[:, None, :]
