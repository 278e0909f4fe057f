import json
import logging
import math
import time

import numpy as np

from apps.tracer.constants import EARTH_RADIUS_M, MECHANISM_ORDER
from apps.tracer.entities import InteractionBudget, RayPath, SatellitePose, TraceResult
from apps.tracer.services.diffraction_service import diffraction_service
from apps.tracer.services.occlusion_service import occlusion_index, occlusion_service
from apps.tracer.services.scattering_service import scattering_service
from apps.tracer.services.scene_access import as_geometry
from apps.tracer.services.specular_service import specular_service

logger = logging.getLogger(__name__)


def slant_range(elevation_deg: float, altitude_m: float, earth_radius_m: float = EARTH_RADIUS_M) -> float:
    s = math.sin(math.radians(elevation_deg))
    return -earth_radius_m * s + math.sqrt(
        earth_radius_m ** 2 * s * s + 2.0 * earth_radius_m * altitude_m + altitude_m ** 2
    )


def satellite_position(pose: SatellitePose, scene_origin) -> tuple[np.ndarray, float]:
    d = slant_range(pose.elevation_deg, pose.altitude_m)
    return np.asarray(scene_origin, dtype=float) + d * pose.direction, d


def _path_order(path: RayPath):
    return MECHANISM_ORDER.index(str(path.label)), len(path.interactions), path.path_id


class TraceService:

    def trace(
        self,
        scene,
        tx,
        rx,
        budget: InteractionBudget | None = None,
        radius: float = math.inf,
    ) -> TraceResult:
        """All path geometries from ``tx`` to ``rx`` within ``budget``, in a stable order."""
        budget = budget or InteractionBudget()
        geometry = as_geometry(scene)
        tx = np.asarray(tx, dtype=float)
        rx = np.asarray(rx, dtype=float)
        timings = {}
        paths: list[RayPath] = []

        started = time.perf_counter()
        los = occlusion_service.segment_clear(occlusion_index(geometry), tx, rx)
        if los:
            paths.append(RayPath(interactions=(), vertices=np.array([tx, rx])))
        timings["los"] = time.perf_counter() - started

        started = time.perf_counter()
        paths.extend(specular_service.enumerate_specular(geometry, tx, rx, budget.reflections, radius))
        timings["specular"] = time.perf_counter() - started

        started = time.perf_counter()
        paths.extend(diffraction_service.enumerate_diffraction(geometry, tx, rx, budget, radius))
        timings["diffraction"] = time.perf_counter() - started

        started = time.perf_counter()
        paths.extend(scattering_service.enumerate_scattering(geometry, tx, rx, budget, radius))
        timings["scattering"] = time.perf_counter() - started

        paths.sort(key=_path_order)
        logger.debug(
            "traced %d paths (los=%s) in %.3fs",
            len(paths), los, sum(timings.values()),
        )
        return TraceResult(tx=tx, rx=rx, paths=tuple(paths), los=los, timings=timings)

    def grid_los(self, scene, tx, points) -> np.ndarray:
        """LoS flag of every receiver point toward ``tx``."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        starts = np.broadcast_to(np.asarray(tx, dtype=float), points.shape)
        return occlusion_service.segments_clear(occlusion_index(as_geometry(scene)), starts, points)

    def dump_paths(self, result: TraceResult, stream, context: dict | None = None) -> int:
        """Write one JSON line per path; returns the number of lines written."""
        context = context or {}
        for path in result.paths:
            stream.write(json.dumps({**context, **path.as_record()}, sort_keys=True) + "\n")
        return len(result.paths)


trace_service = TraceService()
