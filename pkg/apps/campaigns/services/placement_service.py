import logging

import numpy as np
import shapely
from shapely.ops import unary_union

from apps.antennas.constants import MountHeight
from apps.campaigns.constants import (
    MIN_FOOTPRINT_CLEARANCE_M,
    MIN_GRID_SEPARATION_M,
    PLACEMENT_BATCH,
    PLACEMENT_MAX_CANDIDATES,
)
from apps.campaigns.exceptions import CampaignConfigError, GridPlacementError
from apps.scene.entities import Scene
from apps.tracer.constants import DEFAULT_GRID_POINTS, DEFAULT_GRID_SIDE_M
from apps.tracer.entities import RxGridSpec

logger = logging.getLogger(__name__)


def _footprints(scene: Scene):
    if not scene.buildings:
        return None
    union = unary_union([b.polygon for b in scene.buildings])
    shapely.prepare(union)
    return union


def _sampling_box(scene: Scene, side: float) -> tuple[float, float, float, float]:
    xmin, ymin, xmax, ymax = scene.bounds
    # keep the whole receiver grid inside the scene when there is room for it
    margin = side / 2.0 if min(xmax - xmin, ymax - ymin) > side else 0.0
    return xmin + margin, ymin + margin, xmax - margin, ymax - margin


class GridPlacementService:

    def place_grids(
        self,
        scene: Scene,
        count: int,
        height_mode: str = MountHeight.GROUND,
        seed: int = 0,
        side: float = DEFAULT_GRID_SIDE_M,
        points_per_side: int = DEFAULT_GRID_POINTS,
    ) -> list[RxGridSpec]:
        """Seeded receiver-grid centers in open space, at least 10 m apart when the scene allows it."""
        if count < 1:
            raise CampaignConfigError(f"grid count must be >= 1, got {count}")
        z = RxGridSpec.mount_z(height_mode, scene.mean_building_height)
        if not scene.buildings and count == 1:
            xmin, ymin, xmax, ymax = scene.bounds
            centers = [((xmin + xmax) / 2.0, (ymin + ymax) / 2.0)]
        else:
            centers = self.sample_centers(scene, count, seed, side)
        return [
            RxGridSpec(center=(x, y, z), side=side, points_per_side=points_per_side, height_mode=height_mode)
            for x, y in centers
        ]

    def sample_centers(self, scene: Scene, count: int, seed: int, side: float = DEFAULT_GRID_SIDE_M) -> list:
        footprints = _footprints(scene)
        x0, y0, x1, y1 = _sampling_box(scene, side)
        rng = np.random.default_rng(seed)

        candidates = []
        accepted = []
        drawn = 0
        while drawn < PLACEMENT_MAX_CANDIDATES:
            xs = rng.uniform(x0, x1, PLACEMENT_BATCH)
            ys = rng.uniform(y0, y1, PLACEMENT_BATCH)
            drawn += PLACEMENT_BATCH
            if footprints is not None:
                keep = shapely.distance(footprints, shapely.points(xs, ys)) >= MIN_FOOTPRINT_CLEARANCE_M
                xs, ys = xs[keep], ys[keep]
            batch = list(zip(xs.tolist(), ys.tolist()))
            candidates.extend(batch)
            accepted = self._select(batch, count, MIN_GRID_SEPARATION_M, accepted)
            if len(accepted) == count:
                return accepted

        if not candidates:
            raise GridPlacementError(
                f"placed 0 of {count} grids: no open space outside the building footprints",
                achieved=0,
                requested=count,
            )
        achieved = len(accepted)
        relaxed = self._select(candidates, count, 0.0, accepted)
        if len(relaxed) < count:
            raise GridPlacementError(
                f"placed {len(relaxed)} of {count} grids in the open space of the scene",
                achieved=len(relaxed),
                requested=count,
            )
        logger.warning(
            "only %d of %d grids fit %.0f m apart; remaining grids placed closer",
            achieved, count, MIN_GRID_SEPARATION_M,
        )
        return relaxed

    def _select(self, candidates, count: int, separation: float, seeded=()) -> list:
        accepted = list(seeded)
        for point in candidates:
            if len(accepted) == count:
                break
            if point in accepted:
                continue
            if separation > 0.0 and accepted:
                gaps = np.hypot(*(np.asarray(accepted) - point).T)
                if gaps.min() < separation:
                    continue
            accepted.append(point)
        return accepted


grid_placement_service = GridPlacementService()
