import logging

import numpy as np
from shapely.geometry import Point, box

from apps.antennas.constants import BAND_RANGE_HZ, USE_CASES, Band, MountHeight, UseCase
from apps.campaigns.constants import AZIMUTH_STREAM, PLACEMENT_STREAM, SCATTER_STREAM
from apps.campaigns.entities import CampaignConfig, Evaluation, TraceTask
from apps.campaigns.exceptions import CampaignConfigError
from apps.campaigns.services.config_service import campaign_config_service
from apps.campaigns.services.placement_service import grid_placement_service
from apps.scene.entities import Scene
from apps.tracer.entities import RxGridSpec, SatellitePose

logger = logging.getLogger(__name__)


def derive_seed(master_seed: int, stream: int, index: int = 0) -> int:
    """Independent 32-bit seed per (stream, index) of one campaign."""
    return int(np.random.SeedSequence([master_seed, stream, index]).generate_state(1)[0])


def azimuths_for_grid(master_seed: int, grid_index: int, count: int) -> tuple[float, ...]:
    """``count`` azimuths spaced 360/count apart from a seeded start."""
    rng = np.random.default_rng(derive_seed(master_seed, AZIMUTH_STREAM, grid_index))
    start = float(rng.uniform(0.0, 360.0))
    step = 360.0 / count
    return tuple((start + k * step) % 360.0 for k in range(count))


class CampaignPlannerService:

    def validate(self, config: CampaignConfig, scene: Scene) -> None:
        for spec in config.use_cases:
            allowed = USE_CASES[UseCase(spec.use_case)]["bands"]
            for band in spec.bands:
                if band not in allowed:
                    raise CampaignConfigError(
                        f"use case '{spec.use_case}' does not operate in band {band}; "
                        f"allowed: {', '.join(str(b) for b in allowed)}"
                    )
                low, high = BAND_RANGE_HZ[Band(band)]
                frequency = config.frequency(band)
                if not low <= frequency <= high:
                    raise CampaignConfigError(
                        f"band {band} frequency {frequency / 1e9:.3f} GHz lies outside "
                        f"{low / 1e9:g}-{high / 1e9:g} GHz"
                    )
        if config.grid_centers is not None:
            extent = box(*scene.bounds)
            for x, y in config.grid_centers:
                if not extent.covers(Point(x, y)):
                    raise CampaignConfigError(f"grid center ({x}, {y}) lies outside the scene bounds {list(scene.bounds)}")

    def height_modes(self, config: CampaignConfig) -> list[str]:
        used = {spec.mount_height for spec in config.use_cases}
        return [mode for mode in MountHeight.values if mode in used]

    def grids_for(self, config: CampaignConfig, scene: Scene, height_mode: str) -> list[RxGridSpec]:
        if config.grid_centers is None:
            return grid_placement_service.place_grids(
                scene,
                config.grid_count,
                height_mode=height_mode,
                seed=derive_seed(config.master_seed, PLACEMENT_STREAM),
                side=config.grid_side_m,
                points_per_side=config.grid_points,
            )
        z = RxGridSpec.mount_z(height_mode, scene.mean_building_height)
        return [
            RxGridSpec(
                center=(float(x), float(y), z),
                side=config.grid_side_m,
                points_per_side=config.grid_points,
                height_mode=height_mode,
            )
            for x, y in config.grid_centers
        ]

    def plan_campaign(self, config: CampaignConfig, scene: Scene | None = None) -> list[TraceTask]:
        """One trace task per (height mode, grid, elevation, azimuth); bands and antennas reuse its trace."""
        if scene is None:
            scene = campaign_config_service.load_scene(config.scene)
        self.validate(config, scene)

        tasks = []
        for mode in self.height_modes(config):
            evaluations = tuple(
                Evaluation(
                    use_case=spec.use_case,
                    band=band,
                    frequency_hz=config.frequency(band),
                    polarization=spec.polarization,
                )
                for spec in config.use_cases if spec.mount_height == mode
                for band in spec.bands
            )
            for grid_index, grid in enumerate(self.grids_for(config, scene, mode)):
                azimuths = azimuths_for_grid(config.master_seed, grid_index, config.azimuth_count)
                for elevation in config.elevations_deg:
                    for azimuth in azimuths:
                        index = len(tasks)
                        tasks.append(TraceTask(
                            index=index,
                            grid_id=f"g{grid_index:02d}",
                            grid=grid,
                            pose=SatellitePose(
                                elevation_deg=elevation,
                                azimuth_deg=azimuth,
                                altitude_m=config.altitude_m,
                            ),
                            evaluations=evaluations,
                            seed=derive_seed(config.master_seed, SCATTER_STREAM, index),
                        ))
        logger.info(
            "planned %d trace tasks (%d field evaluations) over %d height modes",
            len(tasks), sum(len(t.evaluations) for t in tasks), len(self.height_modes(config)),
        )
        return tasks


campaign_planner_service = CampaignPlannerService()
