import logging

import numpy as np

from apps.scene.constants import MIN_BUILDING_HEIGHT_M, SCENARIO_PRESETS, Scenario
from apps.scene.entities import Scene
from apps.scene.exceptions import SceneArgumentError
from apps.scene.services.loader_service import scene_loader_service

logger = logging.getLogger(__name__)


class SynthCityService:
    """Manhattan-grid city: one square prism per block, streets of equal width between blocks."""

    def synth_city(
        self,
        block_m: float,
        street_m: float,
        rows: int,
        cols: int,
        height_mean_m: float,
        height_std_m: float,
        seed: int = 0,
        scenario: str = Scenario.CUSTOM,
    ) -> Scene:
        for name, value in (("block_m", block_m), ("street_m", street_m), ("height_mean_m", height_mean_m)):
            if not value > 0:
                raise SceneArgumentError(f"{name} must be > 0, got {value}")
        if height_std_m < 0:
            raise SceneArgumentError(f"height_std_m must be >= 0, got {height_std_m}")
        if int(rows) != rows or int(cols) != cols or rows < 1 or cols < 1:
            raise SceneArgumentError(f"rows and cols must be integers >= 1, got {rows}x{cols}")
        rows, cols = int(rows), int(cols)

        pitch = block_m + street_m
        rng = np.random.default_rng(seed)
        heights = rng.normal(height_mean_m, height_std_m, size=rows * cols)
        heights = np.maximum(heights, MIN_BUILDING_HEIGHT_M)

        buildings = []
        for r in range(rows):
            for c in range(cols):
                x0 = street_m / 2.0 + c * pitch
                y0 = street_m / 2.0 + r * pitch
                x1, y1 = x0 + block_m, y0 + block_m
                buildings.append({
                    "id": f"b{r:03d}-{c:03d}",
                    "height_m": round(float(heights[r * cols + c]), 3),
                    "footprint": [[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
                })

        scene = scene_loader_service.build_scene(
            bounds=(0.0, 0.0, cols * pitch, rows * pitch),
            buildings=buildings,
            scenario=scenario,
        )
        stats = scene.statistics()
        logger.info(
            "synthesized %d buildings over %.4f km2: density %.1f/km2, height %.2f +- %.2f m",
            stats["building_count"], stats["area_km2"], stats["density_per_km2"],
            stats["height_mean_m"], stats["height_std_m"],
        )
        return scene

    def synth_preset(self, scenario: str, seed: int = 0) -> Scene:
        try:
            scenario = Scenario(scenario)
        except ValueError as exc:
            raise SceneArgumentError(f"unknown scenario '{scenario}'") from exc
        if scenario not in SCENARIO_PRESETS:
            raise SceneArgumentError(f"no generator preset for scenario '{scenario}'")
        params = {k: v for k, v in SCENARIO_PRESETS[scenario].items() if k != "target_density_per_km2"}
        return self.synth_city(seed=seed, scenario=scenario, **params)


synth_city_service = SynthCityService()
