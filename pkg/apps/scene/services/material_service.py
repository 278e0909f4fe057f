from apps.scene.constants import (
    BandGroup,
    Scenario,
    TERRAIN_MATERIALS,
    TERRAIN_OWNER,
    WALL_MATERIALS,
)
from apps.scene.entities import Material, Scene


class MaterialService:
    """Per-band material lookup with fallback to the scenario defaults."""

    def wall_material(self, band_group: str) -> Material:
        return Material.from_tuple(WALL_MATERIALS[BandGroup(band_group)])

    def terrain_material(self, band_group: str, scenario: str) -> Material:
        scenario = Scenario(scenario)
        if scenario == Scenario.CUSTOM:
            scenario = Scenario.URBAN
        return Material.from_tuple(TERRAIN_MATERIALS[(BandGroup(band_group), scenario)])

    def resolve(self, scene: Scene, band_group: str, overrides: dict | None = None) -> dict[str, Material]:
        """Map each surface owner (building id or terrain) to its material at ``band_group``.

        Materials given explicitly in the scene file are used for every band;
        ``overrides`` (owner -> Material) take precedence over both.
        """
        overrides = overrides or {}
        wall_default = self.wall_material(band_group)
        materials = {}
        for building in scene.buildings:
            if building.id in overrides:
                materials[building.id] = overrides[building.id]
            elif building.material_explicit:
                materials[building.id] = building.wall_material
            else:
                materials[building.id] = wall_default
        if TERRAIN_OWNER in overrides:
            materials[TERRAIN_OWNER] = overrides[TERRAIN_OWNER]
        elif scene.terrain_explicit:
            materials[TERRAIN_OWNER] = scene.terrain_material
        else:
            materials[TERRAIN_OWNER] = self.terrain_material(band_group, scene.scenario)
        return materials


material_service = MaterialService()
