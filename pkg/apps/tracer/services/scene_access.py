from django.conf import settings

from apps.scene.entities import Scene, SceneGeometry
from apps.scene.services.geometry_service import geometry_service


def as_geometry(scene) -> SceneGeometry:
    if isinstance(scene, SceneGeometry):
        return scene
    if isinstance(scene, Scene):
        return geometry_service.prepare(scene, getattr(settings, "SIMULATION_TILE_SIDE_M", 5.0))
    raise TypeError(f"expected Scene or SceneGeometry, got {type(scene).__name__}")
