import json
import math
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from apps.scene.constants import BandGroup, TERRAIN_OWNER
from apps.scene.entities import Material
from apps.scene.exceptions import SceneFormatError, SceneValidationError
from apps.scene.services.geometry_service import geometry_service
from apps.scene.services.loader_service import scene_loader_service
from apps.scene.services.material_service import material_service


class SceneLoaderTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def _write(self, payload) -> Path:
        path = Path(self.tmp.name) / "scene.json"
        text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
        path.write_text(text, encoding="utf-8")
        return path

    def test_single_prism_scene(self):
        path = self._write({
            "scenario": "urban",
            "bounds": [-50, -50, 50, 50],
            "terrain": {"eps_r": 5, "sigma": 0.01, "S": 0.4},
            "buildings": [{
                "id": "b1",
                "height_m": 15,
                "footprint": [[0, 0], [10, 0], [10, 10], [0, 10]],
                "material": {"eps_r": 5, "sigma": 0.01, "S": 0.4},
            }],
        })
        scene = scene_loader_service.load_scene(path)
        self.assertEqual(len(scene.buildings), 1)
        self.assertEqual(scene.buildings[0].wall_material, Material(5.0, 0.01, 0.4))
        faces, _ = geometry_service.derive_faces_edges(scene)
        walls = [f for f in faces if f.kind == "wall"]
        roofs = [f for f in faces if f.kind == "roof"]
        self.assertEqual(len(walls), 4)
        self.assertEqual(len(roofs), 1)

    def test_terrain_only_scene_is_valid(self):
        path = self._write({"bounds": [0, 0, 100, 100], "buildings": []})
        scene = scene_loader_service.load_scene(path)
        self.assertEqual(scene.buildings, ())
        self.assertEqual(scene.scenario, "custom")

    def test_two_vertex_footprint_rejected(self):
        path = self._write({
            "bounds": [0, 0, 100, 100],
            "buildings": [{"id": "thin", "height_m": 5, "footprint": [[1, 1], [5, 5]]}],
        })
        with self.assertRaises(SceneValidationError) as ctx:
            scene_loader_service.load_scene(path)
        self.assertIn("thin", str(ctx.exception.detail))

    def test_self_intersecting_footprint_names_building(self):
        path = self._write({
            "bounds": [0, 0, 100, 100],
            "buildings": [{"id": "bowtie", "height_m": 5,
                           "footprint": [[0, 0], [10, 10], [10, 0], [0, 10]]}],
        })
        with self.assertRaises(SceneValidationError) as ctx:
            scene_loader_service.load_scene(path)
        self.assertIn("bowtie", str(ctx.exception.detail))

    def test_non_positive_height_rejected(self):
        path = self._write({
            "bounds": [0, 0, 100, 100],
            "buildings": [{"id": "flat", "height_m": 0, "footprint": [[0, 0], [5, 0], [5, 5]]}],
        })
        with self.assertRaises(SceneValidationError) as ctx:
            scene_loader_service.load_scene(path)
        self.assertIn("flat", str(ctx.exception.detail))

    def test_duplicate_ids_and_out_of_bounds_rejected(self):
        footprint = [[0, 0], [5, 0], [5, 5], [0, 5]]
        shifted = [[20, 20], [25, 20], [25, 25], [20, 25]]
        with self.assertRaises(SceneValidationError):
            scene_loader_service.load_scene(self._write({
                "bounds": [0, 0, 100, 100],
                "buildings": [
                    {"id": "a", "height_m": 5, "footprint": footprint},
                    {"id": "a", "height_m": 5, "footprint": shifted},
                ],
            }))
        with self.assertRaises(SceneValidationError):
            scene_loader_service.load_scene(self._write({
                "bounds": [0, 0, 3, 3],
                "buildings": [{"id": "a", "height_m": 5, "footprint": footprint}],
            }))

    def test_parse_error_reports_line(self):
        path = self._write('{\n  "bounds": [0, 0, 1, 1],\n  "buildings": [,]\n}')
        with self.assertRaises(SceneFormatError) as ctx:
            scene_loader_service.load_scene(path)
        self.assertIn("line 3", str(ctx.exception.detail))

    def test_schema_error_reports_record(self):
        path = self._write({
            "bounds": [0, 0, 100, 100],
            "buildings": [{"id": "x", "footprint": [[0, 0], [5, 0], [5, 5]]}],
        })
        with self.assertRaises(SceneFormatError) as ctx:
            scene_loader_service.load_scene(path)
        self.assertIn("buildings[0].height_m", str(ctx.exception.detail))

    def test_unknown_format_rejected(self):
        path = self._write({"bounds": [0, 0, 1, 1]})
        with self.assertRaises(SceneFormatError):
            scene_loader_service.load_scene(path, scene_format="shp")

    def test_clockwise_footprint_is_reoriented(self):
        scene = scene_loader_service.build_scene(
            bounds=(0, 0, 100, 100),
            buildings=[{"id": "cw", "height_m": 5, "footprint": [[0, 0], [0, 5], [5, 5], [5, 0]]}],
        )
        self.assertTrue(scene.buildings[0].polygon.exterior.is_ccw)


class MaterialTests(SimpleTestCase):

    def test_power_balance(self):
        for s in (0.0, 0.25, 0.4, 0.6, 0.75, 1.0):
            material = Material(5.0, 0.01, s)
            self.assertAlmostEqual(s ** 2 + material.specular_reduction ** 2, 1.0, places=15)

    def test_invalid_parameters(self):
        with self.assertRaises(SceneValidationError):
            Material(0.5, 0.0, 0.0)
        with self.assertRaises(SceneValidationError):
            Material(5.0, -1.0, 0.0)
        with self.assertRaises(SceneValidationError):
            Material(5.0, 0.0, 1.5)

    def test_complex_permittivity(self):
        material = Material(5.0, 0.01, 0.4)
        eps = material.complex_permittivity(2.1e9)
        self.assertEqual(eps.real, 5.0)
        self.assertAlmostEqual(eps.imag, -0.01 / (2 * math.pi * 2.1e9 * 8.8541878128e-12), places=6)

    def test_band_defaults_and_explicit_materials(self):
        scene = scene_loader_service.build_scene(
            bounds=(0, 0, 100, 100),
            buildings=[
                {"id": "plain", "height_m": 5, "footprint": [[0, 0], [5, 0], [5, 5], [0, 5]]},
                {"id": "glass", "height_m": 5, "footprint": [[10, 0], [15, 0], [15, 5], [10, 5]],
                 "material": {"eps_r": 6.0, "sigma": 0.0, "S": 0.1}},
            ],
            scenario="dense-urban",
        )
        low = material_service.resolve(scene, BandGroup.LOW)
        high = material_service.resolve(scene, BandGroup.HIGH)
        self.assertEqual(low["plain"], Material(5.0, 0.01, 0.4))
        self.assertEqual(high["plain"], Material(5.5, 0.4, 0.6))
        self.assertEqual(high["glass"], Material(6.0, 0.0, 0.1))
        self.assertEqual(low[TERRAIN_OWNER].scattering_s, 0.5)
        self.assertEqual(high[TERRAIN_OWNER].scattering_s, 0.75)
