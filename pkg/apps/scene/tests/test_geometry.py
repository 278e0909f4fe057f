import math

import numpy as np
from django.test import SimpleTestCase
from shapely.geometry import Point

from apps.scene.constants import FaceKind
from apps.scene.exceptions import SceneArgumentError, SceneValidationError
from apps.scene.services.geometry_service import geometry_service
from apps.scene.tests.factories import box_building, make_scene


class DeriveFacesEdgesTests(SimpleTestCase):

    def test_box_prism(self):
        scene = make_scene([box_building("b", 0, 0, 10, 20, 15)])
        faces, edges = geometry_service.derive_faces_edges(scene)
        kinds = [f.kind for f in faces]
        self.assertEqual(kinds.count(FaceKind.TERRAIN), 1)
        self.assertEqual(kinds.count(FaceKind.WALL), 4)
        self.assertEqual(kinds.count(FaceKind.ROOF), 1)
        vertical = [e for e in edges if abs(e.direction[2]) > 0.5]
        rooftop = [e for e in edges if abs(e.direction[2]) < 0.5]
        self.assertEqual(len(vertical), 4)
        self.assertEqual(len(rooftop), 4)
        for edge in edges:
            self.assertAlmostEqual(edge.interior_angle, 1.5 * math.pi)
            self.assertTrue(edge.is_diffracting)

    def test_terrain_only(self):
        faces, edges = geometry_service.derive_faces_edges(make_scene())
        self.assertEqual(len(faces), 1)
        self.assertEqual(edges, [])
        np.testing.assert_allclose(faces[0].normal, [0, 0, 1])

    def test_wall_normals_point_outward(self):
        scene = make_scene([box_building("b", 0, 0, 10, 10, 5)])
        faces, _ = geometry_service.derive_faces_edges(scene)
        center = np.array([5.0, 5.0, 2.5])
        for face in faces:
            self.assertAlmostEqual(float(np.linalg.norm(face.normal)), 1.0)
            if face.kind == FaceKind.WALL:
                self.assertAlmostEqual(face.normal[2], 0.0)
                wall_center = face.to_world(np.array(face.polygon.centroid.coords[0]))
                self.assertGreater(float((wall_center - center) @ face.normal), 0.0)

    def test_l_shaped_reflex_corner(self):
        scene = make_scene([{
            "id": "L",
            "height_m": 10,
            "footprint": [[0, 0], [20, 0], [20, 10], [10, 10], [10, 20], [0, 20]],
        }])
        _, edges = geometry_service.derive_faces_edges(scene)
        vertical = {tuple(np.round(e.start[:2], 6)): e for e in edges if abs(e.direction[2]) > 0.5}
        self.assertAlmostEqual(vertical[(10.0, 10.0)].interior_angle, 0.5 * math.pi)
        self.assertFalse(vertical[(10.0, 10.0)].is_diffracting)
        self.assertAlmostEqual(vertical[(20.0, 0.0)].interior_angle, 1.5 * math.pi)

    def test_edges_lie_on_both_faces(self):
        scene = make_scene([
            box_building("a", 0, 0, 10, 10, 12),
            {"id": "L", "height_m": 7,
             "footprint": [[30, 0], [50, 0], [50, 10], [40, 10], [40, 20], [30, 20]]},
        ])
        faces, edges = geometry_service.derive_faces_edges(scene)
        for edge in edges:
            for face_index, tangent in zip(edge.faces, edge.face_tangents):
                face = faces[face_index]
                for point in (edge.start, edge.end):
                    self.assertAlmostEqual(float(face.signed_distance(point)), 0.0, places=9)
                    uv = face.to_plane(point)
                    self.assertLess(face.polygon.exterior.distance(_point(uv)), 1e-9)
                self.assertAlmostEqual(float(tangent @ edge.direction), 0.0, places=12)
                self.assertAlmostEqual(float(tangent @ face.normal), 0.0, places=12)
                inside = face.to_plane(edge.midpoint + 0.01 * tangent)
                self.assertTrue(face.polygon.contains(_point(inside)))


class TessellateTilesTests(SimpleTestCase):

    def _wall(self, length, height):
        scene = make_scene([box_building("b", 0, 0, length, 1, height)])
        faces, _ = geometry_service.derive_faces_edges(scene)
        return next(f for f in faces if f.kind == FaceKind.WALL and abs(f.area - length * height) < 1e-9)

    def test_exact_tiling(self):
        tiles = geometry_service.tessellate_tiles([self._wall(10, 10)], tile_side=5)
        self.assertEqual(len(tiles), 4)
        for tile in tiles:
            self.assertAlmostEqual(tile.area, 25.0)

    def test_clipped_tiling(self):
        tiles = geometry_service.tessellate_tiles([self._wall(12, 5)], tile_side=5)
        self.assertEqual(sorted(round(t.area, 9) for t in tiles), [10.0, 25.0, 25.0])

    def test_tile_ids_deterministic(self):
        wall = self._wall(12, 5)
        first = [t.tile_id for t in geometry_service.tessellate_tiles([wall], 5)]
        second = [t.tile_id for t in geometry_service.tessellate_tiles([wall], 5)]
        self.assertEqual(first, second)
        self.assertEqual(first, [(wall.index, 0, 0), (wall.index, 0, 1), (wall.index, 0, 2)])

    def test_area_conservation_on_random_faces(self):
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 100:
            n = int(rng.integers(3, 8))
            angles = np.sort(rng.uniform(0, 2 * math.pi, n))
            radii = rng.uniform(4, 30, n)
            cx, cy = rng.uniform(-40, 40, 2)
            footprint = [[cx + r * math.cos(a), cy + r * math.sin(a)] for a, r in zip(angles, radii)]
            try:
                scene = make_scene([{"id": "p", "height_m": float(rng.uniform(3, 40)), "footprint": footprint}])
            except SceneValidationError:
                continue
            faces, _ = geometry_service.derive_faces_edges(scene)
            side = float(rng.uniform(1.5, 7.0))
            for face in faces:
                tiles = geometry_service.tessellate_tiles([face], side)
                total = sum(t.area for t in tiles)
                self.assertAlmostEqual(total / face.area, 1.0, delta=1e-9)
                for tile in tiles:
                    self.assertAlmostEqual(float(face.signed_distance(tile.center)), 0.0, places=9)
                    self.assertTrue(face.polygon.covers(_point(face.to_plane(tile.center))))
            checked += 1

    def test_invalid_side(self):
        with self.assertRaises(SceneArgumentError):
            geometry_service.tessellate_tiles([], tile_side=0)

    def test_prepare_is_cached(self):
        scene = make_scene([box_building("b", 0, 0, 10, 10, 5)])
        first = geometry_service.prepare(scene, 5.0)
        second = geometry_service.prepare(make_scene([box_building("b", 0, 0, 10, 10, 5)]), 5.0)
        self.assertIs(first, second)
        self.assertEqual(len(first.tiles), sum(len(v) for v in first.tiles_by_face.values()))


def _point(uv):
    return Point(float(uv[0]), float(uv[1]))
