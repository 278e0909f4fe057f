import numpy as np
from django.test import SimpleTestCase

from apps.scene.constants import FaceKind
from apps.scene.tests.factories import box_building, make_scene
from apps.tracer.exceptions import TracerArgumentError
from apps.tracer.services.occlusion_service import occlusion_index, occlusion_service
from apps.tracer.services.scene_access import as_geometry


class LosTests(SimpleTestCase):

    def setUp(self):
        self.scene = make_scene([box_building("b", 0, 0, 10, 10, 10)])

    def test_through_building_is_blocked(self):
        self.assertFalse(occlusion_service.los_test(self.scene, (-5, 5, 1.5), (15, 5, 1.5)))

    def test_over_roof_is_clear(self):
        self.assertTrue(occlusion_service.los_test(self.scene, (-5, 5, 11), (15, 5, 11)))

    def test_rising_into_wall_is_blocked(self):
        self.assertFalse(occlusion_service.los_test(self.scene, (-5, 5, 5), (15, 5, 15)))

    def test_descending_through_roof_is_blocked(self):
        self.assertFalse(occlusion_service.los_test(self.scene, (5, 5, 20), (5, 5, 5)))

    def test_beside_building_is_clear(self):
        self.assertTrue(occlusion_service.los_test(self.scene, (-5, -1, 1.5), (15, -1, 1.5)))

    def test_terrain_never_blocks(self):
        scene = make_scene()
        self.assertTrue(occlusion_service.los_test(scene, (-50, 0, 1.5), (50, 0, 1.5)))

    def test_equal_end_points_rejected(self):
        with self.assertRaises(TracerArgumentError):
            occlusion_service.los_test(self.scene, (1, 1, 1), (1, 1, 1))

    def test_segment_touching_own_face_is_clear(self):
        geometry = as_geometry(self.scene)
        index = occlusion_index(geometry)
        # ends on the west wall at x=0
        west = [f for f in geometry.faces if f.kind == FaceKind.WALL and np.allclose(f.normal, [-1, 0, 0])][0]
        self.assertTrue(occlusion_service.segment_clear(index, (-5, 5, 2), (0, 5, 2), ignore=(west.index,)))
        self.assertTrue(occlusion_service.segment_clear(index, (-5, 5, 2), (0, 5, 2)))

    def test_batched_matches_single(self):
        geometry = as_geometry(self.scene)
        index = occlusion_index(geometry)
        rng = np.random.default_rng(3)
        starts = rng.uniform([-20, -20, 0], [30, 30, 15], size=(600, 3))
        ends = rng.uniform([-20, -20, 0], [30, 30, 15], size=(600, 3))
        batched = occlusion_service.segments_clear(index, starts, ends)
        single = [occlusion_service.segment_clear(index, a, b) for a, b in zip(starts, ends)]
        self.assertEqual(batched.tolist(), single)
