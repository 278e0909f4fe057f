import io
import json
import math

import numpy as np
from django.test import SimpleTestCase

from apps.antennas.constants import MountHeight
from apps.scene.services.geometry_service import geometry_service
from apps.scene.tests.factories import box_building, make_scene
from apps.tracer.constants import InteractionKind, MECHANISM_ORDER
from apps.tracer.entities import (
    Interaction,
    InteractionBudget,
    RayPath,
    RxGridSpec,
    SatellitePose,
    mechanism_label,
)
from apps.tracer.exceptions import GeometryError, TracerArgumentError
from apps.tracer.services.occlusion_service import occlusion_service
from apps.tracer.services.trace_service import satellite_position, slant_range, trace_service

NOTHING = InteractionBudget(
    reflections=0, diffractions=0, reflections_diffractions=0,
    scatterings=0, reflections_scatterings=0,
)


class SatelliteTests(SimpleTestCase):

    def test_slant_range_at_zenith_is_altitude(self):
        self.assertAlmostEqual(slant_range(90.0, 500_000.0), 500_000.0, places=3)

    def test_slant_range_at_ten_degrees(self):
        self.assertAlmostEqual(slant_range(10.0, 500_000.0) / 1000.0, 1694.6, delta=0.5)

    def test_slant_range_decreases_with_elevation(self):
        ranges = [slant_range(e, 500_000.0) for e in range(5, 91, 5)]
        self.assertTrue(all(a > b for a, b in zip(ranges, ranges[1:])))

    def test_position_along_direction(self):
        pose = SatellitePose(elevation_deg=30.0, azimuth_deg=90.0)
        position, distance = satellite_position(pose, (10.0, 20.0, 0.0))
        direction = (position - np.array([10.0, 20.0, 0.0])) / distance
        np.testing.assert_allclose(direction, [math.cos(math.radians(30)), 0.0, 0.5], atol=1e-12)

    def test_invalid_pose(self):
        for elevation in (0.0, -5.0, 91.0):
            with self.assertRaises(TracerArgumentError):
                SatellitePose(elevation_deg=elevation, azimuth_deg=0.0)


class GridTests(SimpleTestCase):

    def test_default_grid(self):
        grid = RxGridSpec(center=(0.0, 0.0, 1.5))
        points = grid.points()
        self.assertEqual(points.shape, (225, 3))
        self.assertAlmostEqual(grid.spacing, 4.0 / 14)
        np.testing.assert_allclose(points[0], [-2.0, -2.0, 1.5])
        np.testing.assert_allclose(points[1], [-2.0 + 4.0 / 14, -2.0, 1.5])
        np.testing.assert_allclose(points.mean(axis=0), [0.0, 0.0, 1.5], atol=1e-12)

    def test_single_point_grid(self):
        grid = RxGridSpec(center=(3.0, 4.0, 1.5), points_per_side=1)
        np.testing.assert_allclose(grid.points(), [[3.0, 4.0, 1.5]])

    def test_mount_height(self):
        self.assertEqual(RxGridSpec.mount_z(MountHeight.GROUND, 20.0), 1.5)
        self.assertEqual(RxGridSpec.mount_z(MountHeight.ROOFTOP, 20.0), 20.0)

    def test_invalid_grid(self):
        with self.assertRaises(TracerArgumentError):
            RxGridSpec(center=(0, 0, 0), points_per_side=0)


class LabelTests(SimpleTestCase):

    def test_labels(self):
        r = Interaction(InteractionKind.REFLECTION, 1)
        d = Interaction(InteractionKind.DIFFRACTION, 2)
        s = Interaction(InteractionKind.SCATTERING, 0, tile_id=(0, 1, 2))
        self.assertEqual(mechanism_label(()), "L")
        self.assertEqual(mechanism_label((r, r)), "R")
        self.assertEqual(mechanism_label((r, d)), "RD")
        self.assertEqual(mechanism_label((d, d)), "D")
        self.assertEqual(mechanism_label((s,)), "S")
        self.assertEqual(mechanism_label((s, r)), "RS")
        with self.assertRaises(GeometryError):
            mechanism_label((d, s))

    def test_path_id_and_record(self):
        path = RayPath(
            interactions=(
                Interaction(InteractionKind.REFLECTION, 4),
                Interaction(InteractionKind.SCATTERING, 7, tile_id=(3, 0, 1)),
            ),
            vertices=np.array([[0, 0, 10], [1, 0, 0], [2, 0, 1], [3, 0, 2]], dtype=float),
        )
        self.assertEqual(path.path_id, "R4.S3-0-1")
        record = path.as_record()
        self.assertEqual(record["label"], "RS")
        self.assertEqual(record["interactions"][1]["tile_id"], [3, 0, 1])
        np.testing.assert_allclose(path.arrival_direction, np.array([1, 0, 1]) / math.sqrt(2))

    def test_degenerate_path_rejected(self):
        with self.assertRaises(GeometryError):
            RayPath(interactions=(), vertices=np.array([[0, 0, 1], [0, 0, 1]], dtype=float))
        with self.assertRaises(GeometryError):
            RayPath(interactions=(Interaction(InteractionKind.REFLECTION, 0),), vertices=np.zeros((2, 3)))

    def test_budget_limits(self):
        with self.assertRaises(TracerArgumentError):
            InteractionBudget(reflections=4)
        with self.assertRaises(TracerArgumentError):
            InteractionBudget(diffractions_scatterings=1)
        budget = InteractionBudget()
        self.assertTrue(budget.allows(3, 0, 0))
        self.assertTrue(budget.allows(1, 1, 0))
        self.assertFalse(budget.allows(2, 1, 0))
        self.assertTrue(budget.allows(1, 0, 1))
        self.assertFalse(budget.allows(0, 1, 1))


class TraceTests(SimpleTestCase):

    def setUp(self):
        scene = make_scene([box_building("b", 0, -20, 10, 20, 10)], bounds=(-60, -40, 40, 40))
        self.geometry = geometry_service.prepare(scene, 5.0)
        self.tx = np.array([-50.0, 3.0, 60.0])

    def test_line_of_sight_only(self):
        result = trace_service.trace(self.geometry, self.tx, (-20.0, 0.0, 1.5), NOTHING)
        self.assertTrue(result.los)
        self.assertEqual([p.path_id for p in result.paths], ["L"])

    def test_shadowed_receiver_has_no_direct_path(self):
        result = trace_service.trace(self.geometry, self.tx, (15.0, -2.0, 1.5))
        self.assertFalse(result.los)
        self.assertNotIn("L", result.by_label())
        self.assertIn("D", result.by_label())

    def test_paths_follow_budget_and_order(self):
        budget = InteractionBudget()
        result = trace_service.trace(self.geometry, self.tx, (-20.0, 0.0, 1.5), budget)
        ranks = [MECHANISM_ORDER.index(str(p.label)) for p in result.paths]
        self.assertEqual(ranks, sorted(ranks))
        for path in result.paths:
            counts = (
                path.count(InteractionKind.REFLECTION),
                path.count(InteractionKind.DIFFRACTION),
                path.count(InteractionKind.SCATTERING),
            )
            self.assertTrue(budget.allows(*counts))

    def test_deterministic(self):
        first = trace_service.trace(self.geometry, self.tx, (15.0, -2.0, 1.5))
        second = trace_service.trace(self.geometry, self.tx, (15.0, -2.0, 1.5))
        self.assertEqual([p.path_id for p in first.paths], [p.path_id for p in second.paths])
        for a, b in zip(first.paths, second.paths):
            np.testing.assert_array_equal(a.vertices, b.vertices)

    def test_dump_paths(self):
        result = trace_service.trace(self.geometry, self.tx, (-20.0, 0.0, 1.5))
        stream = io.StringIO()
        written = trace_service.dump_paths(result, stream, context={"rx_index": 7})
        lines = stream.getvalue().splitlines()
        self.assertEqual(written, len(result.paths))
        self.assertEqual(len(lines), written)
        first = json.loads(lines[0])
        self.assertEqual(first["rx_index"], 7)
        self.assertEqual(first["path_id"], result.paths[0].path_id)

    def test_grid_los_matches_pointwise_test(self):
        points = RxGridSpec(center=(-4.0, 0.0, 1.5), side=30.0, points_per_side=7).points()
        flags = trace_service.grid_los(self.geometry, self.tx, points)
        self.assertEqual(flags.shape, (49,))
        self.assertTrue(flags.any())
        self.assertFalse(flags.all())
        for point, flag in zip(points, flags):
            self.assertEqual(bool(flag), occlusion_service.los_test(self.geometry, self.tx, point))
