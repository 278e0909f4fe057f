from django.test import SimpleTestCase

from apps.antennas.constants import MountHeight
from apps.campaigns.exceptions import CampaignConfigError
from apps.campaigns.services.config_service import campaign_config_service
from apps.campaigns.services.planner_service import azimuths_for_grid, campaign_planner_service, derive_seed

EMPTY_SCENE = {"bounds": [0.0, 0.0, 300.0, 300.0], "buildings": []}


def config_payload(**overrides):
    payload = {
        "scene": {"inline": EMPTY_SCENE},
        "use_cases": [{"use_case": "handheld"}],
        "master_seed": 11,
    }
    payload.update(overrides)
    return payload


def plan(**overrides):
    config = campaign_config_service.parse_config(config_payload(**overrides))
    return config, campaign_planner_service.plan_campaign(config)


class CampaignPlanTests(SimpleTestCase):

    def test_full_sweep_task_count(self):
        config, tasks = plan()
        self.assertEqual(config.elevations_deg, (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0))
        self.assertEqual(len(tasks), 20 * 9 * 6)
        self.assertEqual([t.index for t in tasks], list(range(1080)))
        self.assertEqual({t.grid_id for t in tasks}, {f"g{i:02d}" for i in range(20)})
        self.assertEqual([(e.band, e.frequency_hz) for e in tasks[0].evaluations], [("S", 2.1e9), ("C", 3.5e9)])

    def test_single_trace_serves_every_band(self):
        _, tasks = plan(
            elevations_deg=[30.0],
            azimuth_count=1,
            grids={"count": 1},
            use_cases=[{"use_case": "handheld", "bands": ["S", "C"]}],
        )
        self.assertEqual(len(tasks), 1)
        self.assertEqual(len(tasks[0].evaluations), 2)

    def test_azimuths_evenly_spaced_per_grid(self):
        _, tasks = plan(elevations_deg=[45.0], grids={"count": 3})
        by_grid = {}
        for task in tasks:
            by_grid.setdefault(task.grid_id, []).append(task.pose.azimuth_deg)
        starts = set()
        for azimuths in by_grid.values():
            self.assertEqual(len(azimuths), 6)
            for a, b in zip(azimuths, azimuths[1:]):
                self.assertAlmostEqual((b - a) % 360.0, 60.0, places=9)
            starts.add(round(azimuths[0], 9))
        self.assertEqual(len(starts), 3)

    def test_azimuth_start_is_seeded(self):
        self.assertEqual(azimuths_for_grid(5, 0, 4), azimuths_for_grid(5, 0, 4))
        self.assertNotEqual(azimuths_for_grid(5, 0, 4), azimuths_for_grid(6, 0, 4))
        self.assertNotEqual(derive_seed(5, 3, 0), derive_seed(5, 3, 1))

    def test_plan_is_deterministic(self):
        _, first = plan(grids={"count": 4}, elevations_deg=[20.0, 60.0])
        _, again = plan(grids={"count": 4}, elevations_deg=[20.0, 60.0])
        self.assertEqual([t.as_record() for t in first], [t.as_record() for t in again])

    def test_height_modes_split_traces(self):
        scene = {
            "bounds": [0.0, 0.0, 200.0, 200.0],
            "buildings": [{"id": "a", "height_m": 24.0, "footprint": [[10, 10], [40, 10], [40, 40], [10, 40]]}],
        }
        _, tasks = plan(
            scene={"inline": scene},
            use_cases=[{"use_case": "handheld", "bands": ["C"]}, {"use_case": "fixed", "bands": ["Ka", "Q"]}],
            elevations_deg=[50.0],
            azimuth_count=2,
            grids={"count": 2},
        )
        self.assertEqual(len(tasks), 2 * 2 * 2)
        ground = [t for t in tasks if t.height_mode == MountHeight.GROUND]
        rooftop = [t for t in tasks if t.height_mode == MountHeight.ROOFTOP]
        self.assertEqual({t.grid.center[2] for t in ground}, {1.5})
        self.assertEqual({t.grid.center[2] for t in rooftop}, {24.0})
        self.assertEqual([e.band for e in rooftop[0].evaluations], ["Ka", "Q"])
        self.assertEqual([t.pose.azimuth_deg for t in ground], [t.pose.azimuth_deg for t in rooftop])

    def test_explicit_grid_centers(self):
        _, tasks = plan(grids={"centers": [[10.0, 20.0], [150.0, 150.0]]}, elevations_deg=[80.0], azimuth_count=1)
        self.assertEqual([t.grid.center for t in tasks], [(10.0, 20.0, 1.5), (150.0, 150.0, 1.5)])


class CampaignValidationTests(SimpleTestCase):

    def test_vehicular_rejects_ka(self):
        with self.assertRaisesMessage(CampaignConfigError, "does not operate in band Ka"):
            plan(use_cases=[{"use_case": "vehicular", "bands": ["Ka"]}])

    def test_fixed_rejects_s(self):
        with self.assertRaises(CampaignConfigError):
            plan(use_cases=[{"use_case": "fixed", "bands": ["S"]}])

    def test_grid_outside_bounds(self):
        with self.assertRaisesMessage(CampaignConfigError, "outside the scene bounds"):
            plan(grids={"centers": [[350.0, 10.0]]})

    def test_frequency_outside_band(self):
        with self.assertRaises(CampaignConfigError):
            plan(bands={"C": 5.0e9})

    def test_frequency_override_inside_band(self):
        _, tasks = plan(bands={"C": 3.6e9}, elevations_deg=[40.0], azimuth_count=1, grids={"count": 1})
        self.assertEqual(tasks[0].evaluations[1].frequency_hz, 3.6e9)

    def test_schema_errors(self):
        with self.assertRaisesMessage(CampaignConfigError, "use_cases"):
            campaign_config_service.parse_config({"scene": {"inline": EMPTY_SCENE}})
        with self.assertRaises(CampaignConfigError):
            campaign_config_service.parse_config(config_payload(elevations_deg=[0.0]))
        with self.assertRaises(CampaignConfigError):
            campaign_config_service.parse_config(config_payload(scene={"preset": "urban", "inline": EMPTY_SCENE}))
        with self.assertRaises(CampaignConfigError):
            campaign_config_service.parse_config(config_payload(bands={"X": 1e9}))

    def test_bad_inline_scene(self):
        config = campaign_config_service.parse_config(config_payload(scene={"inline": {"bounds": [0, 0, -1, 1]}}))
        with self.assertRaisesMessage(CampaignConfigError, "scene:"):
            campaign_planner_service.plan_campaign(config)

    def test_config_round_trips_through_its_canonical_form(self):
        config = campaign_config_service.parse_config(config_payload(grids={"count": 3, "side_m": 2.0}))
        again = campaign_config_service.parse_config(config.as_dict())
        self.assertEqual(again, config)
