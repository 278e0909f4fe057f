from django.db import models

from apps.stats.constants import MECHANISM_LABELS

RESULTS_SCHEMA_VERSION = 1

DEFAULT_ELEVATIONS_DEG = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0)
DEFAULT_AZIMUTH_COUNT = 6
DEFAULT_GRID_COUNT = 20

# receiver grid placement
MIN_FOOTPRINT_CLEARANCE_M = 1.0
MIN_GRID_SEPARATION_M = 10.0
PLACEMENT_BATCH = 256
PLACEMENT_MAX_CANDIDATES = 20_000

# independent random streams derived from the master seed
PLACEMENT_STREAM = 1
AZIMUTH_STREAM = 2
SCATTER_STREAM = 3

RESULTS_FILE = "results.csv"
PLOT_DATA_FILE = "plot_data.json"
MANIFEST_FILE = "manifest.json"
PATHS_FILE = "paths.jsonl"
CONTRIBUTIONS_DIR = "contributions"

SHARE_FIELDS = tuple(f"share_{label}" for label in MECHANISM_LABELS)

RESULT_CSV_FIELDS = (
    "scenario",
    "use_case",
    "band",
    "frequency_hz",
    "elevation_deg",
    "azimuth_deg",
    "grid_id",
    "los_flag",
    "k_ml_db",
    "k_moment_db",
    "ds_s",
) + SHARE_FIELDS

CAMPAIGN_SOFT_TIME_LIMIT_S = 6 * 3600
CAMPAIGN_TIME_LIMIT_S = CAMPAIGN_SOFT_TIME_LIMIT_S + 600

# failures kept on a run record
MAX_RECORDED_FAILURES = 200


class RunStatus(models.TextChoices):
    QUEUED = "queued", "Queued"
    RUNNING = "running", "Running"
    FINISHED = "finished", "Finished"
    FAILED = "failed", "Failed"


class SceneSourceKind(models.TextChoices):
    FILE = "file", "Scene file"
    INLINE = "inline", "Inline scene"
    SYNTH = "synth", "Synthetic city"
    PRESET = "preset", "Scenario preset"
