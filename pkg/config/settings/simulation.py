import os

from .base import BASE_DIR

SIMULATION_CODE_VERSION = os.getenv("SIMULATION_CODE_VERSION", "1.0.0")

SIMULATION_OUTPUT_DIR = os.getenv(
    "SIMULATION_OUTPUT_DIR",
    str(BASE_DIR / "runs"),
)

SIMULATION_DEFAULT_THREADS = int(os.getenv("SIMULATION_DEFAULT_THREADS", "4"))

SIMULATION_TILE_SIDE_M = float(os.getenv("SIMULATION_TILE_SIDE_M", "5"))

SIMULATION_MAX_INTERACTION_DISTANCE_M = float(
    os.getenv("SIMULATION_MAX_INTERACTION_DISTANCE_M", "150")
)

SIMULATION_SATELLITE_ALTITUDE_M = float(
    os.getenv("SIMULATION_SATELLITE_ALTITUDE_M", "500000")
)

SIMULATION_TASK_FAILURE_RATIO = float(
    os.getenv("SIMULATION_TASK_FAILURE_RATIO", "0.01")
)

SIMULATION_GEOMETRY_CACHE_SIZE = int(
    os.getenv("SIMULATION_GEOMETRY_CACHE_SIZE", "8")
)

STATIC_URL = "static/"

STATIC_ROOT = BASE_DIR / "staticfiles"
