from dataclasses import dataclass, field

from apps.antennas.constants import BAND_CENTER_HZ, USE_CASES, Band, UseCase
from apps.campaigns.constants import (
    DEFAULT_AZIMUTH_COUNT,
    DEFAULT_ELEVATIONS_DEG,
    DEFAULT_GRID_COUNT,
    RESULTS_SCHEMA_VERSION,
    SceneSourceKind,
)
from apps.tracer.constants import DEFAULT_ALTITUDE_M, DEFAULT_GRID_POINTS, DEFAULT_GRID_SIDE_M
from apps.tracer.entities import InteractionBudget, RxGridSpec, SatellitePose


@dataclass(frozen=True)
class SceneSource:
    kind: str
    path: str | None = None
    payload: dict | None = None
    preset: str | None = None
    seed: int = 0

    def as_dict(self) -> dict:
        if self.kind == SceneSourceKind.FILE:
            return {"file": self.path}
        if self.kind == SceneSourceKind.INLINE:
            return {"inline": self.payload}
        if self.kind == SceneSourceKind.SYNTH:
            return {"synth": self.payload}
        return {"preset": self.preset, "seed": self.seed}


@dataclass(frozen=True)
class UseCaseSpec:
    use_case: str
    bands: tuple
    polarization: str | None = None

    @property
    def mount_height(self) -> str:
        return USE_CASES[UseCase(self.use_case)]["mount_height"]

    def as_dict(self) -> dict:
        data = {"use_case": str(self.use_case), "bands": [str(b) for b in self.bands]}
        if self.polarization:
            data["polarization"] = self.polarization
        return data


@dataclass(frozen=True)
class CampaignConfig:
    scene: SceneSource
    use_cases: tuple
    frequencies: dict = field(default_factory=lambda: {str(b): f for b, f in BAND_CENTER_HZ.items()})
    elevations_deg: tuple = DEFAULT_ELEVATIONS_DEG
    azimuth_count: int = DEFAULT_AZIMUTH_COUNT
    grid_count: int = DEFAULT_GRID_COUNT
    grid_centers: tuple | None = None
    grid_side_m: float = DEFAULT_GRID_SIDE_M
    grid_points: int = DEFAULT_GRID_POINTS
    budget: InteractionBudget = field(default_factory=InteractionBudget)
    altitude_m: float = DEFAULT_ALTITUDE_M
    master_seed: int = 0
    output_dir: str | None = None

    def frequency(self, band: str) -> float:
        return float(self.frequencies.get(str(band), BAND_CENTER_HZ[Band(band)]))

    def as_dict(self, with_output: bool = True) -> dict:
        """Canonical JSON form; parsing it back yields an equal config."""
        data = {
            "scene": self.scene.as_dict(),
            "use_cases": [u.as_dict() for u in self.use_cases],
            "bands": {str(b): float(f) for b, f in sorted(self.frequencies.items())},
            "elevations_deg": [float(e) for e in self.elevations_deg],
            "azimuth_count": self.azimuth_count,
            "grids": {
                "count": self.grid_count,
                "side_m": self.grid_side_m,
                "points_per_side": self.grid_points,
            },
            "budget": self.budget.as_dict(),
            "altitude_m": self.altitude_m,
            "master_seed": self.master_seed,
        }
        if self.grid_centers is not None:
            data["grids"]["centers"] = [list(c) for c in self.grid_centers]
        if with_output and self.output_dir:
            data["output_dir"] = self.output_dir
        return data


@dataclass(frozen=True)
class Evaluation:
    """One (use case, band) field evaluation reusing a task's trace."""

    use_case: str
    band: str
    frequency_hz: float
    polarization: str | None = None


@dataclass(frozen=True)
class TraceTask:
    index: int
    grid_id: str
    grid: RxGridSpec
    pose: SatellitePose
    evaluations: tuple
    seed: int

    @property
    def height_mode(self) -> str:
        return self.grid.height_mode

    def as_record(self) -> dict:
        return {
            "index": self.index,
            "grid_id": self.grid_id,
            "height_mode": str(self.height_mode),
            "center": [float(v) for v in self.grid.center],
            "elevation_deg": self.pose.elevation_deg,
            "azimuth_deg": self.pose.azimuth_deg,
            "seed": self.seed,
            "evaluations": [[str(e.use_case), str(e.band)] for e in self.evaluations],
        }


@dataclass(frozen=True, eq=False)
class TaskOutcome:
    index: int
    rows: tuple
    timings: dict
    trace: object = None
    realizations: tuple = ()


@dataclass
class RunManifest:
    config_hash: str
    code_version: str
    master_seed: int
    scene_fingerprint: str
    config: dict
    tasks: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    row_count: int = 0

    @property
    def task_seeds(self) -> dict:
        return {t["index"]: t["seed"] for t in self.tasks}

    def as_dict(self) -> dict:
        return {
            "results_schema_version": RESULTS_SCHEMA_VERSION,
            "config_hash": self.config_hash,
            "code_version": self.code_version,
            "master_seed": self.master_seed,
            "scene_fingerprint": self.scene_fingerprint,
            "config": self.config,
            "task_count": len(self.tasks),
            "row_count": self.row_count,
            "tasks": self.tasks,
            "failures": self.failures,
            "timings": {k: round(v, 6) for k, v in sorted(self.timings.items())},
        }


@dataclass(frozen=True)
class CampaignResult:
    output_dir: str
    files: dict
    manifest: RunManifest
    task_count: int
    row_count: int

    @property
    def failure_count(self) -> int:
        return len(self.manifest.failures)

    def summary(self) -> dict:
        return {
            "output_dir": self.output_dir,
            "files": self.files,
            "config_hash": self.manifest.config_hash,
            "task_count": self.task_count,
            "row_count": self.row_count,
            "failure_count": self.failure_count,
        }
