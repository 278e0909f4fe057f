import csv
import json
import logging
import math
from pathlib import Path

from apps.antennas.constants import USE_CASES, UseCase
from apps.campaigns.constants import (
    CONTRIBUTIONS_DIR,
    MANIFEST_FILE,
    PATHS_FILE,
    PLOT_DATA_FILE,
    RESULT_CSV_FIELDS,
    RESULTS_FILE,
    RESULTS_SCHEMA_VERSION,
)
from apps.campaigns.entities import RunManifest
from apps.campaigns.exceptions import CampaignFailed
from apps.field.services.field_service import field_service
from apps.stats.constants import Aggregate, MECHANISM_LABELS
from apps.stats.entities import MechanismBreakdown
from apps.stats.services.channel_stats_service import aggregate, los_probability, mean_breakdown
from apps.tracer.services.trace_service import trace_service

logger = logging.getLogger(__name__)


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _finite(value):
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return None
    return value


def _dump(document) -> str:
    return json.dumps(document, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _series(rows, key: str, elevations) -> dict:
    return {
        how: [_finite(aggregate((r[key] for r in rows if r["elevation_deg"] == e), how)) for e in elevations]
        for how in Aggregate.values
    }


def build_plot_data(rows) -> dict:
    """Plot-ready aggregates over grids and azimuths, median and mean."""
    elevations = sorted({r["elevation_deg"] for r in rows})

    # one (lit, points) count per trace, shared by every band evaluated on it
    counts = {}
    for r in rows:
        mode = str(USE_CASES[UseCase(r["use_case"])]["mount_height"])
        counts.setdefault(mode, {})[(r["elevation_deg"], r["grid_id"], r["azimuth_deg"])] = (
            r["los_lit"], r["los_points"],
        )
    los = {}
    for mode, traces in sorted(counts.items()):
        probability = []
        for e in elevations:
            flags = []
            for key, (lit, points) in traces.items():
                if key[0] == e:
                    flags.extend([True] * lit + [False] * (points - lit))
            probability.append(los_probability(flags) if flags else None)
        los[mode] = {"elevations_deg": elevations, "probability": probability}

    kfactor, spread = {}, {}
    for use_case, band in sorted({(r["use_case"], r["band"]) for r in rows}):
        subset = [r for r in rows if r["use_case"] == use_case and r["band"] == band]
        key = f"{use_case}/{band}"
        kfactor[key] = {
            "elevations_deg": elevations,
            "ml_db": _series(subset, "k_ml_db", elevations),
            "moment_db": _series(subset, "k_moment_db", elevations),
        }
        spread[key] = {"elevations_deg": elevations, "ds_s": _series(subset, "ds_s", elevations)}

    mechanisms = {}
    for band in sorted({r["band"] for r in rows}):
        stacks = {label: [] for label in MECHANISM_LABELS}
        for e in elevations:
            breakdowns = [
                MechanismBreakdown(shares={label: r[f"share_{label}"] for label in MECHANISM_LABELS})
                for r in rows
                if r["band"] == band and r["elevation_deg"] == e and r[f"share_{MECHANISM_LABELS[0]}"] is not None
            ]
            percentages = mean_breakdown(breakdowns).as_percentages() if breakdowns else {}
            for label in MECHANISM_LABELS:
                stacks[label].append(percentages.get(label))
        mechanisms[band] = {"elevations_deg": elevations, "share_percent": stacks}

    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "los_probability": los,
        "k_factor": kfactor,
        "delay_spread": spread,
        "mechanisms": mechanisms,
    }


class CampaignOutputService:

    def write_results(self, rows, out_dir: Path) -> Path:
        path = out_dir / RESULTS_FILE
        with self._open(path) as stream:
            writer = csv.DictWriter(stream, fieldnames=RESULT_CSV_FIELDS, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: format_cell(row[k]) for k in RESULT_CSV_FIELDS})
        return path

    def write_plot_data(self, rows, out_dir: Path) -> Path:
        path = out_dir / PLOT_DATA_FILE
        with self._open(path) as stream:
            stream.write(_dump(build_plot_data(rows)))
        return path

    def write_manifest(self, manifest: RunManifest, out_dir: Path) -> Path:
        path = out_dir / MANIFEST_FILE
        with self._open(path) as stream:
            stream.write(_dump(manifest.as_dict()))
        return path

    def write_dumps(self, tasks, outcomes, out_dir: Path) -> dict:
        """Path geometries of every trace and one contribution table per realization."""
        paths_file = out_dir / PATHS_FILE
        contributions_dir = out_dir / CONTRIBUTIONS_DIR
        with self._open(paths_file) as stream:
            for outcome in outcomes:
                task = tasks[outcome.index]
                context = {"task": task.index, "grid_id": task.grid_id,
                           "elevation_deg": task.pose.elevation_deg, "azimuth_deg": task.pose.azimuth_deg}
                trace_service.dump_paths(outcome.trace, stream, context)
        for outcome in outcomes:
            for evaluation, realization in outcome.realizations:
                name = f"task{outcome.index:05d}-{evaluation.use_case}-{evaluation.band}.csv"
                with self._open(contributions_dir / name) as stream:
                    field_service.dump_contributions(realization.contributions, stream)
        return {"paths": str(paths_file), "contributions": str(contributions_dir)}

    def _open(self, path: Path):
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            return path.open("w", encoding="utf-8", newline="")
        except OSError as exc:
            raise CampaignFailed(f"cannot write {path}: {exc}") from exc


campaign_output_service = CampaignOutputService()
