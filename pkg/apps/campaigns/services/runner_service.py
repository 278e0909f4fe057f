"""Per-task work of a campaign: one trace, then every (use case, band) evaluation on it."""
import dataclasses
import logging
import time

from django.conf import settings

from apps.antennas.constants import SATELLITE_POLARIZATION, SATELLITE_POWER_W
from apps.antennas.entities import Polarization, TxFieldSpec
from apps.antennas.services.pattern_service import antenna_for_use_case
from apps.campaigns.entities import CampaignConfig, TaskOutcome, TraceTask
from apps.field.entities import ScatterPhaseSource
from apps.field.services.field_service import field_service, materials_for_band
from apps.scene.entities import Scene
from apps.stats.constants import MECHANISM_LABELS
from apps.stats.entities import EnvelopeSamples, PowerDelayProfile
from apps.stats.exceptions import StatsException
from apps.stats.services.channel_stats_service import delay_spread, mechanism_breakdown
from apps.stats.services.rician_service import fit_rician_ml, kfactor_moment
from apps.tracer.services.scene_access import as_geometry
from apps.tracer.services.trace_service import satellite_position, trace_service

logger = logging.getLogger(__name__)


def envelope_kfactors(amplitudes) -> tuple[float | None, float | None]:
    """(ML, moment) K-factor in dB of one grid envelope; None when it cannot be fitted."""
    try:
        samples = EnvelopeSamples.from_amplitudes(amplitudes)
    except StatsException as exc:
        logger.debug("no K-factor: %s", exc.detail)
        return None, None
    return fit_rician_ml(samples).k_hat_db, kfactor_moment(samples).k_hat_db


class CampaignTaskRunner:

    def __init__(self, config: CampaignConfig, scene: Scene, keep_realizations: bool = False):
        self.config = config
        self.scene = scene
        self.geometry = as_geometry(scene)
        self.keep_realizations = keep_realizations
        self.radius = settings.SIMULATION_MAX_INTERACTION_DISTANCE_M
        self.tx_spec = TxFieldSpec(Polarization(SATELLITE_POLARIZATION), SATELLITE_POWER_W)
        bands = {band for spec in config.use_cases for band in spec.bands}
        self.materials = {band: materials_for_band(scene, band) for band in sorted(bands)}

    def antenna(self, evaluation, pose):
        antenna = antenna_for_use_case(evaluation.use_case, evaluation.band, pose.direction)
        if evaluation.polarization:
            antenna = dataclasses.replace(antenna, polarization=Polarization(evaluation.polarization))
        return antenna

    def __call__(self, task: TraceTask) -> TaskOutcome:
        timings = {"trace": 0.0, "field": 0.0, "stats": 0.0}

        started = time.perf_counter()
        tx, _ = satellite_position(task.pose, task.grid.center_point)
        trace = trace_service.trace(self.geometry, tx, task.grid.center_point, self.config.budget, self.radius)
        lit = int(trace_service.grid_los(self.geometry, tx, task.grid.points()).sum())
        timings["trace"] += time.perf_counter() - started

        phases = ScatterPhaseSource(task.seed)
        by_band = {}
        rows = []
        realizations = []
        for evaluation in task.evaluations:
            started = time.perf_counter()
            contributions = by_band.get(evaluation.band)
            if contributions is None:
                materials = self.materials[evaluation.band]
                if by_band:
                    first = next(iter(by_band.values()))
                    contributions = field_service.retarget_frequency(
                        self.geometry, first, evaluation.frequency_hz, materials, self.tx_spec, phases,
                    )
                else:
                    contributions = field_service.contributions(
                        self.geometry, trace.paths, evaluation.frequency_hz, self.tx_spec, materials, phases,
                    )
                by_band[evaluation.band] = contributions
            realization = field_service.realization_from(
                contributions, task.pose, task.grid, self.antenna(evaluation, task.pose),
                evaluation.frequency_hz, task.seed,
            )
            timings["field"] += time.perf_counter() - started

            started = time.perf_counter()
            rows.append(self.row(task, evaluation, realization, trace.los, lit))
            timings["stats"] += time.perf_counter() - started
            if self.keep_realizations:
                realizations.append((evaluation, realization))

        return TaskOutcome(
            index=task.index,
            rows=tuple(rows),
            timings=timings,
            trace=trace if self.keep_realizations else None,
            realizations=tuple(realizations),
        )

    def row(self, task: TraceTask, evaluation, realization, los: bool, lit: int) -> dict:
        """One results row; ``los_lit`` and ``los_points`` feed the plot data only."""
        k_ml, k_moment = envelope_kfactors(realization.rx_amplitudes)
        try:
            ds = delay_spread(PowerDelayProfile.from_contributions(
                realization.contributions, realization.center_weights,
            ))
        except StatsException:
            ds = None
        try:
            shares = mechanism_breakdown(realization).shares
        except StatsException:
            shares = {}
        row = {
            "scenario": str(self.scene.scenario),
            "use_case": str(evaluation.use_case),
            "band": str(evaluation.band),
            "frequency_hz": float(evaluation.frequency_hz),
            "elevation_deg": float(task.pose.elevation_deg),
            "azimuth_deg": float(task.pose.azimuth_deg),
            "grid_id": task.grid_id,
            "los_flag": bool(los),
            "los_lit": lit,
            "los_points": task.grid.points_per_side ** 2,
            "k_ml_db": k_ml,
            "k_moment_db": k_moment,
            "ds_s": ds,
        }
        for label in MECHANISM_LABELS:
            row[f"share_{label}"] = shares.get(label) if shares else None
        return row
