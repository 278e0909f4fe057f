import logging
import math
import time
from pathlib import Path

from django.conf import settings
from django.utils import timezone

from apps.campaigns.constants import MAX_RECORDED_FAILURES, RunStatus
from apps.campaigns.entities import CampaignConfig, CampaignResult, RunManifest
from apps.campaigns.exceptions import CampaignException, CampaignFailed
from apps.campaigns.models import CampaignRun, CampaignTaskFailure
from apps.campaigns.selectors.run_selector import CampaignRunSelector
from apps.campaigns.services.config_service import campaign_config_service
from apps.campaigns.services.output_service import campaign_output_service
from apps.campaigns.services.planner_service import campaign_planner_service
from apps.campaigns.services.runner_service import CampaignTaskRunner
from apps.campaigns.tasks.pool import CampaignTaskPool
from apps.tracer.services.scene_access import as_geometry

logger = logging.getLogger(__name__)


def default_output_dir(name: str) -> Path:
    return Path(settings.SIMULATION_OUTPUT_DIR) / name


class CampaignService:

    def run_campaign(
        self,
        config: CampaignConfig,
        out_dir=None,
        threads: int | None = None,
        dump_paths: bool = False,
        run: CampaignRun | None = None,
    ) -> CampaignResult:
        timings = {}
        begun = time.perf_counter()

        started = time.perf_counter()
        scene = campaign_config_service.load_scene(config.scene)
        as_geometry(scene)
        timings["load"] = time.perf_counter() - started
        config_hash = campaign_config_service.config_hash(config, scene)
        out_dir = Path(out_dir or config.output_dir or default_output_dir(f"campaign-{config_hash[:12]}"))

        started = time.perf_counter()
        tasks = campaign_planner_service.plan_campaign(config, scene)
        timings["plan"] = time.perf_counter() - started
        if run is not None:
            self._mark(run, RunStatus.RUNNING, config_hash=config_hash, task_count=len(tasks),
                       output_dir=str(out_dir), started_at=timezone.now())

        started = time.perf_counter()
        runner = CampaignTaskRunner(config, scene, keep_realizations=dump_paths)
        pool = CampaignTaskPool(threads or settings.SIMULATION_DEFAULT_THREADS)
        result = pool.run(runner, tasks)
        timings["tasks_wall"] = time.perf_counter() - started
        outcomes = result.ordered()
        for outcome in outcomes:
            for stage, seconds in outcome.timings.items():
                timings[stage] = timings.get(stage, 0.0) + seconds

        manifest = RunManifest(
            config_hash=config_hash,
            code_version=settings.SIMULATION_CODE_VERSION,
            master_seed=config.master_seed,
            scene_fingerprint=scene.fingerprint,
            config=config.as_dict(with_output=False),
            tasks=[t.as_record() for t in tasks],
            failures=[{"index": i, "message": m} for i, m in sorted(result.failures.items())],
            timings=timings,
        )
        if run is not None and result.failures:
            self._record_failures(run, result.failures)

        allowed = math.floor(settings.SIMULATION_TASK_FAILURE_RATIO * len(tasks))
        if len(result.failures) > allowed:
            raise CampaignFailed(
                f"{len(result.failures)} of {len(tasks)} tasks failed "
                f"(at most {allowed} allowed); first: {manifest.failures[0]['message']}"
            )

        started = time.perf_counter()
        rows = [row for outcome in outcomes for row in outcome.rows]
        manifest.row_count = len(rows)
        files = {
            "results": str(campaign_output_service.write_results(rows, out_dir)),
            "plot_data": str(campaign_output_service.write_plot_data(rows, out_dir)),
        }
        if dump_paths:
            files.update(campaign_output_service.write_dumps(tasks, outcomes, out_dir))
        manifest.timings["write"] = time.perf_counter() - started
        files["manifest"] = str(campaign_output_service.write_manifest(manifest, out_dir))

        logger.info(
            "campaign %s finished: %d tasks, %d rows, %d failures in %.1fs",
            config_hash[:12], len(tasks), len(rows), len(result.failures), time.perf_counter() - begun,
        )
        if run is not None:
            self._mark(run, RunStatus.FINISHED, row_count=len(rows), failure_count=len(result.failures),
                       finished_at=timezone.now())
        return CampaignResult(
            output_dir=str(out_dir),
            files=files,
            manifest=manifest,
            task_count=len(tasks),
            row_count=len(rows),
        )

    def run_recorded(self, run_id, threads: int | None = None, dump_paths: bool = False) -> dict:
        """Run the campaign stored on a run record, tracking its status."""
        run = CampaignRunSelector.get_run(run_id)
        try:
            config = campaign_config_service.parse_config(run.config)
            result = self.run_campaign(config, out_dir=run.output_dir, threads=threads,
                                       dump_paths=dump_paths, run=run)
        except CampaignException as exc:
            self._mark(run, RunStatus.FAILED, message=str(exc.detail), finished_at=timezone.now())
            raise
        except Exception as exc:
            logger.exception("campaign run %s crashed", run.id)
            self._mark(run, RunStatus.FAILED, message=f"{type(exc).__name__}: {exc}", finished_at=timezone.now())
            raise
        return {"run_id": str(run.id), **result.summary()}

    def _mark(self, run: CampaignRun, status: str, **fields) -> None:
        CampaignRun.objects.filter(pk=run.pk).update(status=status, **fields)

    def _record_failures(self, run: CampaignRun, failures: dict) -> None:
        CampaignTaskFailure.objects.bulk_create(
            [
                CampaignTaskFailure(run=run, task_index=index, message=message)
                for index, message in sorted(failures.items())[:MAX_RECORDED_FAILURES]
            ],
            ignore_conflicts=True,
        )
        CampaignRun.objects.filter(pk=run.pk).update(failure_count=len(failures))


campaign_service = CampaignService()
