import dataclasses
import json

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.campaigns.exceptions import CampaignException
from apps.campaigns.services.campaign_service import campaign_service
from apps.campaigns.services.config_service import campaign_config_service


class Command(BaseCommand):
    help = "Run a satellite-to-urban channel campaign from a JSON config (or a run manifest)"

    def add_arguments(self, parser):
        parser.add_argument(
            "--config",
            type=str,
            required=True,
            help="Campaign config JSON, or the manifest.json of an earlier run to replay it.",
        )
        parser.add_argument(
            "--out",
            type=str,
            help="Output directory (defaults to the config's output_dir, then SIMULATION_OUTPUT_DIR).",
        )
        parser.add_argument(
            "--dump-paths",
            action="store_true",
            help="Also write every traced path and per-realization contribution tables.",
        )
        parser.add_argument(
            "--threads",
            type=int,
            default=None,
            help=f"Worker threads (default {settings.SIMULATION_DEFAULT_THREADS}).",
        )
        parser.add_argument(
            "--seed",
            type=int,
            default=None,
            help="Override the config's master seed.",
        )

    def handle(self, *args, **options):
        threads = options["threads"]
        if threads is not None and threads < 1:
            raise CommandError("--threads must be >= 1")
        try:
            config = campaign_config_service.load_config(options["config"])
            if options["seed"] is not None:
                if options["seed"] < 0:
                    raise CommandError("--seed must be >= 0")
                config = dataclasses.replace(config, master_seed=options["seed"])
            result = campaign_service.run_campaign(
                config,
                out_dir=options["out"],
                threads=threads,
                dump_paths=options["dump_paths"],
            )
        except CampaignException as exc:
            raise CommandError(str(exc.detail)) from exc
        except OSError as exc:
            raise CommandError(f"output failed: {exc}") from exc

        self.stdout.write(self.style.SUCCESS(
            f"Campaign finished: {result.row_count} rows from {result.task_count} traces in {result.output_dir}"
        ))
        self.stdout.write(json.dumps(result.summary(), indent=2, sort_keys=True))
