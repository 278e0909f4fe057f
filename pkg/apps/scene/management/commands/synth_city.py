import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.scene.api.serializers.scene_serializer import SynthCityParamsSerializer
from apps.scene.constants import SCENARIO_PRESETS
from apps.scene.exceptions import SceneException
from apps.scene.services.loader_service import flatten_errors
from apps.scene.services.synth_service import synth_city_service


class Command(BaseCommand):
    help = "Generate a synthetic Manhattan-grid city and write it as a scene JSON file"

    def add_arguments(self, parser):
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument(
            "--params",
            type=str,
            help="JSON file with block_m, street_m, rows, cols, height_mean_m, height_std_m, seed.",
        )
        group.add_argument(
            "--preset",
            type=str,
            choices=[str(s) for s in SCENARIO_PRESETS],
            help="Use the generator preset of a built-in scenario.",
        )
        parser.add_argument(
            "--seed",
            type=int,
            default=0,
            help="Seed for --preset runs.",
        )
        parser.add_argument(
            "--out",
            type=str,
            required=True,
            help="Output scene file.",
        )

    def handle(self, *args, **options):
        try:
            if options["preset"]:
                scene = synth_city_service.synth_preset(options["preset"], seed=options["seed"])
            else:
                params = self._read_params(options["params"])
                scene = synth_city_service.synth_city(**params)
        except SceneException as exc:
            raise CommandError(str(exc.detail)) from exc

        out = Path(options["out"])
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(json.dumps(scene.as_dict(), indent=2, sort_keys=True), encoding="utf-8")
        except OSError as exc:
            raise CommandError(f"cannot write {out}: {exc}") from exc

        self.stdout.write(self.style.SUCCESS(f"Scene written to {out}"))
        self.stdout.write(json.dumps(scene.statistics(), indent=2))

    def _read_params(self, path: str) -> dict:
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CommandError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        serializer = SynthCityParamsSerializer(data=payload)
        if not serializer.is_valid():
            raise CommandError("; ".join(flatten_errors(serializer.errors)))
        return dict(serializer.validated_data)
