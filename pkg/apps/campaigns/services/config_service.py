import hashlib
import json
import logging
from pathlib import Path

from django.conf import settings

from apps.antennas.constants import BAND_CENTER_HZ, USE_CASES, UseCase
from apps.campaigns.api.serializers.config_serializer import CampaignConfigSerializer
from apps.campaigns.constants import SceneSourceKind
from apps.campaigns.entities import CampaignConfig, SceneSource, UseCaseSpec
from apps.campaigns.exceptions import CampaignConfigError
from apps.scene.entities import Scene
from apps.scene.exceptions import SceneException
from apps.scene.services.loader_service import flatten_errors, scene_loader_service
from apps.scene.services.synth_service import synth_city_service
from apps.tracer.entities import InteractionBudget

logger = logging.getLogger(__name__)


class CampaignConfigService:

    def load_config(self, path) -> CampaignConfig:
        path = Path(path)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise CampaignConfigError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CampaignConfigError(f"{path.name}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return self.parse_config(payload, base_dir=path.parent)

    def parse_config(self, payload, base_dir=None) -> CampaignConfig:
        """Validate a config document; a run manifest is accepted and replays its config."""
        if not isinstance(payload, dict):
            raise CampaignConfigError("config must be a JSON object")
        if "config_hash" in payload and isinstance(payload.get("config"), dict):
            payload = payload["config"]
        serializer = CampaignConfigSerializer(data=payload)
        if not serializer.is_valid():
            raise CampaignConfigError("; ".join(flatten_errors(serializer.errors, "config")))
        data = serializer.validated_data

        grids = data.get("grids") or {}
        budget = data.get("budget")
        frequencies = {str(b): f for b, f in BAND_CENTER_HZ.items()}
        frequencies.update({str(b): float(f) for b, f in data["bands"].items()})
        centers = grids.get("centers")
        return CampaignConfig(
            scene=self._scene_source(data["scene"], base_dir),
            use_cases=tuple(self._use_case(u) for u in data["use_cases"]),
            frequencies=frequencies,
            elevations_deg=tuple(float(e) for e in data["elevations_deg"]),
            azimuth_count=data["azimuth_count"],
            grid_count=len(centers) if centers else grids.get("count", CampaignConfig.grid_count),
            grid_centers=tuple(tuple(c) for c in centers) if centers else None,
            grid_side_m=grids.get("side_m", CampaignConfig.grid_side_m),
            grid_points=grids.get("points_per_side", CampaignConfig.grid_points),
            budget=InteractionBudget(**budget) if budget else InteractionBudget(),
            altitude_m=data.get("altitude_m", settings.SIMULATION_SATELLITE_ALTITUDE_M),
            master_seed=data["master_seed"],
            output_dir=data.get("output_dir"),
        )

    def _scene_source(self, data: dict, base_dir) -> SceneSource:
        if "file" in data:
            path = Path(data["file"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            return SceneSource(kind=SceneSourceKind.FILE, path=str(path))
        if "inline" in data:
            return SceneSource(kind=SceneSourceKind.INLINE, payload=dict(data["inline"]))
        if "synth" in data:
            return SceneSource(kind=SceneSourceKind.SYNTH, payload=dict(data["synth"]))
        return SceneSource(kind=SceneSourceKind.PRESET, preset=data["preset"], seed=data["seed"])

    def _use_case(self, data: dict) -> UseCaseSpec:
        use_case = UseCase(data["use_case"])
        bands = data.get("bands") or [str(b) for b in USE_CASES[use_case]["bands"]]
        return UseCaseSpec(
            use_case=str(use_case),
            bands=tuple(dict.fromkeys(str(b) for b in bands)),
            polarization=data.get("polarization"),
        )

    def load_scene(self, source: SceneSource) -> Scene:
        try:
            if source.kind == SceneSourceKind.FILE:
                return scene_loader_service.load_scene(source.path)
            if source.kind == SceneSourceKind.INLINE:
                return scene_loader_service.parse_scene(source.payload, source="inline scene")
            if source.kind == SceneSourceKind.SYNTH:
                return synth_city_service.synth_city(**source.payload)
            return synth_city_service.synth_preset(source.preset, seed=source.seed)
        except SceneException as exc:
            raise CampaignConfigError(f"scene: {exc.detail}") from exc

    def config_hash(self, config: CampaignConfig, scene: Scene) -> str:
        """Identity of the computation: the config without its output location, and the scene content."""
        document = config.as_dict(with_output=False)
        document["scene"] = scene.fingerprint
        canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


campaign_config_service = CampaignConfigService()
