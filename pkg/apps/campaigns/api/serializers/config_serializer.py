from rest_framework import serializers

from apps.antennas.constants import Band, PolarizationKind, UseCase
from apps.campaigns.constants import DEFAULT_AZIMUTH_COUNT, DEFAULT_ELEVATIONS_DEG, DEFAULT_GRID_COUNT
from apps.scene.api.serializers.scene_serializer import SynthCityParamsSerializer
from apps.scene.constants import SCENARIO_PRESETS
from apps.tracer.constants import BUDGET_LIMITS, DEFAULT_BUDGET, DEFAULT_GRID_POINTS, DEFAULT_GRID_SIDE_M


class SceneSourceSerializer(serializers.Serializer):

    file = serializers.CharField(required=False)
    inline = serializers.DictField(required=False)
    synth = SynthCityParamsSerializer(required=False)
    preset = serializers.ChoiceField(
        required=False,
        choices=[str(s) for s in SCENARIO_PRESETS],
    )
    seed = serializers.IntegerField(required=False, default=0)

    def validate(self, attrs):
        given = [key for key in ("file", "inline", "synth", "preset") if key in attrs]
        if len(given) != 1:
            raise serializers.ValidationError("exactly one of file, inline, synth or preset is required")
        return attrs


class UseCaseSerializer(serializers.Serializer):

    use_case = serializers.ChoiceField(choices=UseCase.values)
    bands = serializers.ListField(
        child=serializers.ChoiceField(choices=Band.values),
        required=False,
        allow_empty=False,
    )
    polarization = serializers.ChoiceField(
        required=False,
        choices=PolarizationKind.values,
    )


class GridsSerializer(serializers.Serializer):

    count = serializers.IntegerField(required=False, default=DEFAULT_GRID_COUNT, min_value=1)
    centers = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2),
        required=False,
        allow_empty=False,
    )
    side_m = serializers.FloatField(required=False, default=DEFAULT_GRID_SIDE_M, min_value=0.0)
    points_per_side = serializers.IntegerField(required=False, default=DEFAULT_GRID_POINTS, min_value=1)


class BudgetSerializer(serializers.Serializer):

    reflections = serializers.IntegerField(
        required=False, default=DEFAULT_BUDGET["reflections"],
        min_value=0, max_value=BUDGET_LIMITS["reflections"],
    )
    diffractions = serializers.IntegerField(
        required=False, default=DEFAULT_BUDGET["diffractions"],
        min_value=0, max_value=BUDGET_LIMITS["diffractions"],
    )
    reflections_diffractions = serializers.IntegerField(
        required=False, default=DEFAULT_BUDGET["reflections_diffractions"],
        min_value=0, max_value=BUDGET_LIMITS["reflections_diffractions"],
    )
    scatterings = serializers.IntegerField(
        required=False, default=DEFAULT_BUDGET["scatterings"],
        min_value=0, max_value=BUDGET_LIMITS["scatterings"],
    )
    reflections_scatterings = serializers.IntegerField(
        required=False, default=DEFAULT_BUDGET["reflections_scatterings"],
        min_value=0, max_value=BUDGET_LIMITS["reflections_scatterings"],
    )
    diffractions_scatterings = serializers.IntegerField(
        required=False, default=DEFAULT_BUDGET["diffractions_scatterings"],
        min_value=0, max_value=BUDGET_LIMITS["diffractions_scatterings"],
    )


class CampaignConfigSerializer(serializers.Serializer):

    scene = SceneSourceSerializer()
    use_cases = serializers.ListField(child=UseCaseSerializer(), allow_empty=False)
    bands = serializers.DictField(
        child=serializers.FloatField(min_value=0.0),
        required=False,
        default=dict,
    )
    elevations_deg = serializers.ListField(
        child=serializers.FloatField(min_value=0.0, max_value=90.0),
        required=False,
        allow_empty=False,
        default=lambda: list(DEFAULT_ELEVATIONS_DEG),
    )
    azimuth_count = serializers.IntegerField(required=False, default=DEFAULT_AZIMUTH_COUNT, min_value=1)
    grids = GridsSerializer(required=False)
    budget = BudgetSerializer(required=False)
    altitude_m = serializers.FloatField(required=False, min_value=0.0)
    master_seed = serializers.IntegerField(required=False, default=0, min_value=0)
    output_dir = serializers.CharField(required=False)

    def validate_bands(self, value):
        unknown = sorted(set(value) - set(Band.values))
        if unknown:
            raise serializers.ValidationError(f"unknown bands: {', '.join(unknown)}")
        return value

    def validate_elevations_deg(self, value):
        if any(e <= 0.0 for e in value):
            raise serializers.ValidationError("elevations must be in (0, 90]")
        if len(set(value)) != len(value):
            raise serializers.ValidationError("elevations must be distinct")
        return value
