from rest_framework import serializers

from apps.scene.constants import Scenario


class MaterialSerializer(serializers.Serializer):

    eps_r = serializers.FloatField()
    sigma = serializers.FloatField()
    S = serializers.FloatField()


class PointSerializer(serializers.ListField):

    child = serializers.FloatField()

    def to_internal_value(self, data):
        values = super().to_internal_value(data)
        if len(values) != 2:
            raise serializers.ValidationError("expected [x, y]")
        return values


class BuildingSerializer(serializers.Serializer):

    id = serializers.CharField(max_length=128)
    height_m = serializers.FloatField()
    footprint = serializers.ListField(child=PointSerializer())
    material = MaterialSerializer(required=False)


class SceneFileSerializer(serializers.Serializer):

    scenario = serializers.ChoiceField(
        required=False,
        default=Scenario.CUSTOM,
        choices=Scenario.values,
    )
    bounds = serializers.ListField(
        child=serializers.FloatField(),
        min_length=4,
        max_length=4,
    )
    terrain = MaterialSerializer(required=False)
    buildings = serializers.ListField(
        child=BuildingSerializer(),
        required=False,
        default=list,
    )


class SynthCityParamsSerializer(serializers.Serializer):

    block_m = serializers.FloatField()
    street_m = serializers.FloatField()
    rows = serializers.IntegerField()
    cols = serializers.IntegerField()
    height_mean_m = serializers.FloatField()
    height_std_m = serializers.FloatField()
    seed = serializers.IntegerField(required=False, default=0)
    scenario = serializers.ChoiceField(
        required=False,
        default=Scenario.CUSTOM,
        choices=Scenario.values,
    )
