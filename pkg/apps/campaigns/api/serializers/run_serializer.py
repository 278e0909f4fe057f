from rest_framework import serializers

from apps.campaigns.models import CampaignRun, CampaignTaskFailure
from apps.stats.constants import MIN_SAMPLES


class CampaignRunRequestSerializer(serializers.Serializer):

    config = serializers.DictField()
    run_async = serializers.BooleanField(
        required=False,
        default=True,
    )
    dump_paths = serializers.BooleanField(
        required=False,
        default=False,
    )


class CampaignRunQueuedResponseSerializer(serializers.Serializer):

    task_id = serializers.CharField()
    status = serializers.CharField()
    run_id = serializers.UUIDField()


class CampaignTaskFailureSerializer(serializers.ModelSerializer):

    class Meta:
        model = CampaignTaskFailure
        fields = ["task_index", "message", "occurred_at"]


class CampaignRunSerializer(serializers.ModelSerializer):

    class Meta:
        model = CampaignRun
        fields = [
            "id",
            "status",
            "config_hash",
            "output_dir",
            "task_count",
            "row_count",
            "failure_count",
            "message",
            "created_at",
            "started_at",
            "finished_at",
        ]


class CampaignRunDetailSerializer(CampaignRunSerializer):

    config = serializers.JSONField()
    failures = serializers.SerializerMethodField()

    class Meta(CampaignRunSerializer.Meta):
        fields = CampaignRunSerializer.Meta.fields + ["config", "failures"]

    def get_failures(self, obj):
        failures = self.context.get("failures", ())
        return CampaignTaskFailureSerializer(failures, many=True).data


class RicianFitRequestSerializer(serializers.Serializer):

    amplitudes = serializers.ListField(
        child=serializers.FloatField(min_value=0.0),
        min_length=MIN_SAMPLES,
    )


class RicianFitSerializer(serializers.Serializer):

    nu_hat = serializers.FloatField()
    sigma_hat = serializers.FloatField()
    k_db = serializers.FloatField()
    log_likelihood = serializers.FloatField()
    method = serializers.CharField()
    converged = serializers.BooleanField()


class RicianFitResponseSerializer(serializers.Serializer):

    samples = serializers.IntegerField()
    normalization = serializers.FloatField()
    ml = RicianFitSerializer()
    moment = RicianFitSerializer()
