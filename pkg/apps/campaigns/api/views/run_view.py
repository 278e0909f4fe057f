from rest_framework import status
from rest_framework.permissions import IsAdminUser
from rest_framework.views import APIView

from apps.campaigns.api.serializers.run_serializer import (
    CampaignRunDetailSerializer,
    CampaignRunQueuedResponseSerializer,
    CampaignRunRequestSerializer,
    CampaignRunSerializer,
)
from apps.campaigns.constants import RunStatus
from apps.campaigns.exceptions import CampaignDispatchFailed
from apps.campaigns.models import CampaignRun
from apps.campaigns.selectors.run_selector import CampaignRunSelector
from apps.campaigns.services.campaign_service import campaign_service, default_output_dir
from apps.campaigns.services.config_service import campaign_config_service
from apps.campaigns.services.planner_service import campaign_planner_service
from apps.campaigns.tasks.campaign import run_campaign_task
from apps.core.response import success_response


class CampaignRunListView(APIView):

    permission_classes = [IsAdminUser]

    def get(self, request):
        runs = CampaignRunSelector.list_runs(status=request.query_params.get("status"))
        return success_response(data=CampaignRunSerializer(runs, many=True).data)

    def post(self, request):
        serializer = CampaignRunRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        payload = serializer.validated_data["config"]
        dump_paths = serializer.validated_data["dump_paths"]

        # reject a bad config before anything is recorded
        config = campaign_config_service.parse_config(payload)
        campaign_planner_service.validate(config, campaign_config_service.load_scene(config.scene))
        run = CampaignRun.objects.create(config=config.as_dict(with_output=False), output_dir="")
        output_dir = config.output_dir or str(default_output_dir(f"run-{run.id}"))
        CampaignRun.objects.filter(pk=run.pk).update(output_dir=output_dir)

        if serializer.validated_data["run_async"]:
            try:
                task = run_campaign_task.delay(str(run.id), dump_paths=dump_paths)
            except Exception as exc:
                CampaignRun.objects.filter(pk=run.pk).update(status=RunStatus.FAILED, message="dispatch failed")
                raise CampaignDispatchFailed() from exc

            output_serializer = CampaignRunQueuedResponseSerializer(
                {
                    "task_id": task.id,
                    "status": RunStatus.QUEUED,
                    "run_id": run.id,
                }
            )
            return success_response(
                data=output_serializer.data,
                status_code=status.HTTP_202_ACCEPTED,
            )

        campaign_service.run_recorded(run.id, dump_paths=dump_paths)
        run = CampaignRunSelector.get_run(run.id)
        return success_response(data=CampaignRunSerializer(run).data)


class CampaignRunDetailView(APIView):

    permission_classes = [IsAdminUser]

    def get(self, request, run_id):
        run = CampaignRunSelector.get_run(run_id)
        serializer = CampaignRunDetailSerializer(
            run,
            context={"failures": CampaignRunSelector.list_failures(run)},
        )
        return success_response(data=serializer.data)
