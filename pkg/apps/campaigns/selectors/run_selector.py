from django.core.exceptions import ValidationError

from apps.campaigns.exceptions import CampaignRunNotFound
from apps.campaigns.models import CampaignRun, CampaignTaskFailure


class CampaignRunSelector:

    @staticmethod
    def get_run(run_id) -> CampaignRun:
        try:
            return CampaignRun.objects.get(pk=run_id)
        except (CampaignRun.DoesNotExist, ValidationError) as exc:
            raise CampaignRunNotFound() from exc

    @staticmethod
    def list_failures(run: CampaignRun, limit: int = 50):
        return CampaignTaskFailure.objects.filter(run=run).order_by("task_index")[:limit]

    @staticmethod
    def list_runs(status=None, limit: int = 20):
        qs = CampaignRun.objects.all()
        if status:
            qs = qs.filter(status=status)
        return qs.order_by("-created_at")[:limit]
