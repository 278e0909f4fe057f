from celery import shared_task

from apps.campaigns.constants import CAMPAIGN_SOFT_TIME_LIMIT_S, CAMPAIGN_TIME_LIMIT_S


class CampaignTask:

    @staticmethod
    def run(run_id: str, dump_paths: bool = False):
        # the service module imports the worker pool from this package
        from apps.campaigns.services.campaign_service import campaign_service

        return campaign_service.run_recorded(run_id, dump_paths=dump_paths)


@shared_task(
    bind=True,
    soft_time_limit=CAMPAIGN_SOFT_TIME_LIMIT_S,
    time_limit=CAMPAIGN_TIME_LIMIT_S,
)
def run_campaign_task(self, run_id: str, dump_paths: bool = False):
    return CampaignTask.run(run_id, dump_paths=dump_paths)
