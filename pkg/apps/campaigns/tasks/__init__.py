from apps.campaigns.tasks.campaign import run_campaign_task


__all__ = (
    "run_campaign_task",
)
