import uuid

from django.db import models

from apps.campaigns.constants import RunStatus


class CampaignRun(models.Model):

    id              = models.UUIDField(primary_key=True, default=uuid.uuid4, editable=False)
    config          = models.JSONField()
    config_hash     = models.CharField(max_length=64, blank=True, default="")
    status          = models.CharField(max_length=16, choices=RunStatus.choices, default=RunStatus.QUEUED)
    output_dir      = models.CharField(max_length=1024)
    task_count      = models.IntegerField(default=0)
    row_count       = models.IntegerField(default=0)
    failure_count   = models.IntegerField(default=0)
    message         = models.TextField(blank=True, default="")
    created_at      = models.DateTimeField(auto_now_add=True)
    started_at      = models.DateTimeField(null=True, blank=True)
    finished_at     = models.DateTimeField(null=True, blank=True)

    class Meta:
        db_table = "campaign_run"
        ordering = ["-created_at"]
        indexes = [
            models.Index(fields=["status"], name="idx_campaign_run_status"),
        ]

    def __str__(self):
        return f"{self.id} [{self.status}]"


class CampaignTaskFailure(models.Model):

    run             = models.ForeignKey(CampaignRun, on_delete=models.CASCADE, related_name="failures")
    task_index      = models.IntegerField()
    message         = models.TextField()
    occurred_at     = models.DateTimeField(auto_now_add=True)

    class Meta:
        db_table = "campaign_task_failure"
        ordering = ["task_index"]
        constraints = [
            models.UniqueConstraint(fields=["run", "task_index"], name="uq_run_task"),
        ]

    def __str__(self):
        return f"{self.run_id}:{self.task_index}"
