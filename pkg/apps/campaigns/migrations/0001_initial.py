# Generated by Django 5.2.7 on 2026-10-19 09:12

import django.db.models.deletion
import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='CampaignRun',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('config', models.JSONField()),
                ('config_hash', models.CharField(blank=True, default='', max_length=64)),
                ('status', models.CharField(choices=[('queued', 'Queued'), ('running', 'Running'), ('finished', 'Finished'), ('failed', 'Failed')], default='queued', max_length=16)),
                ('output_dir', models.CharField(max_length=1024)),
                ('task_count', models.IntegerField(default=0)),
                ('row_count', models.IntegerField(default=0)),
                ('failure_count', models.IntegerField(default=0)),
                ('message', models.TextField(blank=True, default='')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('started_at', models.DateTimeField(blank=True, null=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'db_table': 'campaign_run',
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['status'], name='idx_campaign_run_status')],
            },
        ),
        migrations.CreateModel(
            name='CampaignTaskFailure',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('task_index', models.IntegerField()),
                ('message', models.TextField()),
                ('occurred_at', models.DateTimeField(auto_now_add=True)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='failures', to='campaigns.campaignrun')),
            ],
            options={
                'db_table': 'campaign_task_failure',
                'ordering': ['task_index'],
                'constraints': [models.UniqueConstraint(fields=('run', 'task_index'), name='uq_run_task')],
            },
        ),
    ]
