from django.apps import AppConfig


class TracerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.tracer'
    label = 'tracer'
