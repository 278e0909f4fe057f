from django.apps import AppConfig


class AntennasConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.antennas'
    label = 'antennas'
