from django.apps import AppConfig


class SceneConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.scene'
    label = 'scene'
