from django.apps import AppConfig


class HlcountConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.hlcount'
    verbose_name = 'Hardy-Littlewood tuple counts'
