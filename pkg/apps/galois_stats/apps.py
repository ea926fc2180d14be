from django.apps import AppConfig


class GaloisStatsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.galois_stats'
    verbose_name = 'Cycle-type statistics'
