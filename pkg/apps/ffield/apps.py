from django.apps import AppConfig


class FfieldConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.ffield'
    verbose_name = 'Finite fields'
