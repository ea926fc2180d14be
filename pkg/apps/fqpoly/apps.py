from django.apps import AppConfig


class FqpolyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.fqpoly'
    verbose_name = 'Polynomials over finite fields'
