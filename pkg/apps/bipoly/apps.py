from django.apps import AppConfig


class BipolyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.bipoly'
    verbose_name = 'Discriminants in t over F_q[U]'
