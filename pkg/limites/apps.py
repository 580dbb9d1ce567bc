from django.apps import AppConfig


class LimitesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'limites'
    verbose_name = 'Limites de Cramér-Rao'
