from django.apps import AppConfig


class DeteccaoConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'deteccao'
    verbose_name = 'Detecção de alvos'
