from django.apps import AppConfig


class GeometriaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'geometria'
    verbose_name = 'Geometria da cena'
