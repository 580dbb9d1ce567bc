from django.apps import AppConfig


class MetasuperficieConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'metasuperficie'
    verbose_name = 'Metassuperfície codificada no espaço-tempo'
