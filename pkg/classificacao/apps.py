from django.apps import AppConfig


class ClassificacaoConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'classificacao'
    verbose_name = 'Classificação de espalhadores'
