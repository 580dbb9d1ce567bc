"""
Mapas de probabilidade de detecção para os dois combinadores e os dois
tipos de alvo.

Uso:
  python manage.py detect_map --threads 8
"""
from simulador.management.base import ExperimentoCommand


class Command(ExperimentoCommand):
    help = 'Mapas de detecção'
    tipo = 'detect_map'
