"""
Mapa de PEB em metros sobre a grade.

Uso:
  python manage.py peb_map --alvos 10
"""
from simulador.management.base import ExperimentoCommand


class Command(ExperimentoCommand):
    help = 'Mapa de PEB'
    tipo = 'peb_map'
