"""
CRB de xi com uma RIS de perfil fixo, sobre a grade e pareado com a STCM.

Uso:
  python manage.py ris_compare
"""
from simulador.management.base import ExperimentoCommand


class Command(ExperimentoCommand):
    help = 'Comparação com RIS'
    tipo = 'ris_compare'
