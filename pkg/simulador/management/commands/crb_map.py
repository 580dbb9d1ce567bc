"""
Mapas de CRB(alpha) e CRB(xi) em dB sobre a grade.

Uso:
  python manage.py crb_map
  python manage.py crb_map --alvos 2 --grid-res 0.5
"""
from simulador.management.base import ExperimentoCommand


class Command(ExperimentoCommand):
    help = 'Mapas de CRB dos ângulos'
    tipo = 'crb_map'
