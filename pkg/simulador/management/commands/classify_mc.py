"""
Curvas de classificação MAP por Monte Carlo em função da SNR.

Uso:
  python manage.py classify_mc --seed 1
  python manage.py classify_mc --seed 1 --trials 100000
"""
from simulador.management.base import ExperimentoCommand


class Command(ExperimentoCommand):
    help = 'Classificação Monte Carlo'
    tipo = 'classify_mc'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--trials', type=int, help='Tentativas por hipótese')

    def sobrescritas(self, options):
        resultado = super().sobrescritas(options)
        if options.get('trials') is not None:
            resultado['experimento']['n_tentativas'] = options['trials']
        return resultado
