"""
Executa a suíte de invariantes; termina com erro se alguma falhar.

Uso:
  python manage.py validate --seed 7
"""
from django.core.management.base import CommandError

from simulador.management.base import ExperimentoCommand


class Command(ExperimentoCommand):
    help = 'Validação de invariantes'
    tipo = 'validate'

    def depois(self, tabelas):
        falhas = [linha for linha in tabelas[0].linhas if not linha[1]]
        for nome, _, detalhe in tabelas[0].linhas:
            self.stdout.write(f"    {nome}: {detalhe}")
        if falhas:
            for nome, _, detalhe in falhas:
                self.stdout.write(self.style.ERROR(f"  [falhou] {nome}: {detalhe}"))
            raise CommandError(f'{len(falhas)} verificação(ões) falharam.')
