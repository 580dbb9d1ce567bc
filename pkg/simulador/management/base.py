"""
Base dos comandos de experimento.

Uso:
  python manage.py crb_map --config cenario.json --seed 7 --out resultados/crb
  python manage.py classify_mc --seed 1 --threads 8 --xlsx
"""
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from common.exceptions import SensoriamentoError
from simulador.config import carregar_configuracao
from simulador.services import ExperimentoService


class ExperimentoCommand(BaseCommand):
    """
    Comando que carrega a configuração, executa um experimento e grava
    as saídas. Subclasses definem tipo e help.
    """
    tipo = None

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Arquivo JSON de configuração')
        parser.add_argument('--seed', type=int, help='Semente mestre')
        parser.add_argument('--out', help='Diretório de saída')
        parser.add_argument('--grid-res', type=float, help='Passo da grade em metros')
        parser.add_argument(
            '--threads', type=int, default=None,
            help='Processos de trabalho (padrão: STCM_THREADS)',
        )
        parser.add_argument('--harmonics', type=int, help='Maior harmônico m_f')
        parser.add_argument(
            '--alvos', type=int, choices=[1, 2, 10],
            help='Número de alvos dos mapas de CRB/PEB',
        )
        parser.add_argument(
            '--xlsx', action='store_true', help='Grava também o resumo em Excel'
        )

    def sobrescritas(self, options):
        """Traduz as opções da linha de comando para o JSON de configuração."""
        experimento = {'tipo': self.tipo}
        opcionais = {
            'seed': 'seed',
            'out': 'saida',
            'grid_res': 'resolucao_grade',
            'alvos': 'alvos',
        }
        for opcao, chave in opcionais.items():
            if options.get(opcao) is not None:
                experimento[chave] = options[opcao]
        resultado = {'experimento': experimento}
        if options.get('harmonics') is not None:
            resultado['harmonicos'] = {'m_f': options['harmonics']}
        return resultado

    def handle(self, *args, **options):
        threads = options.get('threads') or settings.STCM_THREADS
        if threads < 1 and threads != -1:
            raise CommandError('--threads deve ser positivo (ou -1 para todos os núcleos).')

        try:
            config = carregar_configuracao(options.get('config'), self.sobrescritas(options))
        except ValidationError as exc:
            raise CommandError(f'Configuração inválida: {"; ".join(exc.messages)}') from exc

        self.stdout.write("\n" + "=" * 60)
        self.stdout.write(f"  {self.help.upper()}")
        self.stdout.write("=" * 60)
        self.stdout.write(f"  Saída: {config.output_dir}")

        try:
            execucao, manifesto, tabelas = ExperimentoService.executar(
                config, threads=threads, xlsx=options.get('xlsx', False)
            )
        except SensoriamentoError as exc:
            raise CommandError(f'Falha na execução: {exc}') from exc

        for tabela in tabelas:
            self.stdout.write(f"  [ok] {tabela.nome}: {len(tabela.linhas)} linhas")
        self.depois(tabelas)

        self.stdout.write(
            self.style.SUCCESS(
                f"\nExecução {execucao.id} concluída: "
                f"{len(manifesto.outputs)} arquivos (hash {manifesto.config_hash[:12]})"
            )
        )

    def depois(self, tabelas):
        """Gancho para verificações após a gravação."""
        pass
