"""
Exportadores JSON: sidecar de parâmetros e manifesto da execução.
"""

import json

from .base import BaseExporter


class JsonExporter(BaseExporter):

    def __init__(self, dados, filename):
        super().__init__(dados)
        self.filename = filename

    def exportar(self, diretorio):
        caminho = self._caminho(diretorio)
        with open(caminho, 'w', encoding='utf-8') as arquivo:
            json.dump(self.dados, arquivo, indent=2, sort_keys=True, ensure_ascii=False)
            arquivo.write('\n')
        return caminho

    def get_content_type(self):
        return 'application/json'

    def get_filename(self):
        return self.filename


class SidecarJsonExporter(JsonExporter):
    """
    Parametrização completa ao lado de cada CSV: configuração, hash,
    versão do código e descrição da tabela.
    """

    def __init__(self, tabela, config, versao, config_hash):
        dados = {
            'tabela': tabela.nome,
            'descricao': tabela.descricao,
            'colunas': list(tabela.cabecalho),
            'linhas': len(tabela.linhas),
            'versao': versao,
            'config_hash': config_hash,
            'config': config,
        }
        nome = tabela.nome.rsplit('.', 1)[0] + '.json'
        super().__init__(dados, nome)


class ManifestoJsonExporter(JsonExporter):
    """Manifesto gravado por último, com os checksums das saídas."""

    def __init__(self, manifesto):
        dados = {
            'config_hash': manifesto.config_hash,
            'code_version': manifesto.code_version,
            'seed': manifesto.seed,
            'started_at': manifesto.started_at,
            'finished_at': manifesto.finished_at,
            'outputs': manifesto.outputs,
        }
        super().__init__(dados, 'manifest.json')
