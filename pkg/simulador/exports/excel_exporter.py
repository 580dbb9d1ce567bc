"""
Exportador do resumo de uma execução em Excel (.xlsx).

Uma aba de resumo com estatísticas por tabela e uma aba com os dados
de cada tabela.
"""

import math

import xlsxwriter

from .base import BaseExporter

# Limite de linhas de uma planilha xlsx
LIMITE_LINHAS = 1_048_575


class ResumoExcelExporter(BaseExporter):
    """
    Exportador do resumo das tabelas de uma execução.
    """

    def __init__(self, dados, titulo, filename='resumo.xlsx'):
        """
        Args:
            dados: Lista de Tabela
            titulo: Título da planilha de resumo
            filename: Nome do arquivo
        """
        super().__init__(dados)
        self.titulo = titulo
        self.filename = filename
        self.workbook = None
        self.formats = {}

    def criar_formatos(self):
        """Cria os formatos de células usados no Excel."""
        self.formats['title'] = self.workbook.add_format({
            'bold': True,
            'font_size': 16,
            'align': 'center',
            'valign': 'vcenter'
        })

        self.formats['header'] = self.workbook.add_format({
            'bold': True,
            'bg_color': '#4472C4',
            'font_color': 'white',
            'align': 'center',
            'border': 1
        })

        self.formats['cell'] = self.workbook.add_format({
            'border': 1,
            'align': 'left'
        })

        self.formats['number'] = self.workbook.add_format({
            'border': 1,
            'align': 'right',
            'num_format': '0.000E+00'
        })

    def get_content_type(self):
        """Retorna o content-type para Excel."""
        return (
            'application/vnd.openxmlformats-officedocument.'
            'spreadsheetml.sheet'
        )

    def get_filename(self):
        return self.filename

    def exportar(self, diretorio):
        caminho = self._caminho(diretorio)
        self.workbook = xlsxwriter.Workbook(str(caminho), {'nan_inf_to_errors': True})
        self.criar_formatos()

        self._criar_aba_resumo()
        for indice, tabela in enumerate(self.dados):
            self._criar_aba_tabela(indice, tabela)

        self.workbook.close()
        return caminho

    def _criar_aba_resumo(self):
        worksheet = self.workbook.add_worksheet('Resumo')
        worksheet.merge_range('A1:E1', self.titulo, self.formats['title'])

        headers = ['Tabela', 'Linhas', 'Mínimo', 'Máximo', 'Mascarados']
        for col, header in enumerate(headers):
            worksheet.write(2, col, header, self.formats['header'])

        for row, tabela in enumerate(self.dados, start=3):
            minimo, maximo, mascarados = self._estatisticas(tabela)
            worksheet.write(row, 0, tabela.nome, self.formats['cell'])
            worksheet.write(row, 1, len(tabela.linhas), self.formats['cell'])
            worksheet.write(row, 2, minimo, self.formats['number'])
            worksheet.write(row, 3, maximo, self.formats['number'])
            worksheet.write(row, 4, mascarados, self.formats['cell'])

        worksheet.set_column('A:A', 30)
        worksheet.set_column('B:E', 15)

    def _criar_aba_tabela(self, indice, tabela):
        # nomes de aba têm no máximo 31 caracteres
        nome = f'{indice + 1}-{tabela.nome.rsplit(".", 1)[0]}'[:31]
        worksheet = self.workbook.add_worksheet(nome)
        for col, header in enumerate(tabela.cabecalho):
            worksheet.write(0, col, header, self.formats['header'])
        for row, linha in enumerate(tabela.linhas[:LIMITE_LINHAS], start=1):
            for col, valor in enumerate(linha):
                worksheet.write(row, col, self._celula(valor))

    @staticmethod
    def _celula(valor):
        if isinstance(valor, bool):
            return 'true' if valor else 'false'
        if isinstance(valor, float) and math.isnan(valor):
            return ''
        if hasattr(valor, 'label'):
            return valor.label
        return valor

    @staticmethod
    def _estatisticas(tabela):
        """Mínimo e máximo da coluna value (ou da última numérica) e mascarados."""
        cabecalho = list(tabela.cabecalho)
        coluna = cabecalho.index('value') if 'value' in cabecalho else None
        valores = []
        if coluna is not None:
            valores = [
                linha[coluna] for linha in tabela.linhas
                if isinstance(linha[coluna], float) and math.isfinite(linha[coluna])
            ]
        mascarados = 0
        if 'masked' in cabecalho:
            indice = cabecalho.index('masked')
            mascarados = sum(1 for linha in tabela.linhas if linha[indice])
        if not valores:
            return '', '', mascarados
        return min(valores), max(valores), mascarados
