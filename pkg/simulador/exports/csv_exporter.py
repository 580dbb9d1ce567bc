"""
Exportadores CSV das tabelas de resultado.

A formatação é fixa para que a mesma configuração e a mesma semente
gerem arquivos idênticos byte a byte.
"""

import csv
import math

from geometria.dominio import ScatterKind

from .base import BaseExporter


def formatar(valor):
    """Formata um valor de célula de forma determinística."""
    if isinstance(valor, bool):
        return 'true' if valor else 'false'
    if isinstance(valor, ScatterKind):
        return valor.label
    if isinstance(valor, int):
        return str(valor)
    if isinstance(valor, float):
        if math.isnan(valor):
            return ''
        if math.isinf(valor):
            return 'inf' if valor > 0 else '-inf'
        return f'{valor:.12e}'
    if valor is None:
        return ''
    return str(valor)


class CsvExporter(BaseExporter):
    """
    Exporta uma Tabela (nome, cabeçalho, linhas) em CSV.
    """

    def exportar(self, diretorio):
        caminho = self._caminho(diretorio)
        with open(caminho, 'w', newline='', encoding='utf-8') as arquivo:
            escritor = csv.writer(arquivo, lineterminator='\n')
            escritor.writerow(self.dados.cabecalho)
            for linha in self.dados.linhas:
                escritor.writerow([formatar(valor) for valor in linha])
        return caminho

    def get_content_type(self):
        return 'text/csv'

    def get_filename(self):
        return self.dados.nome


class MapaCsvExporter(CsvExporter):
    """Mapa sobre a grade: x, z, value, masked."""
    CABECALHO = ('x', 'z', 'value', 'masked')

    def exportar(self, diretorio):
        if tuple(self.dados.cabecalho) != self.CABECALHO:
            raise ValueError(f'Cabeçalho de mapa inesperado: {self.dados.cabecalho}')
        return super().exportar(diretorio)


class ConfusaoCsvExporter(CsvExporter):
    """Linhas de confusão por SNR e classe verdadeira."""
    CABECALHO = ('snr_db', 'true_class', 'p_h0', 'p_h1', 'p_h2', 'n_trials', 'seed')

    def exportar(self, diretorio):
        if tuple(self.dados.cabecalho) != self.CABECALHO:
            raise ValueError(f'Cabeçalho de confusão inesperado: {self.dados.cabecalho}')
        return super().exportar(diretorio)


class DeteccaoCsvExporter(CsvExporter):
    """Mapa de P_D com o tipo de alvo e o combinador em cada linha."""
    CABECALHO = ('x', 'z', 'p_d', 'masked', 'sp_type', 'combiner')

    def exportar(self, diretorio):
        if tuple(self.dados.cabecalho) != self.CABECALHO:
            raise ValueError(f'Cabeçalho de detecção inesperado: {self.dados.cabecalho}')
        return super().exportar(diretorio)
