"""
Classe base para exportadores de resultados.

Define interface comum para todos os exportadores.
"""

from abc import ABC, abstractmethod
from pathlib import Path


class BaseExporter(ABC):
    """
    Classe base abstrata para exportadores de resultados.
    """

    def __init__(self, dados):
        """
        Inicializa o exportador.

        Args:
            dados: Dados a serem exportados
        """
        self.dados = dados

    @abstractmethod
    def exportar(self, diretorio):
        """
        Grava os dados no diretório de saída.

        Returns:
            Path: Caminho do arquivo gravado
        """
        pass

    @abstractmethod
    def get_content_type(self):
        """Retorna o content-type apropriado."""
        pass

    @abstractmethod
    def get_filename(self):
        """Retorna o nome do arquivo."""
        pass

    def _caminho(self, diretorio):
        pasta = Path(diretorio)
        pasta.mkdir(parents=True, exist_ok=True)
        return pasta / self.get_filename()
