"""
Tipos da metassuperfície: painel, matriz de codificação, conjunto de
harmônicos e perfil de RIS.

Os elementos do painel ficam no plano x-y local com centro na origem.
A linha n da matriz de codificação corresponde ao elemento (p, q) com
n = p * n_y + q, p indexando o eixo x.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from common.constants import (
    COMPRIMENTO_ONDA_PORTADORA,
    ELEMENTOS_STCM,
    TOLERANCIA_MODULO,
)
from common.exceptions import (
    AlphabetViolation,
    DimensionMismatch,
    NotUnitModulus,
    OutOfRange,
)


class CodingScheme(Enum):
    PM = 'PM'  # fase: {+1, -1}
    AM = 'AM'  # amplitude: {0, 1}

    @property
    def alfabeto(self):
        return (-1.0, 1.0) if self is CodingScheme.PM else (0.0, 1.0)


class WavelengthMode(Enum):
    """Comprimento de onda usado no padrão do harmônico m."""
    EXACT = 'exact'  # c / (f_c + m f0)
    CARRIER = 'carrier'  # c / f_c para todos


@dataclass(frozen=True, eq=False)
class PanelLayout:
    n_x: int
    n_y: int
    spacing: float = COMPRIMENTO_ONDA_PORTADORA / 2

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise OutOfRange('O painel precisa de ao menos um elemento.')
        if not self.spacing > 0:
            raise OutOfRange('Espaçamento do painel deve ser positivo.')

        p, q = np.meshgrid(np.arange(self.n_x), np.arange(self.n_y), indexing='ij')
        posicoes = np.zeros((self.n_x * self.n_y, 3))
        posicoes[:, 0] = ((p - (self.n_x - 1) / 2) * self.spacing).ravel()
        posicoes[:, 1] = ((q - (self.n_y - 1) / 2) * self.spacing).ravel()
        posicoes.setflags(write=False)
        object.__setattr__(self, 'element_positions', posicoes)

    @property
    def n_elements(self):
        return self.n_x * self.n_y

    def index(self, p, q):
        if not (0 <= p < self.n_x and 0 <= q < self.n_y):
            raise OutOfRange(f'Elemento ({p}, {q}) fora do painel.')
        return p * self.n_y + q

    @classmethod
    def padrao(cls):
        return cls(*ELEMENTOS_STCM)


@dataclass(frozen=True, eq=False)
class CodingMatrix:
    """
    Matriz N x L com o estado de cada elemento em cada slot de T0 / L.
    """
    entries: np.ndarray
    period: float
    scheme: CodingScheme = CodingScheme.PM

    def __post_init__(self):
        matriz = np.array(self.entries, dtype=float)
        if matriz.ndim != 2 or matriz.shape[1] < 1:
            raise OutOfRange('Matriz de codificação deve ser N x L com L >= 1.')
        if not self.period > 0:
            raise OutOfRange('Período de codificação deve ser positivo.')
        if not np.isin(matriz, self.scheme.alfabeto).all():
            raise AlphabetViolation(
                f'Entradas fora do alfabeto {self.scheme.alfabeto} '
                f'do esquema {self.scheme.value}.'
            )
        matriz.setflags(write=False)
        object.__setattr__(self, 'entries', matriz)

    @property
    def n_elements(self):
        return self.entries.shape[0]

    @property
    def code_length(self):
        return self.entries.shape[1]

    @property
    def f0(self):
        """Frequência fundamental de modulação, 1 / T0."""
        return 1.0 / self.period

    def validar_painel(self, layout):
        if self.n_elements != layout.n_elements:
            raise DimensionMismatch(
                f'Matriz com {self.n_elements} linhas para painel com '
                f'{layout.n_elements} elementos.'
            )


@dataclass(frozen=True, eq=False)
class HarmonicSet:
    """Harmônicos {-m_f, ..., m_f}."""
    m_f: int

    def __post_init__(self):
        if int(self.m_f) != self.m_f or self.m_f < 0:
            raise OutOfRange(f'm_f deve ser inteiro não negativo: {self.m_f}')

    @property
    def members(self):
        return np.arange(-self.m_f, self.m_f + 1)

    @property
    def cardinality(self):
        return 2 * self.m_f + 1

    def __iter__(self):
        return iter(int(m) for m in self.members)

    def __len__(self):
        return self.cardinality


@dataclass(frozen=True, eq=False)
class RisProfile:
    """Coeficientes de reflexão de módulo unitário de uma RIS estática."""
    phases: np.ndarray

    def __post_init__(self):
        fases = np.array(self.phases, dtype=complex).reshape(-1)
        if not np.allclose(np.abs(fases), 1.0, rtol=0.0, atol=TOLERANCIA_MODULO):
            raise NotUnitModulus('Coeficientes da RIS devem ter módulo 1.')
        fases.setflags(write=False)
        object.__setattr__(self, 'phases', fases)

    @classmethod
    def especular(cls, n_elements):
        return cls(np.ones(n_elements, dtype=complex))
