"""
Tipos do modelo de canal: arranjo da BS, pilotos, ganhos de trajeto,
cenário de sensoriamento e eco recebido.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from common.constants import (
    ANTENAS_BS,
    COMPRIMENTO_ONDA_PORTADORA,
    ENERGIA_SIMBOLO,
    EXPOENTE_PERDA,
    FREQUENCIA_PORTADORA,
    SIGMA_NU,
    VELOCIDADE_LUZ,
)
from common.exceptions import OutOfRange
from geometria.dominio import SceneGeometry
from metasuperficie.dominio import (
    CodingMatrix,
    HarmonicSet,
    PanelLayout,
    WavelengthMode,
)
from metasuperficie.services import fourier_coefficients


class PathKind(Enum):
    SINGLE_BOUNCE = 'SB'
    DOUBLE_BOUNCE = 'DB'


@dataclass(frozen=True, eq=False)
class UlaLayout:
    """ULA ao longo do eixo x, centrada no centro da BS."""
    m_antennas: int = ANTENAS_BS
    spacing: float = COMPRIMENTO_ONDA_PORTADORA / 2

    def __post_init__(self):
        if self.m_antennas < 1:
            raise OutOfRange('A ULA precisa de ao menos uma antena.')
        if not self.spacing > 0:
            raise OutOfRange('Espaçamento da ULA deve ser positivo.')
        posicoes = np.zeros((self.m_antennas, 3))
        posicoes[:, 0] = (np.arange(self.m_antennas) - (self.m_antennas - 1) / 2) * self.spacing
        posicoes.setflags(write=False)
        object.__setattr__(self, 'positions', posicoes)


@dataclass(frozen=True, eq=False)
class PilotMatrix:
    """Pilotos X (M x S) com potência total ||X||_F^2."""
    symbols: np.ndarray

    def __post_init__(self):
        simbolos = np.array(self.symbols, dtype=complex)
        if simbolos.ndim != 2:
            raise OutOfRange('Pilotos devem formar uma matriz M x S.')
        simbolos.setflags(write=False)
        object.__setattr__(self, 'symbols', simbolos)

    @property
    def total_power(self):
        return float(np.linalg.norm(self.symbols) ** 2)

    @property
    def n_symbols(self):
        return self.symbols.shape[1]

    def is_orthogonal(self, atol=1e-9):
        gram = self.symbols @ self.symbols.conj().T
        diagonal = np.diag(np.diag(gram))
        return np.allclose(gram, diagonal, atol=atol * max(1.0, np.abs(gram).max()))


@dataclass(frozen=True)
class PathGains:
    """Ganhos complexos SB e DB de um ponto e os comprimentos de trajeto."""
    single_bounce: complex
    double_bounce: complex
    single_distance: float
    double_distance: float


@dataclass(frozen=True, eq=False)
class SensingScenario:
    """
    Tudo o que o modelo de eco precisa além da cena.

    noise_power e as potências dos pilotos estão em watts.
    """
    geometry: SceneGeometry
    ula: UlaLayout
    panel: PanelLayout
    code: CodingMatrix
    harmonics: HarmonicSet
    pilots: PilotMatrix
    noise_power: float
    carrier: float = FREQUENCIA_PORTADORA
    path_loss_exponent: float = EXPOENTE_PERDA
    symbol_energy: float = ENERGIA_SIMBOLO
    fading_std: float = SIGMA_NU
    wavelength_mode: WavelengthMode = WavelengthMode.EXACT
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.noise_power < 0:
            raise OutOfRange('Potência de ruído negativa.')
        if self.pilots.symbols.shape[0] != self.ula.m_antennas:
            raise OutOfRange('Pilotos incompatíveis com o número de antenas.')
        self.code.validar_painel(self.panel)

    @property
    def wavelength(self):
        return VELOCIDADE_LUZ / self.carrier

    @cached_property
    def coefficients(self):
        """Tabela de coeficientes de Fourier para o conjunto de harmônicos."""
        return fourier_coefficients(self.code, self.harmonics)

    def harmonic_index(self, m):
        return int(m) + self.harmonics.m_f


@dataclass(frozen=True, eq=False)
class EchoBundle:
    """
    Eco recebido Y_m (M x S) por harmônico.

    components guarda c1..c4 por harmônico quando pedido; noise guarda
    a realização de ruído de cada harmônico.
    """
    per_harmonic: dict
    noise: dict
    gains: list
    noise_power: float
    components: dict | None = None

    @property
    def harmonics(self):
        return sorted(self.per_harmonic)
