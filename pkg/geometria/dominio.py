"""
Tipos da geometria da cena.

Todas as posições são em metros no referencial global, com a cena
contida no plano y = 0. A BS olha para +z e a STCM fica em +z a partir
da BS.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from common.constants import CENTRO_BS, CENTRO_STCM, LIMITES_X, LIMITES_Z, TOLERANCIA_PLANO
from common.exceptions import ConfiguracaoInvalida, DegenerateGeometry, OutOfRange
from common.unidades import rcs_db_para_amplitude


def como_ponto(valor):
    """Converte para vetor float de 3 componentes."""
    ponto = np.asarray(valor, dtype=float).reshape(-1)
    if ponto.shape != (3,):
        raise ConfiguracaoInvalida(f'Posição deve ter 3 coordenadas: {valor}')
    return ponto


class ScatterKind(Enum):
    """Hipóteses de espalhador; o valor é o índice da hipótese."""
    ABSENT = 0
    HUMAN_LIKE = 1
    OBJECT_LIKE = 2

    @classmethod
    def from_label(cls, rotulo):
        normalizado = str(rotulo).replace('_', '').replace('-', '').lower()
        for tipo in cls:
            if tipo.name.replace('_', '').lower() == normalizado:
                return tipo
        raise ConfiguracaoInvalida(f'Tipo de espalhador desconhecido: {rotulo}')

    @property
    def label(self):
        return {0: 'Absent', 1: 'HumanLike', 2: 'ObjectLike'}[self.value]


@dataclass(frozen=True, eq=False)
class SceneGeometry:
    """
    Geometria fixa: centros da BS e da STCM e a região de interesse.
    """
    bs_center: np.ndarray
    stcm_center: np.ndarray
    x_bounds: tuple = LIMITES_X
    z_bounds: tuple = LIMITES_Z

    def __post_init__(self):
        bs = como_ponto(self.bs_center)
        stcm = como_ponto(self.stcm_center)
        object.__setattr__(self, 'bs_center', bs)
        object.__setattr__(self, 'stcm_center', stcm)
        object.__setattr__(self, 'x_bounds', tuple(map(float, self.x_bounds)))
        object.__setattr__(self, 'z_bounds', tuple(map(float, self.z_bounds)))

        if bs[1] != 0.0 or stcm[1] != 0.0:
            raise DegenerateGeometry('BS e STCM devem estar no plano y = 0.')
        if not np.isclose(bs[0], stcm[0], rtol=0.0, atol=1e-12):
            raise DegenerateGeometry(
                'A STCM deve estar no eixo de visada da BS (mesmo x).'
            )
        if stcm[2] <= bs[2]:
            raise DegenerateGeometry('A STCM deve estar em +z a partir da BS.')
        if self.x_bounds[0] >= self.x_bounds[1]:
            raise ConfiguracaoInvalida('Limites em x vazios.')
        if self.z_bounds[0] >= self.z_bounds[1]:
            raise ConfiguracaoInvalida('Limites em z vazios.')

    @property
    def d_s(self):
        """Distância BS-STCM."""
        return float(np.linalg.norm(self.stcm_center - self.bs_center))

    def contains(self, q):
        ponto = como_ponto(q)
        return (
            self.x_bounds[0] <= ponto[0] <= self.x_bounds[1]
            and self.z_bounds[0] <= ponto[2] <= self.z_bounds[1]
        )

    @classmethod
    def padrao(cls):
        return cls(np.array(CENTRO_BS), np.array(CENTRO_STCM))


@dataclass(frozen=True)
class AnglePair:
    """Ângulos (alpha, xi) em radianos, vistos da BS e da STCM."""
    alpha: float
    xi: float

    @property
    def zeta(self):
        """Ângulo do triângulo no ponto espalhador."""
        return float(np.pi - abs(self.alpha) - abs(self.xi))


@dataclass(frozen=True, eq=False)
class ScatterPoint:
    """
    Ponto espalhador: posição, raiz da RCS e hipótese.

    O tipo ABSENT exige rcs_sqrt nulo e os demais exigem rcs_sqrt > 0.
    """
    position: np.ndarray
    rcs_sqrt: float
    kind: ScatterKind

    def __post_init__(self):
        object.__setattr__(self, 'position', como_ponto(self.position))
        object.__setattr__(self, 'rcs_sqrt', float(self.rcs_sqrt))
        if abs(self.position[1]) > TOLERANCIA_PLANO:
            raise OutOfRange(f'Espalhador fora do plano y = 0: y = {self.position[1]}')
        if self.kind is ScatterKind.ABSENT:
            if self.rcs_sqrt != 0.0:
                raise ConfiguracaoInvalida('Espalhador ausente exige RCS nula.')
        elif not self.rcs_sqrt > 0.0:
            raise ConfiguracaoInvalida(
                f'{self.kind.label} exige RCS positiva.'
            )

    def verificar_regiao(self, geometry):
        """
        Raises:
            OutOfRange: Se a posição estiver fora da região de interesse
        """
        if not geometry.contains(self.position):
            raise OutOfRange(
                f'Espalhador em {self.position.tolist()} fora da região '
                f'x {geometry.x_bounds}, z {geometry.z_bounds}.'
            )
        return self

    @classmethod
    def from_db(cls, position, rcs_db, kind):
        if kind is ScatterKind.ABSENT:
            return cls(position, 0.0, kind)
        return cls(position, rcs_db_para_amplitude(rcs_db), kind)
