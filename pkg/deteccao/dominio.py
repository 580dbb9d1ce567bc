"""Tipos da detecção GLRT."""

from dataclasses import dataclass
from enum import Enum

from common.constants import PFA_PADRAO
from common.exceptions import OutOfRange


class Combiner(Enum):
    """Matriz de combinação Z aplicada ao eco SB."""
    ALL_ONES = 'AllOnes'
    MATCHED_DESPREAD = 'MatchedDespread'


@dataclass(frozen=True)
class DetectorConfig:
    p_fa: float = PFA_PADRAO
    combiner: Combiner = Combiner.MATCHED_DESPREAD

    def __post_init__(self):
        if not 0.0 < self.p_fa < 1.0:
            raise OutOfRange(f'p_fa deve estar em (0, 1): {self.p_fa}')


@dataclass(frozen=True)
class DetectionStatistic:
    beta_hat: complex
    gamma_tilde: float
    noncentrality: float
