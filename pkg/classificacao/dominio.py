"""
Tipos da classificação MAP em três hipóteses (ausente, NUE, objeto).
"""

from dataclasses import dataclass

import numpy as np

from common.constants import PRIORIS_PADRAO, TOLERANCIA_PRIORIS
from common.exceptions import InvalidPriors, OutOfRange
from geometria.dominio import ScatterKind


@dataclass(frozen=True, eq=False)
class HypothesisSet:
    """
    Prioris e raízes de RCS das hipóteses H0, H1, H2.

    sigma_0 = 0 <= sigma_1 < sigma_2.
    """
    rcs_sqrts: tuple
    priors: tuple = PRIORIS_PADRAO

    def __post_init__(self):
        prioris = np.asarray(self.priors, dtype=float)
        sigmas = np.asarray(self.rcs_sqrts, dtype=float)
        if prioris.shape != (3,) or sigmas.shape != (3,):
            raise OutOfRange('São exatamente três hipóteses.')
        if np.any(prioris < 0) or abs(prioris.sum() - 1.0) > TOLERANCIA_PRIORIS:
            raise InvalidPriors(f'Prioris devem somar 1: {prioris.tolist()}')
        if sigmas[0] != 0.0 or not 0.0 <= sigmas[1] < sigmas[2]:
            raise OutOfRange('Exige-se sigma_0 = 0 <= sigma_1 < sigma_2.')
        object.__setattr__(self, 'priors', tuple(prioris))
        object.__setattr__(self, 'rcs_sqrts', tuple(sigmas))

    @property
    def kinds(self):
        return tuple(ScatterKind)


@dataclass(frozen=True)
class ClassPosterior:
    """Posteriores das três hipóteses e a decisão MAP."""
    posteriors: tuple
    map_label: ScatterKind
    statistic: float | tuple
    estimator_std: float | tuple


@dataclass(frozen=True, eq=False)
class ClassificationModel:
    """
    Modelo de Monte Carlo: ganhos verdadeiros e estatística do classificador.

    Sob H_j o ganho é beta = gain_std * sigma_j * nu, nu ~ CN(0, 1); o
    estimador acrescenta ruído CN(0, estimator_var). O classificador
    usa a escala de Rayleigh scale_factor * sigma_i.
    """
    hypotheses: HypothesisSet
    gain_std: float
    estimator_var: float

    @property
    def true_powers(self):
        """E|beta|^2 sob cada hipótese."""
        return tuple((self.gain_std * s) ** 2 for s in self.hypotheses.rcs_sqrts)

    @property
    def scales(self):
        """Escalas de Rayleigh varsigma_i do classificador."""
        fator = self.gain_std * np.sqrt(2.0 / np.pi)
        return tuple(fator * s for s in self.hypotheses.rcs_sqrts)
