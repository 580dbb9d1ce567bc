"""
Tipos dos limites: matriz de informação de Fisher e mapas de PEB.
"""

from dataclasses import dataclass, field

import numpy as np

from common.constants import LIMIAR_CONDICIONAMENTO
from common.exceptions import DimensionMismatch, SingularInformation


@dataclass(frozen=True, eq=False)
class FisherMatrix:
    """
    FIM real e simétrica, com rótulos dos parâmetros.

    A ordem dos parâmetros é: ângulos de todos os alvos, depois
    (Re, Im) de cada ganho.
    """
    entries: np.ndarray
    labels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        matriz = np.asarray(self.entries, dtype=float)
        matriz = (matriz + matriz.T) / 2
        matriz.setflags(write=False)
        object.__setattr__(self, 'entries', matriz)
        object.__setattr__(self, 'labels', tuple(self.labels))

    @property
    def size(self):
        return self.entries.shape[0]

    def _escala(self):
        diagonal = np.diag(self.entries)
        if np.any(diagonal <= 0) or not np.all(np.isfinite(diagonal)):
            return None
        return 1.0 / np.sqrt(diagonal)

    @property
    def condition_number(self):
        """Condicionamento após equilíbrio diagonal (invariante à escala)."""
        escala = self._escala()
        if escala is None:
            return float('inf')
        return float(np.linalg.cond(self.entries * np.outer(escala, escala)))

    def is_psd(self, tol=1e-9):
        escala = self._escala()
        matriz = self.entries if escala is None else self.entries * np.outer(escala, escala)
        autovalores = np.linalg.eigvalsh(matriz)
        return bool(autovalores.min() >= -tol * max(1.0, abs(autovalores).max()))

    def inverse(self):
        """
        Inversa da FIM (matriz de CRB).

        Raises:
            SingularInformation: Se o condicionamento exceder 1e12
        """
        condicionamento = self.condition_number
        if not condicionamento < LIMIAR_CONDICIONAMENTO:
            raise SingularInformation(
                f'FIM mal condicionada (cond = {condicionamento:.3e}).'
            )
        escala = self._escala()
        equilibrada = self.entries * np.outer(escala, escala)
        return np.linalg.inv(equilibrada) * np.outer(escala, escala)

    def crb(self, index=0):
        return float(self.inverse()[index, index])


@dataclass(frozen=True, eq=False)
class PebMap:
    """Mapa de PEB sobre a grade; mask marca pontos degenerados."""
    xs: np.ndarray
    zs: np.ndarray
    values: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        forma = (len(self.zs), len(self.xs))
        valores = np.asarray(self.values, dtype=float)
        mascara = np.asarray(self.mask, dtype=bool)
        if valores.shape != forma or mascara.shape != forma:
            raise DimensionMismatch(
                f'Mapa {valores.shape} incompatível com a grade {forma}.'
            )
        object.__setattr__(self, 'xs', np.asarray(self.xs, dtype=float))
        object.__setattr__(self, 'zs', np.asarray(self.zs, dtype=float))
        object.__setattr__(self, 'values', np.where(mascara, np.nan, valores))
        object.__setattr__(self, 'mask', mascara)

    @property
    def fraction_masked(self):
        return float(np.mean(self.mask))

    def worst(self):
        """Maior PEB fora da máscara; nan se tudo estiver mascarado."""
        if self.mask.all():
            return float('nan')
        return float(np.nanmax(self.values))


@dataclass(frozen=True, eq=False)
class RisBound:
    """Resultado da comparação com a RIS estática."""
    fim: FisherMatrix
    crb_xi: float
    crb_gain: tuple
    masked: bool
