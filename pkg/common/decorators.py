"""
Decoradores compartilhados pelos serviços de varredura.
"""

import logging
from functools import wraps

import numpy as np

from common.exceptions import PontoDegenerado

logger = logging.getLogger(__name__)


def mascarar_degenerados(func):
    """
    Converte uma avaliação pontual em par (valor, mascarado).

    Pontos que levantam PontoDegenerado ou produzem valor não finito
    viram (nan, True). Demais exceções se propagam.

    Args:
        func: Função que devolve um float para um ponto da grade

    Returns:
        callable: Função que devolve (float, bool)
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            valor = float(func(*args, **kwargs))
        except PontoDegenerado as exc:
            logger.debug('%s mascarado: %s', func.__name__, exc)
            return float('nan'), True
        if not np.isfinite(valor):
            return float('nan'), True
        return valor, False
    return wrapper
