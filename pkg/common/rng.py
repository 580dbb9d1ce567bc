"""
Derivação determinística de geradores aleatórios.

Cada fluxo é identificado por (seed, experimento, índice da grade,
índice da tentativa), então o resultado de um ponto não depende da
ordem de execução nem do número de processos.
"""

import numpy as np

from common.constants import EXPERIMENTOS
from common.exceptions import ConfiguracaoInvalida


def gerador(seed, experimento, *indices):
    """
    Cria um gerador Philox para o fluxo identificado.

    Args:
        seed: Semente mestre (inteiro não negativo)
        experimento: Chave de EXPERIMENTOS
        *indices: Índices adicionais (ponto da grade, tentativa, classe...)

    Returns:
        numpy.random.Generator: Gerador independente para o fluxo

    Raises:
        ConfiguracaoInvalida: Se a semente for ausente ou negativa
    """
    if seed is None or int(seed) < 0:
        raise ConfiguracaoInvalida(
            'Uma semente inteira não negativa é obrigatória.'
        )
    try:
        id_experimento = EXPERIMENTOS[experimento]
    except KeyError as exc:
        raise ConfiguracaoInvalida(
            f'Experimento desconhecido: {experimento}'
        ) from exc

    entropia = [int(seed), id_experimento, *(int(i) for i in indices)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropia)))


def ruido_complexo(rng, shape, potencia):
    """Amostras CN(0, potencia) com o formato pedido."""
    escala = np.sqrt(potencia / 2.0)
    return escala * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
