"""
Serviços de geometria: conversão posição <-> ângulos e jacobiano.

O triângulo BS-ponto-STCM é resolvido pela lei dos senos. Pontos nos
dois semiplanos (x > 0 e x < 0) são aceitos: alpha e xi têm o mesmo
sinal de x e a distância d_r sai positiva em ambos os casos.
"""

import logging

import numpy as np

from common.constants import LIMIAR_TRIANGULO, TOLERANCIA_COINCIDENCIA, TOLERANCIA_PLANO
from common.exceptions import DegeneratePoint, DegenerateTriangle, OutOfRange

from .dominio import AnglePair, como_ponto

logger = logging.getLogger(__name__)


def _verificar_ponto(q, geometry):
    if abs(q[1]) > TOLERANCIA_PLANO:
        raise OutOfRange(f'Ponto fora do plano y = 0: y = {q[1]}')
    if np.linalg.norm(q - geometry.bs_center) < TOLERANCIA_COINCIDENCIA:
        raise DegeneratePoint('Ponto coincide com a BS.')
    if np.linalg.norm(q - geometry.stcm_center) < TOLERANCIA_COINCIDENCIA:
        raise DegeneratePoint('Ponto coincide com a STCM.')


def angles_from_position(q, geometry):
    """
    Calcula (alpha, xi) de um ponto da cena.

    alpha é medido a partir da visada +z da BS e xi a partir da normal
    da STCM (voltada para a BS), ambos positivos para x > 0.

    Args:
        q: Posição (3,)
        geometry: SceneGeometry

    Returns:
        AnglePair: Ângulos em radianos

    Raises:
        DegeneratePoint: Se q coincide com a BS ou com a STCM
    """
    ponto = como_ponto(q)
    _verificar_ponto(ponto, geometry)

    dx_bs = ponto[0] - geometry.bs_center[0]
    dz_bs = ponto[2] - geometry.bs_center[2]
    dx_stcm = ponto[0] - geometry.stcm_center[0]
    dz_stcm = abs(ponto[2] - geometry.stcm_center[2])

    return AnglePair(
        alpha=float(np.arctan2(dx_bs, dz_bs)),
        xi=float(np.arctan2(dx_stcm, dz_stcm)),
    )


def reflection_distance(angles, geometry):
    """
    Distância d_r entre a BS e o ponto, pela lei dos senos.

    Raises:
        DegenerateTriangle: Se |alpha + xi| < 1e-3 ou d_r não positiva
    """
    soma = angles.alpha + angles.xi
    if abs(soma) < LIMIAR_TRIANGULO or abs(np.sin(soma)) < np.sin(LIMIAR_TRIANGULO):
        raise DegenerateTriangle(
            f'Triângulo degenerado: alpha + xi = {soma:.3e} rad'
        )
    d_r = geometry.d_s * np.sin(angles.xi) / np.sin(soma)
    if d_r <= 0.0:
        raise DegenerateTriangle(f'Distância não positiva: {d_r:.3e} m')
    return float(d_r)


def position_from_angles(angles, geometry):
    """
    Reconstrói a posição a partir de (alpha, xi).

    Args:
        angles: AnglePair
        geometry: SceneGeometry

    Returns:
        numpy.ndarray: Posição (3,) no plano y = 0

    Raises:
        DegenerateTriangle: Se o triângulo for degenerado
    """
    d_r = reflection_distance(angles, geometry)
    direcao = np.array([np.sin(angles.alpha), 0.0, np.cos(angles.alpha)])
    return geometry.bs_center + d_r * direcao


def distances(q, geometry):
    """
    Distâncias (d_S, d_r, d_r') do triângulo BS-ponto-STCM.
    """
    ponto = como_ponto(q)
    return (
        geometry.d_s,
        float(np.linalg.norm(ponto - geometry.bs_center)),
        float(np.linalg.norm(ponto - geometry.stcm_center)),
    )


def triangle_ratios(q, geometry):
    """Razões d/sen(ângulo oposto); iguais num triângulo válido."""
    angulos = angles_from_position(q, geometry)
    d_s, d_r, d_r_linha = distances(q, geometry)
    return (
        d_s / np.sin(angulos.zeta),
        d_r / np.sin(abs(angulos.xi)),
        d_r_linha / np.sin(abs(angulos.alpha)),
    )


def jacobian_angles_to_position(q, geometry):
    """
    Jacobiano T = d(alpha, xi)/d(x, z).

    Linhas: alpha, xi. Colunas: x, z. São as derivadas exatas de
    angles_from_position, então concordam com diferenças finitas.

    Args:
        q: Posição (3,)
        geometry: SceneGeometry

    Returns:
        numpy.ndarray: Matriz 2x2

    Raises:
        DegeneratePoint: Se q coincide com a BS ou com a STCM
    """
    ponto = como_ponto(q)
    _verificar_ponto(ponto, geometry)

    dx_bs = ponto[0] - geometry.bs_center[0]
    dz_bs = ponto[2] - geometry.bs_center[2]
    r2_bs = dx_bs ** 2 + dz_bs ** 2

    dx_stcm = ponto[0] - geometry.stcm_center[0]
    dz_stcm = ponto[2] - geometry.stcm_center[2]
    h = abs(dz_stcm)
    r2_stcm = dx_stcm ** 2 + h ** 2
    # dh/dz
    sinal = np.sign(dz_stcm)

    return np.array([
        [dz_bs / r2_bs, -dx_bs / r2_bs],
        [h / r2_stcm, -dx_stcm * sinal / r2_stcm],
    ])


def grid_axes(geometry, resolution):
    """
    Eixos x e z da grade regular sobre a região de interesse.

    Args:
        geometry: SceneGeometry
        resolution: Passo em metros

    Returns:
        tuple: (xs, zs)
    """
    if not resolution > 0:
        raise OutOfRange(f'Resolução da grade deve ser positiva: {resolution}')
    eixos = []
    for inferior, superior in (geometry.x_bounds, geometry.z_bounds):
        n = int(round((superior - inferior) / resolution)) + 1
        eixos.append(inferior + resolution * np.arange(n))
    logger.debug('Grade %dx%d com passo %.3g m', len(eixos[0]), len(eixos[1]), resolution)
    return eixos[0], eixos[1]
