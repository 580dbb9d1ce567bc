"""
Detecção GLRT de um espalhador no eco SB combinado.

Com Y = beta H + N, beta_hat = H^H y / ||H||^2 e a estatística
gamma = 2 ||H||^2 |beta_hat|^2 / sigma^2 é qui-quadrado não central com
2 graus de liberdade: P_D = Q1(sqrt(mu), sqrt(gamma_th)).

Os combinadores são normalizados para não alterar a potência do ruído:
AllOnes usa o projetor (1/M) 1 1^T e MatchedDespread usa
X^H / sqrt(||X||_F^2 / M).
"""

import logging
import math

import numpy as np
from scipy import special, stats

from canal.services import matriz_direcao, vec
from classificacao.services import rayleigh_scale
from common.constants import TOLERANCIA_MARCUM
from common.decorators import mascarar_degenerados
from common.exceptions import OutOfRange, ZeroRegressor
from geometria.services import angles_from_position, distances

from .dominio import Combiner, DetectionStatistic

logger = logging.getLogger(__name__)


def combiner_matrix(combiner, scenario):
    x = scenario.pilots.symbols
    m = scenario.ula.m_antennas
    if Combiner(combiner) is Combiner.ALL_ONES:
        return np.full((m, m), 1.0 / m)
    return x.conj().T / np.sqrt(np.linalg.norm(x) ** 2 / m)


def despread_regressor(q, scenario, combiner):
    """
    Regressor combinado vec(Z A(alpha) X) do alvo em q.

    Raises:
        DegeneratePoint: Se q coincide com a BS ou a STCM
    """
    alpha = angles_from_position(q, scenario.geometry).alpha
    matriz = matriz_direcao(scenario, alpha, alpha)
    return vec(combiner_matrix(combiner, scenario) @ matriz @ scenario.pilots.symbols)


def ml_beta_estimate(y, regressor):
    """
    Estimativa de máxima verossimilhança do ganho.

    Raises:
        ZeroRegressor: Se ||H|| = 0
    """
    h = np.asarray(regressor).reshape(-1)
    energia = np.real(np.vdot(h, h))
    if energia == 0:
        raise ZeroRegressor('Regressor nulo.')
    return complex(np.vdot(h, np.asarray(y).reshape(-1)) / energia)


def detection_statistic(y, regressor, noise_power, beta=None):
    """
    Estatística GLRT e parâmetro de não centralidade.

    Args:
        y: Observação vetorizada
        regressor: H
        noise_power: sigma^2
        beta: Ganho verdadeiro, quando conhecido

    Returns:
        DetectionStatistic
    """
    h = np.asarray(regressor).reshape(-1)
    energia = np.real(np.vdot(h, h))
    estimado = ml_beta_estimate(y, h)
    return DetectionStatistic(
        beta_hat=estimado,
        gamma_tilde=float(2 * energia * abs(estimado) ** 2 / noise_power),
        noncentrality=0.0 if beta is None else float(2 * energia * abs(beta) ** 2 / noise_power),
    )


def threshold_from_pfa(p_fa):
    """
    Limiar gamma_th = -2 ln p_fa (qui-quadrado central com 2 g.l.).

    Raises:
        OutOfRange: Se p_fa fora de (0, 1)
    """
    if not 0.0 < p_fa < 1.0:
        raise OutOfRange(f'p_fa deve estar em (0, 1): {p_fa}')
    return -2.0 * math.log(p_fa)


def marcum_q1(a, b, tol=TOLERANCIA_MARCUM):
    """
    Função Q de Marcum de primeira ordem.

    Q1(a, b) = sum_k Pois(k; a^2 / 2) Gamma_sup(k + 1, b^2 / 2), com
    janela de termos alargada até a massa de Poisson descartada, que
    limita o erro, ficar abaixo de tol.

    Args:
        a: Parâmetro de não centralidade (>= 0)
        b: Limiar (>= 0)
        tol: Erro absoluto máximo

    Returns:
        float: Probabilidade em [0, 1]

    Raises:
        OutOfRange: Se a ou b forem negativos
    """
    a, b = float(a), float(b)
    if a < 0 or b < 0:
        raise OutOfRange('Q1 exige a, b >= 0.')
    if b == 0.0:
        return 1.0
    media = a * a / 2.0
    x = b * b / 2.0
    if media == 0.0:
        return math.exp(-x)

    largura = 12.0 * math.sqrt(media) + 40.0
    while True:
        k_min = max(0, math.floor(media - largura))
        k_max = math.ceil(media + largura)
        descartado = stats.poisson.sf(k_max, media)
        if k_min > 0:
            descartado += stats.poisson.cdf(k_min - 1, media)
        if descartado <= tol:
            break
        largura *= 2.0
    k = np.arange(k_min, k_max + 1)
    soma = np.dot(stats.poisson.pmf(k, media), special.gammaincc(k + 1, x))
    return float(min(1.0, max(0.0, soma)))


def pd_conditional(beta, regressor, noise_power, gamma_th):
    """P_D dado o ganho verdadeiro."""
    h = np.asarray(regressor).reshape(-1)
    mu = 2.0 * np.real(np.vdot(h, h)) * abs(beta) ** 2 / noise_power
    return marcum_q1(math.sqrt(mu), math.sqrt(gamma_th))


def pd_marginal_from_norm(scale, h_norm2, noise_power, gamma_th):
    """
    P_D com ganho de Rayleigh de escala varsigma, vetorizada.

    P_D = exp(-gamma_th sigma^2 / (4 ||H||^2 varsigma^2 + 2 sigma^2)).
    """
    h_norm2 = np.asarray(h_norm2, dtype=float)
    return np.exp(
        -gamma_th * noise_power / (4.0 * h_norm2 * scale ** 2 + 2.0 * noise_power)
    )


def pd_marginal(scale, regressor, noise_power, gamma_th):
    h = np.asarray(regressor).reshape(-1)
    return float(pd_marginal_from_norm(scale, np.real(np.vdot(h, h)), noise_power, gamma_th))


def scale_at_point(q, scenario, rcs_sqrt):
    """Escala de Rayleigh varsigma de um espalhador em q, na distância SB."""
    _, d_r, _ = distances(q, scenario.geometry)
    return rayleigh_scale(
        rcs_sqrt, 2.0 * d_r,
        sigma_nu=scenario.fading_std,
        symbol_energy=scenario.symbol_energy,
        wavelength=scenario.wavelength,
        path_loss_exponent=scenario.path_loss_exponent,
    )


@mascarar_degenerados
def pd_at_point(q, scenario, combiner, rcs_sqrt, gamma_th):
    """P_D marginal de um espalhador em q, com varsigma na distância SB."""
    regressor = despread_regressor(q, scenario, combiner)
    escala = scale_at_point(q, scenario, rcs_sqrt)
    return pd_marginal(escala, regressor, scenario.noise_power, gamma_th)


def detection_row(z, xs, scenario, combiner, rcs_sqrt, gamma_th):
    """Uma linha (z fixo) do mapa de P_D: (valores, máscara)."""
    valores = np.empty(len(xs))
    mascara = np.zeros(len(xs), dtype=bool)
    for i, x in enumerate(xs):
        valores[i], mascara[i] = pd_at_point(
            np.array([x, 0.0, z]), scenario, combiner, rcs_sqrt, gamma_th
        )
    return valores, mascara


def detection_map(config, scenario, rcs_sqrt, xs, zs):
    """
    Mapa de P_D sobre a grade para um combinador e uma RCS.

    Args:
        config: DetectorConfig
        scenario: SensingScenario
        rcs_sqrt: Raiz da RCS do espalhador
        xs, zs: Eixos da grade

    Returns:
        tuple: (valores, máscara), arrays len(zs) x len(xs)
    """
    limiar = threshold_from_pfa(config.p_fa)
    linhas = [
        detection_row(z, xs, scenario, config.combiner, rcs_sqrt, limiar)
        for z in zs
    ]
    logger.info(
        'Mapa de detecção %s calculado (%dx%d)',
        config.combiner.value, len(zs), len(xs),
    )
    return np.vstack([v for v, _ in linhas]), np.vstack([m for _, m in linhas])
