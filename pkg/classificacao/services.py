"""
Classificação MAP de espalhadores pela magnitude do ganho estimado.

Sob H_i, |beta_hat| tem densidade de Rayleigh
p(b | H_i) = 2 b / s_i exp(-b^2 / s_i), s_i = 2 varsigma_i^2 + sigma_b^2.
O fator 2 b é comum às hipóteses e sai do posterior, o que deixa
b = 0 bem definido.
"""

import logging
import math

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from canal.dominio import PathKind
from canal.services import path_gain
from common.constants import COMPRIMENTO_ONDA_PORTADORA, EXPOENTE_PERDA, SIGMA_NU
from common.exceptions import OutOfRange, ZeroRegressor
from common.rng import gerador, ruido_complexo
from geometria.dominio import ScatterKind

from .dominio import ClassificationModel, ClassPosterior

logger = logging.getLogger(__name__)


def rayleigh_scale(sigma_i, distance, sigma_nu=SIGMA_NU, symbol_energy=1.0,
                   wavelength=COMPRIMENTO_ONDA_PORTADORA,
                   path_loss_exponent=EXPOENTE_PERDA):
    """
    Escala de Rayleigh varsigma = |G(d)| sigma_i sigma_nu sqrt(2 / pi).

    Raises:
        NonPositiveDistance: Se distance <= 0
    """
    ganho = abs(path_gain(
        PathKind.SINGLE_BOUNCE, distance, 1.0,
        symbol_energy=symbol_energy,
        wavelength=wavelength,
        path_loss_exponent=path_loss_exponent,
    ))
    return float(ganho * sigma_i * sigma_nu * np.sqrt(2.0 / np.pi))


def estimator_variance(h_norm2, noise_power):
    """sigma_b^2 = sigma_n^2 / ||H||^2."""
    if not h_norm2 > 0:
        raise ZeroRegressor('Regressor nulo.')
    return noise_power / h_norm2


def mean_snr(gain, regressor, noise_power):
    """SNR média |beta|^2 ||H||^2 / sigma^2."""
    h = np.asarray(regressor).reshape(-1)
    return float(abs(gain) ** 2 * np.real(np.vdot(h, h)) / noise_power)


def likelihood_conditional(beta_hat_mag, scale, estimator_var):
    """Densidade de Rayleigh de |beta_hat| dado varsigma."""
    b = np.asarray(beta_hat_mag, dtype=float)
    s = 2.0 * scale ** 2 + estimator_var
    return 2.0 * b / s * np.exp(-b ** 2 / s)


def _log_verossimilhancas(b, scales, estimator_var):
    """Log-verossimilhanças sem o fator comum 2 b, shape (..., 3)."""
    s = 2.0 * np.asarray(scales, dtype=float) ** 2 + estimator_var
    b2 = np.asarray(b, dtype=float)[..., None] ** 2
    return -np.log(s) - b2 / s


def _posterior_de_logs(logs, priors):
    with np.errstate(divide='ignore'):
        conjunto = logs + np.log(np.asarray(priors))
    return np.exp(conjunto - logsumexp(conjunto, axis=-1, keepdims=True))


def posterior(beta_hat_mag, hypotheses, estimator_var, scales):
    """
    Posteriores das três hipóteses e rótulo MAP.

    Empates favorecem o menor índice.

    Args:
        beta_hat_mag: |beta_hat| >= 0
        hypotheses: HypothesisSet
        estimator_var: sigma_b^2 > 0
        scales: varsigma_i de cada hipótese

    Returns:
        ClassPosterior
    """
    if beta_hat_mag < 0:
        raise OutOfRange('A magnitude do estimador não pode ser negativa.')
    if not estimator_var > 0:
        raise OutOfRange('A variância do estimador deve ser positiva.')
    probabilidades = _posterior_de_logs(
        _log_verossimilhancas(beta_hat_mag, scales, estimator_var),
        hypotheses.priors,
    )
    return ClassPosterior(
        posteriors=tuple(float(p) for p in probabilidades),
        map_label=ScatterKind(int(np.argmax(probabilidades))),
        statistic=float(beta_hat_mag),
        estimator_std=float(np.sqrt(estimator_var)),
    )


def fuse(beta_direct, beta_stcm, hypotheses, var_direct, var_stcm,
         scales_direct, scales_stcm):
    """
    Fusão de duas observações independentes: produto das verossimilhanças.

    Args:
        beta_direct: |beta_hat| do caminho direto (SB)
        beta_stcm: |beta_hat| do caminho via STCM (DB)
        hypotheses: HypothesisSet
        var_direct, var_stcm: Variâncias dos estimadores
        scales_direct, scales_stcm: varsigma_i de cada caminho

    Returns:
        ClassPosterior
    """
    logs = (
        _log_verossimilhancas(beta_direct, scales_direct, var_direct)
        + _log_verossimilhancas(beta_stcm, scales_stcm, var_stcm)
    )
    probabilidades = _posterior_de_logs(logs, hypotheses.priors)
    return ClassPosterior(
        posteriors=tuple(float(p) for p in probabilidades),
        map_label=ScatterKind(int(np.argmax(probabilidades))),
        statistic=(float(beta_direct), float(beta_stcm)),
        estimator_std=(float(np.sqrt(var_direct)), float(np.sqrt(var_stcm))),
    )


def decision_thresholds(hypotheses, scales, estimator_var):
    """
    Regiões de decisão MAP em |beta_hat|.

    O log-posterior é afim em u = b^2, então a decisão muda apenas nos
    cruzamentos entre pares de retas.

    Returns:
        list: Tuplas (b_inferior, b_superior, ScatterKind)
    """
    s = 2.0 * np.asarray(scales, dtype=float) ** 2 + estimator_var
    with np.errstate(divide='ignore'):
        intercepto = np.log(np.asarray(hypotheses.priors)) - np.log(s)
    inclinacao = -1.0 / s

    pontos = {0.0}
    for i in range(3):
        for j in range(i + 1, 3):
            if inclinacao[i] != inclinacao[j]:
                u = (intercepto[j] - intercepto[i]) / (inclinacao[i] - inclinacao[j])
                if np.isfinite(u) and u > 0:
                    pontos.add(float(u))
    limites = sorted(pontos) + [math.inf]

    def rotulo(u):
        return int(np.argmax(intercepto + inclinacao * u))

    regioes = []
    for inferior, superior in zip(limites, limites[1:]):
        meio = inferior + 1.0 if math.isinf(superior) else (inferior + superior) / 2
        atual = rotulo(meio)
        if regioes and regioes[-1][2] == atual:
            regioes[-1] = (regioes[-1][0], superior, atual)
        else:
            regioes.append((inferior, superior, atual))
    return [
        (math.sqrt(inferior), math.sqrt(superior), ScatterKind(k))
        for inferior, superior, k in regioes
    ]


def _confusao_quadratura(model):
    regioes = decision_thresholds(model.hypotheses, model.scales, model.estimator_var)
    matriz = np.zeros((3, 3))
    for j, potencia in enumerate(model.true_powers):
        media = potencia + model.estimator_var

        def densidade(b):
            return 2.0 * b / media * math.exp(-b * b / media)

        for inferior, superior, tipo in regioes:
            valor, _ = integrate.quad(densidade, inferior, superior)
            matriz[j, tipo.value] += valor
    return matriz


def map_decisions(beta_hat_mags, model):
    """
    Decisões MAP, vetorizadas, para magnitudes do ganho estimado.

    Returns:
        numpy.ndarray: Índices das hipóteses decididas
    """
    logs = _log_verossimilhancas(beta_hat_mags, model.scales, model.estimator_var)
    return np.argmax(_posterior_de_logs(logs, model.hypotheses.priors), axis=-1)


def _confusao_monte_carlo(model, n_trials, seed, stream):
    matriz = np.zeros((3, 3))
    for j, potencia in enumerate(model.true_powers):
        rng = gerador(seed, 'classify_mc', stream, j)
        beta = ruido_complexo(rng, n_trials, potencia)
        estimado = beta + ruido_complexo(rng, n_trials, model.estimator_var)
        decisoes = map_decisions(np.abs(estimado), model)
        matriz[j] = np.bincount(decisoes, minlength=3) / n_trials
    return matriz


def confusion_matrix(model, n_trials=None, seed=None, method='monte_carlo',
                     stream=0):
    """
    Matriz de confusão P[j, i] = Pr(decidir H_i | H_j verdadeira).

    As linhas são indexadas pela hipótese verdadeira e somam 1.

    Args:
        model: ClassificationModel
        n_trials: Tentativas por hipótese (Monte Carlo)
        seed: Semente mestre (Monte Carlo)
        method: 'monte_carlo' ou 'quadrature'
        stream: Índice do ponto de SNR, separa os fluxos aleatórios

    Returns:
        numpy.ndarray: Matriz 3 x 3
    """
    if method == 'quadrature':
        return _confusao_quadratura(model)
    if method != 'monte_carlo':
        raise OutOfRange(f'Método desconhecido: {method}')
    if not n_trials or n_trials < 1:
        raise OutOfRange('Monte Carlo exige n_trials >= 1.')
    return _confusao_monte_carlo(model, int(n_trials), seed, stream)


def confusion_row(true_kind, model, n_trials=None, seed=None,
                  method='monte_carlo', stream=0):
    """Linha da matriz de confusão para uma hipótese verdadeira."""
    return confusion_matrix(model, n_trials, seed, method, stream)[ScatterKind(true_kind).value]


def model_for_snr(hypotheses, snr_db, reference=ScatterKind.HUMAN_LIKE,
                  gain_std=1.0):
    """
    Modelo cuja SNR média da classe de referência vale snr_db.

    SNR = E|beta_ref|^2 / sigma_b^2.
    """
    sigma_ref = hypotheses.rcs_sqrts[ScatterKind(reference).value]
    if sigma_ref <= 0:
        raise OutOfRange('A classe de referência precisa de RCS positiva.')
    potencia = (gain_std * sigma_ref) ** 2
    variancia = potencia / 10.0 ** (snr_db / 10.0)
    return ClassificationModel(hypotheses, gain_std, variancia)
