"""
Varreduras em grade e em SNR, executadas por linha com joblib.

Este módulo não depende do Django para que os processos de trabalho
possam importá-lo sem configurar o projeto. Cada linha é uma função
pura dos seus argumentos, e o resultado é remontado na ordem da grade.
"""

import logging

import numpy as np
from joblib import Parallel, delayed

from canal.dominio import PathKind
from canal.services import path_gains, sb_regressor, synthesize_echo, vec
from classificacao.dominio import ClassificationModel
from classificacao.services import (
    confusion_row,
    estimator_variance,
    map_decisions,
    model_for_snr,
)
from common.decorators import mascarar_degenerados
from common.rng import gerador, ruido_complexo
from deteccao.services import ml_beta_estimate
from geometria.dominio import ScatterKind, ScatterPoint, como_ponto
from geometria.services import angles_from_position
from limites.dominio import PebMap
from limites.services import crb_alpha_closed, crb_ris, crb_xi_closed, fim_multi_target, peb
from metasuperficie.dominio import RisProfile

logger = logging.getLogger(__name__)


def executar(funcao, argumentos, threads=1):
    """
    Avalia funcao(*args) para cada item, preservando a ordem.

    Args:
        funcao: Função de módulo (serializável)
        argumentos: Lista de tuplas de argumentos
        threads: Número de processos; 1 executa em sequência

    Returns:
        list: Resultados na mesma ordem de argumentos
    """
    if threads == 1:
        return [funcao(*args) for args in argumentos]
    return Parallel(n_jobs=threads)(delayed(funcao)(*args) for args in argumentos)


# ---- #
# CRB e PEB
# ---- #

@mascarar_degenerados
def crb_ponto(q, scenario, fixos, rcs_sqrt, kind):
    """CRB do ângulo (alpha no SB, xi no DB) do alvo móvel em q."""
    ponto = ScatterPoint(q, rcs_sqrt, ScatterKind.HUMAN_LIKE)
    if fixos:
        return fim_multi_target([ponto, *fixos], kind, scenario).crb(0)
    angulos = angles_from_position(q, scenario.geometry)
    ganhos = path_gains(ponto, scenario)
    if kind is PathKind.SINGLE_BOUNCE:
        return crb_alpha_closed(angulos.alpha, ganhos.single_bounce, scenario)
    return crb_xi_closed(angulos.xi, angulos.alpha, ganhos.double_bounce, scenario)


def linha_crb(z, xs, scenario, fixos, rcs_sqrt):
    """
    Linha z do mapa de CRB.

    Returns:
        dict: 'alpha' e 'xi', cada um com (valores, máscara)
    """
    resultado = {}
    for nome, kind in (('alpha', PathKind.SINGLE_BOUNCE), ('xi', PathKind.DOUBLE_BOUNCE)):
        pares = [crb_ponto(np.array([x, 0.0, z]), scenario, fixos, rcs_sqrt, kind) for x in xs]
        resultado[nome] = (
            np.array([v for v, _ in pares]),
            np.array([m for _, m in pares], dtype=bool),
        )
    return resultado


@mascarar_degenerados
def peb_ponto(q, scenario, fixos, rcs_sqrt):
    return peb(q, scenario, rcs_sqrt, fixos)


def linha_peb(z, xs, scenario, fixos, rcs_sqrt):
    pares = [peb_ponto(np.array([x, 0.0, z]), scenario, fixos, rcs_sqrt) for x in xs]
    return np.array([v for v, _ in pares]), np.array([m for _, m in pares], dtype=bool)


def mapa(funcao, xs, zs, threads, *args):
    """Executa funcao(z, xs, *args) para cada linha da grade."""
    return executar(funcao, [(z, xs, *args) for z in zs], threads)


def mapa_peb(xs, zs, threads, scenario, fixos, rcs_sqrt):
    """Mapa de PEB completo, com a máscara dos pontos degenerados."""
    linhas = mapa(linha_peb, xs, zs, threads, scenario, fixos, rcs_sqrt)
    return PebMap(
        xs, zs,
        np.vstack([v for v, _ in linhas]),
        np.vstack([m for _, m in linhas]),
    )


# ---- #
# Classificação
# ---- #

def ponto_classificacao(indice, snr_db, hipoteses, n_trials, seed, gain_std=1.0):
    """
    Linhas da matriz de confusão para NUE e objeto verdadeiros.

    A SNR é a da própria classe verdadeira.
    """
    linhas = []
    for tipo in (ScatterKind.HUMAN_LIKE, ScatterKind.OBJECT_LIKE):
        modelo = model_for_snr(hipoteses, snr_db, tipo, gain_std)
        probabilidades = confusion_row(
            tipo, modelo, n_trials=n_trials, seed=seed, stream=indice
        )
        linhas.append((snr_db, tipo, probabilidades))
    return linhas


def confusao_por_ecos(q, hipoteses, scenario, n_trials, seed, stream=0):
    """
    Matriz de confusão de ponta a ponta para um espalhador em q.

    Para cada hipótese verdadeira o eco SB do harmônico zero é
    sintetizado com nu = 1. Como o eco é linear em nu, cada tentativa
    escala esse eco por nu ~ CN(0, sigma_nu^2) e soma ruído
    CN(0, sigma^2); o ganho sai do estimador de máxima verossimilhança
    sobre o regressor SB e a decisão é a MAP.

    Args:
        q: Posição do espalhador
        hipoteses: HypothesisSet
        scenario: SensingScenario
        n_trials: Tentativas por hipótese
        seed: Semente mestre
        stream: Índice do fluxo aleatório

    Returns:
        tuple: (matriz 3 x 3, ClassificationModel com os mesmos parâmetros)
    """
    posicao = como_ponto(q)
    alpha = angles_from_position(posicao, scenario.geometry).alpha
    regressor = sb_regressor(alpha, scenario)
    energia = float(np.real(np.vdot(regressor, regressor)))
    ganho = abs(path_gains(
        ScatterPoint(posicao, 1.0, ScatterKind.HUMAN_LIKE), scenario
    ).single_bounce)
    modelo = ClassificationModel(
        hipoteses,
        gain_std=ganho * scenario.fading_std,
        estimator_var=estimator_variance(energia, scenario.noise_power),
    )

    matriz = np.zeros((3, 3))
    for tipo, sigma in zip(ScatterKind, hipoteses.rcs_sqrts):
        cena = [ScatterPoint(posicao, sigma, tipo)] if sigma > 0 else []
        eco = synthesize_echo(cena, scenario, keep_components=True)
        base = vec(eco.components[0]['c2'])
        rng = gerador(seed, 'eco', stream, tipo.value)
        nu = ruido_complexo(rng, n_trials, scenario.fading_std ** 2)
        estimados = np.array([
            ml_beta_estimate(
                fator * base + ruido_complexo(rng, base.size, scenario.noise_power),
                regressor,
            )
            for fator in nu
        ])
        decisoes = map_decisions(np.abs(estimados), modelo)
        matriz[tipo.value] = np.bincount(decisoes, minlength=3) / n_trials
    logger.debug('Confusão de ponta a ponta em %s: %s', posicao.tolist(), matriz.tolist())
    return matriz, modelo



# ---- #
# RIS
# ---- #

@mascarar_degenerados
def _crb_stcm(xi, alpha, ganho, scenario):
    return crb_xi_closed(xi, alpha, ganho, scenario)


def posicao_no_plano_medio(xi, geometry):
    """
    Ponto no plano intermediário entre BS e STCM visto sob xi pela
    superfície.

    Returns:
        tuple: (posição (3,), alpha)
    """
    meio = (geometry.bs_center[2] + geometry.stcm_center[2]) / 2
    x = geometry.stcm_center[0] + np.tan(xi) * (geometry.stcm_center[2] - meio)
    alpha = float(np.arctan2(x - geometry.bs_center[0], meio - geometry.bs_center[2]))
    return np.array([x, 0.0, meio]), alpha


def ponto_ris(xi, scenario, rcs_sqrt):
    """
    CRB de xi com STCM e com RIS especular para um alvo no plano
    intermediário entre BS e superfície.
    """
    posicao, alpha = posicao_no_plano_medio(xi, scenario.geometry)
    ganho = path_gains(
        ScatterPoint(posicao, rcs_sqrt, ScatterKind.HUMAN_LIKE), scenario
    ).double_bounce
    stcm, mascara_stcm = _crb_stcm(xi, alpha, ganho, scenario)
    ris = crb_ris(
        xi, alpha, RisProfile.especular(scenario.panel.n_elements), scenario, gain=ganho
    )
    return stcm, mascara_stcm, ris.crb_xi, ris.masked


@mascarar_degenerados
def crb_ris_ponto(q, scenario, perfil, rcs_sqrt):
    angulos = angles_from_position(q, scenario.geometry)
    ganho = path_gains(ScatterPoint(q, rcs_sqrt, ScatterKind.HUMAN_LIKE), scenario).double_bounce
    return crb_ris(angulos.xi, angulos.alpha, perfil, scenario, gain=ganho).crb_xi


def linha_ris(z, xs, scenario, perfil, rcs_sqrt):
    """Linha z do mapa de CRB(xi) com a RIS estática."""
    pares = [crb_ris_ponto(np.array([x, 0.0, z]), scenario, perfil, rcs_sqrt) for x in xs]
    return np.array([v for v, _ in pares]), np.array([m for _, m in pares], dtype=bool)
