"""
Suíte de invariantes executada pelo comando validate.

Cada verificação devolve uma Verificacao; o comando falha se alguma
não for aprovada. As amostras aleatórias vêm de fluxos derivados da
semente da configuração.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from canal.dominio import PathKind
from canal.services import (
    db_regressor,
    db_regressor_derivative,
    matriz_direcao,
    path_gains,
    sb_regressor,
    sb_regressor_derivative,
    steering_derivative,
    steering_vector,
)
from classificacao.dominio import HypothesisSet
from classificacao.services import confusion_matrix, model_for_snr
from common.exceptions import PontoDegenerado
from common.rng import gerador, ruido_complexo
from common.unidades import rcs_db_para_amplitude
from deteccao.dominio import Combiner
from deteccao.services import (
    combiner_matrix,
    despread_regressor,
    pd_marginal,
    pd_marginal_from_norm,
    scale_at_point,
    threshold_from_pfa,
)
from geometria.dominio import ScatterKind, ScatterPoint
from geometria.services import (
    angles_from_position,
    jacobian_angles_to_position,
    position_from_angles,
)
from limites.services import (
    crb_alpha_closed,
    crb_ris,
    crb_xi_closed,
    fim_generic,
    fim_multi_target,
)
from metasuperficie.dominio import HarmonicSet, RisProfile, WavelengthMode
from metasuperficie.services import (
    fourier_coefficients,
    harmonic_pattern_derivative_vector,
    harmonic_pattern_vector,
)

from .varredura import confusao_por_ecos, posicao_no_plano_medio

logger = logging.getLogger(__name__)

N_CENAS = 100
N_ANGULOS = 200
N_JACOBIANO = 500
N_GEOMETRIA = 10_000
N_PONTOS_DETECCAO = 20
N_TENTATIVAS_DETECCAO = 100_000
N_TENTATIVAS_CLASSIFICACAO = 10_000
PASSO_DIFERENCA = 1e-6
ORDEM_PARSEVAL = 64
GANHO_MAXIMO_QUINTO_HARMONICO_DB = 1.5


@dataclass(frozen=True)
class Verificacao:
    nome: str
    aprovado: bool
    detalhe: str


def _pontos_aleatorios(config, indice, n):
    """Pontos sorteados na região de interesse, afastados das bordas."""
    geometria = config.scenario.geometry
    rng = gerador(config.seed, 'validate', indice)
    (x0, x1), (z0, z1) = geometria.x_bounds, geometria.z_bounds
    xs = rng.uniform(x0 + 1.0, x1 - 1.0, n)
    zs = rng.uniform(z0 + 1.0, z1 - 1.0, n)
    return [np.array([x, 0.0, z]) for x, z in zip(xs, zs)]


def _cenas_aleatorias(config, indice, n):
    """Cenários com m_f e ruído sorteados, cada um com um ponto."""
    rng = gerador(config.seed, 'validate', indice)
    pontos = _pontos_aleatorios(config, indice + 100, n)
    for q in pontos:
        m_f = int(rng.integers(2, 6))
        escala = 10.0 ** rng.uniform(-1.0, 1.0)
        yield replace(
            config.scenario,
            harmonics=HarmonicSet(m_f),
            noise_power=config.scenario.noise_power * escala,
        ), q


def verificar_formas_fechadas(config):
    pior = 0.0
    avaliados = 0
    for scenario, q in _cenas_aleatorias(config, 1, N_CENAS):
        try:
            angulos = angles_from_position(q, scenario.geometry)
            ganhos = path_gains(ScatterPoint(q, 1.0, ScatterKind.HUMAN_LIKE), scenario)
            alpha, xi = angulos.alpha, angulos.xi
            h_sb = sb_regressor(alpha, scenario)
            sb = fim_generic(
                [ganhos.single_bounce * sb_regressor_derivative(alpha, scenario), h_sb, 1j * h_sb],
                scenario.noise_power,
            ).crb(0)
            h_db = db_regressor(alpha, xi, scenario)
            db = fim_generic(
                [ganhos.double_bounce * db_regressor_derivative(alpha, xi, scenario),
                 h_db, 1j * h_db],
                scenario.noise_power,
            ).crb(0)
            fechado_sb = crb_alpha_closed(alpha, ganhos.single_bounce, scenario)
            fechado_db = crb_xi_closed(xi, alpha, ganhos.double_bounce, scenario)
        except PontoDegenerado:
            continue
        avaliados += 1
        pior = max(pior, abs(fechado_sb / sb - 1), abs(fechado_db / db - 1))
    return Verificacao(
        'formas_fechadas',
        avaliados > 0 and pior < 1e-6,
        f'{avaliados} cenas, maior erro relativo {pior:.3e}',
    )


def _erro_relativo(numerico, analitico):
    return float(np.linalg.norm(numerico - analitico) / np.linalg.norm(analitico))


def verificar_derivadas(config):
    scenario = config.scenario
    ula, carrier = scenario.ula, scenario.carrier
    rng = gerador(config.seed, 'validate', 2)
    h = PASSO_DIFERENCA
    pior = 0.0
    for angulo in rng.uniform(-1.4, 1.4, N_ANGULOS):
        numerica = (
            steering_vector(ula, angulo + h, carrier) - steering_vector(ula, angulo - h, carrier)
        ) / (2 * h)
        pior = max(pior, _erro_relativo(numerica, steering_derivative(ula, angulo, carrier)))

    kwargs = dict(
        mode=scenario.wavelength_mode,
        carrier=carrier,
        coefficients=scenario.coefficients,
    )
    painel, codigo, harmonicos = scenario.panel, scenario.code, scenario.harmonics
    for xi in rng.uniform(-1.4, 1.4, N_ANGULOS):
        numerica = (
            harmonic_pattern_vector(painel, codigo, harmonicos, xi + h, 0.0, **kwargs)
            - harmonic_pattern_vector(painel, codigo, harmonicos, xi - h, 0.0, **kwargs)
        ) / (2 * h)
        analitica = harmonic_pattern_derivative_vector(
            painel, codigo, harmonicos, xi, 0.0, **kwargs
        )
        pior = max(pior, _erro_relativo(numerica, analitica))

    passo = 1e-4
    for q in _pontos_aleatorios(config, 3, N_JACOBIANO):
        try:
            analitico = jacobian_angles_to_position(q, scenario.geometry)
            colunas = []
            for eixo in (0, 2):
                delta = np.zeros(3)
                delta[eixo] = passo
                mais = angles_from_position(q + delta, scenario.geometry)
                menos = angles_from_position(q - delta, scenario.geometry)
                colunas.append([
                    (mais.alpha - menos.alpha) / (2 * passo),
                    (mais.xi - menos.xi) / (2 * passo),
                ])
        except PontoDegenerado:
            continue
        numerico = np.array(colunas).T
        pior = max(pior, _erro_relativo(numerico, analitico))
    return Verificacao('derivadas', pior < 1e-6, f'maior erro relativo {pior:.3e}')


def verificar_parseval(config):
    code = config.scenario.code
    coeficientes = fourier_coefficients(code, HarmonicSet(ORDEM_PARSEVAL))
    energia = np.sum(np.abs(coeficientes) ** 2, axis=1)
    potencia = np.mean(np.abs(code.entries) ** 2, axis=1)
    dentro = np.all((energia >= 0.99 * potencia) & (energia <= potencia + 1e-12))

    balanceados = np.abs(code.entries.sum(axis=1)) < 1e-12
    componente_zero = np.abs(coeficientes[:, ORDEM_PARSEVAL])
    nula = np.all(componente_zero[balanceados] < 1e-12)
    return Verificacao(
        'parseval',
        bool(dentro and nula),
        f'energia mínima relativa {np.min(energia / potencia):.6f}',
    )


def verificar_geometria(config):
    geometria = config.scenario.geometry
    pior = 0.0
    avaliados = 0
    for q in _pontos_aleatorios(config, 4, N_GEOMETRIA):
        try:
            volta = position_from_angles(angles_from_position(q, geometria), geometria)
        except PontoDegenerado:
            continue
        avaliados += 1
        pior = max(pior, float(np.linalg.norm(volta - q)))
    return Verificacao(
        'geometria_ida_e_volta', pior < 1e-9, f'{avaliados} pontos, maior erro {pior:.3e} m'
    )


def verificar_limite_deteccao(config):
    limiar = threshold_from_pfa(config.p_fa)
    pd = float(pd_marginal_from_norm(0.0, 1.0, config.scenario.noise_power, limiar))
    erro = abs(pd - config.p_fa) / config.p_fa
    return Verificacao('deteccao_sem_alvo', erro < 1e-12, f'P_D = {pd:.6e}')


def verificar_degenerescencia(config):
    """Dois alvos com o mesmo alpha não podem ser invertidos."""
    scenario = config.scenario
    alpha = np.deg2rad(30.0)
    alvos = [
        ScatterPoint(np.array([r * np.sin(alpha), 0.0, r * np.cos(alpha)]), 1.0,
                     ScatterKind.HUMAN_LIKE)
        for r in (30.0, 60.0)
    ]
    fim = fim_multi_target(alvos, PathKind.SINGLE_BOUNCE, scenario)
    condicao = fim.condition_number
    try:
        fim.crb(0)
        invertida = True
    except PontoDegenerado:
        invertida = False
    return Verificacao(
        'degenerescencia_mesmo_alpha',
        condicao > 1e10 and not invertida,
        f'número de condição {condicao:.3e}',
    )


def verificar_ris(config):
    scenario = config.scenario
    perfil = RisProfile.especular(scenario.panel.n_elements)
    resultado = crb_ris(np.deg2rad(20.0), np.deg2rad(25.0), perfil, scenario)
    aprovado = resultado.masked or resultado.crb_xi >= 1e10
    finito = all(np.isfinite(resultado.crb_gain))
    return Verificacao(
        'ris_estatica',
        bool(aprovado and finito),
        f'CRB(xi) = {resultado.crb_xi:.3e}, mascarado = {resultado.masked}',
    )


def verificar_determinismo(config):
    hipoteses = HypothesisSet(
        (0.0, rcs_db_para_amplitude(config.rcs_nue_db), rcs_db_para_amplitude(config.rcs_obj_db)),
        config.priors,
    )
    modelo = model_for_snr(hipoteses, 10.0)
    primeira = confusion_matrix(modelo, n_trials=500, seed=config.seed)
    segunda = confusion_matrix(modelo, n_trials=500, seed=config.seed)
    return Verificacao(
        'determinismo',
        bool(np.array_equal(primeira, segunda)),
        'matrizes de confusão repetidas com a mesma semente',
    )


def verificar_harmonicos(config):
    """
    CRB(xi) não cresce com m_f = 3, 4, 5 no plano intermediário e o
    quinto harmônico rende no máximo 1,5 dB sobre o quarto.
    """
    cenarios = {
        m_f: replace(
            config.scenario,
            harmonics=HarmonicSet(m_f),
            wavelength_mode=WavelengthMode.EXACT,
        )
        for m_f in (3, 4, 5)
    }
    geometria = config.scenario.geometry
    maior_ganho = -np.inf
    monotona = True
    avaliados = 0
    for graus in range(1, 81):
        xi = np.deg2rad(graus)
        posicao, alpha = posicao_no_plano_medio(xi, geometria)
        ponto = ScatterPoint(posicao, 1.0, ScatterKind.HUMAN_LIKE)
        try:
            crbs = [
                crb_xi_closed(xi, alpha, path_gains(ponto, cen).double_bounce, cen)
                for cen in cenarios.values()
            ]
        except PontoDegenerado:
            continue
        avaliados += 1
        monotona &= crbs[1] <= crbs[0] * (1 + 1e-9) and crbs[2] <= crbs[1] * (1 + 1e-9)
        maior_ganho = max(maior_ganho, 10 * np.log10(crbs[1] / crbs[2]))
    return Verificacao(
        'harmonicos_plano_medio',
        bool(avaliados > 0 and monotona and maior_ganho <= GANHO_MAXIMO_QUINTO_HARMONICO_DB),
        f'{avaliados} ângulos, maior ganho 4->5 {maior_ganho:.3f} dB',
    )


def _pd_empirica(rng, q, scenario, combiner, escala, limiar):
    """
    P_D por Monte Carlo com beta ~ CN(0, 2 varsigma^2).

    O ruído combinado só entra na estatística pela projeção
    tr((Z^H H)^H N), sorteada com a variância exata
    sigma^2 ||Z^H H||_F^2.
    """
    alpha = angles_from_position(q, scenario.geometry).alpha
    z = combiner_matrix(combiner, scenario)
    h = z @ matriz_direcao(scenario, alpha, alpha) @ scenario.pilots.symbols
    energia = float(np.linalg.norm(h) ** 2)
    projecao = float(np.linalg.norm(z.conj().T @ h) ** 2)
    beta = ruido_complexo(rng, N_TENTATIVAS_DETECCAO, 2.0 * escala ** 2)
    ruido = ruido_complexo(rng, N_TENTATIVAS_DETECCAO, scenario.noise_power * projecao)
    beta_hat = beta + ruido / energia
    gamma = 2.0 * energia * np.abs(beta_hat) ** 2 / scenario.noise_power
    return float(np.mean(gamma > limiar))


def verificar_deteccao_mc(config):
    scenario = config.scenario
    limiar = threshold_from_pfa(config.p_fa)
    rcs = (rcs_db_para_amplitude(config.rcs_nue_db), rcs_db_para_amplitude(config.rcs_obj_db))
    pior = 0.0
    avaliados = 0
    for i, q in enumerate(_pontos_aleatorios(config, 6, N_PONTOS_DETECCAO)):
        for c, combiner in enumerate(Combiner):
            for r, sigma in enumerate(rcs):
                try:
                    escala = scale_at_point(q, scenario, sigma)
                    teorica = pd_marginal(
                        escala, despread_regressor(q, scenario, combiner),
                        scenario.noise_power, limiar,
                    )
                except PontoDegenerado:
                    continue
                rng = gerador(config.seed, 'validate', 7, i, c, r)
                empirica = _pd_empirica(rng, q, scenario, combiner, escala, limiar)
                avaliados += 1
                pior = max(pior, abs(empirica - teorica))
    return Verificacao(
        'deteccao_monte_carlo',
        avaliados > 0 and pior <= 0.01,
        f'{avaliados} casos, maior desvio {pior:.4f}',
    )


def verificar_classificacao_ecos(config):
    hipoteses = HypothesisSet(
        (0.0, rcs_db_para_amplitude(config.rcs_nue_db), rcs_db_para_amplitude(config.rcs_obj_db)),
        config.priors,
    )
    q = _pontos_aleatorios(config, 8, 1)[0]
    matriz, modelo = confusao_por_ecos(
        q, hipoteses, config.scenario, N_TENTATIVAS_CLASSIFICACAO, config.seed
    )
    desvio = float(np.max(np.abs(matriz - confusion_matrix(modelo, method='quadrature'))))
    return Verificacao(
        'classificacao_por_ecos', desvio <= 0.02, f'maior desvio {desvio:.4f}'
    )


VERIFICACOES = (
    verificar_formas_fechadas,
    verificar_derivadas,
    verificar_parseval,
    verificar_geometria,
    verificar_limite_deteccao,
    verificar_degenerescencia,
    verificar_ris,
    verificar_determinismo,
    verificar_harmonicos,
    verificar_deteccao_mc,
    verificar_classificacao_ecos,
)


def executar_suite(config):
    """
    Executa todas as verificações.

    Returns:
        list: Verificacao na ordem de VERIFICACOES
    """
    resultados = []
    for verificacao in VERIFICACOES:
        resultado = verificacao(config)
        nivel = logging.INFO if resultado.aprovado else logging.WARNING
        logger.log(nivel, '%s: %s (%s)', resultado.nome,
                   'ok' if resultado.aprovado else 'FALHOU', resultado.detalhe)
        resultados.append(resultado)
    return resultados
