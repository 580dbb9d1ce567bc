"""
Limites de Cramér-Rao para alpha (SB) e xi (DB), informação de Fisher
equivalente e PEB sobre a grade.

Convenções:
- F = (2 / sigma^2) Re{D^H D}, D com uma coluna por parâmetro real;
- as formas fechadas usam R_x = X X^H / (S - 1) e o fator (S - 1),
  o que reproduz exatamente a FIM genérica;
- os alvos dos limites usam nu = 1 (sem desvanecimento).
"""

import logging
from functools import lru_cache

import numpy as np

from canal.dominio import PathKind
from canal.services import (
    db_regressor,
    db_regressor_derivative,
    matriz_direcao,
    path_gains,
    sample_covariance,
    sb_regressor,
    sb_regressor_derivative,
    steering_derivative,
    steering_vector,
    vec,
)
from common.constants import (
    ALVO_FIXO_DOIS,
    LAYOUT_ANGULOS_GRAUS,
    LAYOUT_DISTANCIA,
    LIMIAR_CONDICIONAMENTO,
    LIMIAR_TRIANGULO,
)
from common.exceptions import (
    DegenerateGeometry,
    DimensionMismatch,
    SingularInformation,
    SingularNuisanceBlock,
)
from geometria.dominio import AnglePair, ScatterKind, ScatterPoint
from geometria.services import (
    angles_from_position,
    jacobian_angles_to_position,
    position_from_angles,
)
from metasuperficie.services import (
    harmonic_pattern_derivative_vector,
    harmonic_pattern_vector,
    ris_response,
    ris_response_derivative,
)

from .dominio import FisherMatrix, RisBound

logger = logging.getLogger(__name__)

# Fração mínima da informação que sobra após remover os ganhos
_LIMIAR_SCHUR = 1e-12


def fim_generic(derivatives, noise_power, labels=()):
    """
    FIM de um modelo gaussiano complexo de média parametrizada.

    Args:
        derivatives: Sequência de vetores d_i = d mu / d theta_i
        noise_power: sigma^2
        labels: Rótulos dos parâmetros

    Returns:
        FisherMatrix

    Raises:
        DimensionMismatch: Se os vetores tiverem comprimentos diferentes
    """
    colunas = [np.asarray(d, dtype=complex).reshape(-1) for d in derivatives]
    if len({c.size for c in colunas}) > 1:
        raise DimensionMismatch('Derivadas com comprimentos diferentes.')
    matriz = np.column_stack(colunas)
    entradas = (2.0 / noise_power) * np.real(matriz.conj().T @ matriz)
    return FisherMatrix(entradas, labels)


# ---- #
# Alvo único: formas fechadas
# ---- #

def _termos_sb(alpha, scenario):
    ula, carrier = scenario.ula, scenario.carrier
    a = steering_vector(ula, alpha, carrier)
    da = steering_derivative(ula, alpha, carrier)
    matriz = np.outer(a, a)
    derivada = np.outer(da, a) + np.outer(a, da)
    covariancia = sample_covariance(scenario.pilots)
    return (
        np.real(np.trace(derivada @ covariancia @ derivada.conj().T)),
        np.trace(matriz @ covariancia @ derivada.conj().T),
        np.real(np.trace(matriz @ covariancia @ matriz.conj().T)),
    )


def _montar_bloco(informacao_angulo, cruzado, informacao_ganho, gain, fator):
    """FIM 3x3 [angulo, Re(beta), Im(beta)] a partir dos traços."""
    vetor_cruzado = np.conj(gain) * cruzado * np.array([1.0, 1j])
    entradas = np.zeros((3, 3))
    entradas[0, 0] = abs(gain) ** 2 * informacao_angulo
    entradas[0, 1:] = np.real(vetor_cruzado)
    entradas[1:, 0] = np.real(vetor_cruzado)
    entradas[1:, 1:] = informacao_ganho * np.eye(2)
    return fator * entradas


def fim_sb_single(alpha, gain, scenario):
    """
    FIM SB de alvo único em forma fechada.

    Args:
        alpha: Ângulo visto da BS
        gain: Ganho SB complexo
        scenario: SensingScenario

    Returns:
        FisherMatrix: Parâmetros [alpha, Re(beta), Im(beta)]
    """
    fator = 2.0 * (scenario.pilots.n_symbols - 1) / scenario.noise_power
    t_dd, t_ad, t_aa = _termos_sb(alpha, scenario)
    return FisherMatrix(
        _montar_bloco(t_dd, t_ad, t_aa, gain, fator),
        ('alpha', 'Re(beta)', 'Im(beta)'),
    )


def crb_alpha_closed(alpha, gain, scenario):
    """
    CRB de alpha com o ganho desconhecido.

    Raises:
        SingularInformation: Se o complemento de Schur se anula
    """
    t_dd, t_ad, t_aa = _termos_sb(alpha, scenario)
    schur = t_dd - abs(t_ad) ** 2 / t_aa
    if not schur > _LIMIAR_SCHUR * t_dd or abs(gain) == 0:
        raise SingularInformation(f'alpha não identificável em {alpha:.4f} rad.')
    return float(
        scenario.noise_power
        / (2.0 * (scenario.pilots.n_symbols - 1) * abs(gain) ** 2 * schur)
    )


def _termos_db(xi, alpha, scenario):
    ula, carrier = scenario.ula, scenario.carrier
    a = steering_vector(ula, alpha, carrier)
    a0 = steering_vector(ula, 0.0, carrier)
    matriz = np.outer(a, a0)
    soma = matriz + matriz.T
    covariancia = sample_covariance(scenario.pilots)
    kwargs = dict(
        mode=scenario.wavelength_mode,
        carrier=carrier,
        coefficients=scenario.coefficients,
    )
    eta = harmonic_pattern_vector(
        scenario.panel, scenario.code, scenario.harmonics, xi, 0.0, **kwargs
    )
    deta = harmonic_pattern_derivative_vector(
        scenario.panel, scenario.code, scenario.harmonics, xi, 0.0, **kwargs
    )
    energia = np.real(np.trace(soma @ covariancia @ soma.conj().T))
    return (
        np.real(np.vdot(deta, deta)) * energia,
        np.vdot(deta, eta) * energia,
        np.real(np.vdot(eta, eta)) * energia,
    )


def fim_db_single(xi, alpha, gain, scenario):
    """
    FIM DB de alvo único em forma fechada.

    Returns:
        FisherMatrix: Parâmetros [xi, Re(beta), Im(beta)]
    """
    fator = 2.0 * (scenario.pilots.n_symbols - 1) / scenario.noise_power
    t_dd, t_ad, t_aa = _termos_db(xi, alpha, scenario)
    return FisherMatrix(
        _montar_bloco(t_dd, t_ad, t_aa, gain, fator),
        ('xi', 'Re(beta)', 'Im(beta)'),
    )


def crb_xi_closed(xi, alpha, gain, scenario):
    """
    CRB de xi com o ganho desconhecido.

    Com um único harmônico ativo o complemento de Schur é nulo.

    Raises:
        SingularInformation: Se xi não for identificável
    """
    t_dd, t_ad, t_aa = _termos_db(xi, alpha, scenario)
    if t_aa == 0 or abs(gain) == 0:
        raise SingularInformation('Ganho DB nulo.')
    schur = t_dd - abs(t_ad) ** 2 / t_aa
    if not schur > _LIMIAR_SCHUR * t_dd:
        raise SingularInformation(f'xi não identificável em {xi:.4f} rad.')
    return float(
        scenario.noise_power
        / (2.0 * (scenario.pilots.n_symbols - 1) * abs(gain) ** 2 * schur)
    )


# ---- #
# Múltiplos alvos
# ---- #

@lru_cache(maxsize=64)
def _colunas_alvo(kind, posicao, rcs_sqrt, scenario):
    """Colunas (derivada do ângulo, Re, Im) de um alvo; cacheadas para alvos fixos."""
    ponto = ScatterPoint(np.array(posicao), rcs_sqrt, ScatterKind.HUMAN_LIKE)
    angulos = angles_from_position(ponto.position, scenario.geometry)
    ganhos = path_gains(ponto, scenario)
    if kind is PathKind.SINGLE_BOUNCE:
        regressor = sb_regressor(angulos.alpha, scenario)
        derivada = ganhos.single_bounce * sb_regressor_derivative(angulos.alpha, scenario)
    else:
        regressor = db_regressor(angulos.alpha, angulos.xi, scenario)
        derivada = ganhos.double_bounce * db_regressor_derivative(
            angulos.alpha, angulos.xi, scenario
        )
    return derivada, regressor, 1j * regressor


def fim_multi_target(scene, kind, scenario):
    """
    FIM conjunta de |R| alvos.

    Args:
        scene: Lista de ScatterPoint presentes
        kind: PathKind (SB estima alpha, DB estima xi)
        scenario: SensingScenario

    Returns:
        FisherMatrix: [ângulos..., Re/Im dos ganhos...]
    """
    kind = PathKind(kind)
    angulo = 'alpha' if kind is PathKind.SINGLE_BOUNCE else 'xi'
    derivadas, ganhos, rotulos_ganho = [], [], []
    for r, ponto in enumerate(scene):
        d, re, im = _colunas_alvo(
            kind, tuple(map(float, ponto.position)), ponto.rcs_sqrt, scenario
        )
        derivadas.append(d)
        ganhos.extend([re, im])
        rotulos_ganho.extend([f'Re(beta_{r})', f'Im(beta_{r})'])
    rotulos = [f'{angulo}_{r}' for r in range(len(scene))] + rotulos_ganho
    return fim_generic(derivadas + ganhos, scenario.noise_power, rotulos)


def multi_target_crbs(fim, n_targets):
    """
    CRBs dos ângulos dos n primeiros parâmetros.

    Raises:
        SingularInformation: Se a FIM for mal condicionada
    """
    return np.diag(fim.inverse())[:n_targets].copy()


def efim(fim, angle_index):
    """
    FIM equivalente dos parâmetros de interesse (complemento de Schur).

    Args:
        fim: FisherMatrix
        angle_index: Índice ou sequência de índices de interesse

    Returns:
        float ou numpy.ndarray: EFIM escalar ou matricial

    Raises:
        SingularNuisanceBlock: Se o bloco de incômodo for mal condicionado
    """
    indices = np.atleast_1d(angle_index).astype(int)
    resto = np.setdiff1d(np.arange(fim.size), indices)
    f = fim.entries
    f_ii = f[np.ix_(indices, indices)]
    if resto.size == 0:
        resultado = f_ii
    else:
        f_in = f[np.ix_(indices, resto)]
        incomodo = FisherMatrix(f[np.ix_(resto, resto)])
        if not incomodo.condition_number < LIMIAR_CONDICIONAMENTO:
            raise SingularNuisanceBlock('Bloco de incômodo singular.')
        resultado = f_ii - f_in @ np.linalg.solve(incomodo.entries, f_in.T)
    if np.ndim(angle_index) == 0:
        return float(resultado[0, 0])
    return resultado


def reference_layout(n_targets):
    """
    Alvos fixos dos mapas com |R| > 1.

    |R| = 2: um ponto fixo em (60, 0, 40). |R| = 10: nove pontos a
    50 m da BS com alpha de -72 a 72 graus em passos de 18.

    Returns:
        list: ScatterPoint fixos (RCS de 0 dB·m²)
    """
    if n_targets == 1:
        return []
    if n_targets == 2:
        posicoes = [ALVO_FIXO_DOIS]
    elif n_targets == 10:
        angulos = np.deg2rad(LAYOUT_ANGULOS_GRAUS)
        posicoes = [
            (LAYOUT_DISTANCIA * np.sin(a), 0.0, LAYOUT_DISTANCIA * np.cos(a))
            for a in angulos
        ]
    else:
        raise DimensionMismatch(f'Layout de referência para {n_targets} alvos.')
    return [ScatterPoint(np.array(p), 1.0, ScatterKind.HUMAN_LIKE) for p in posicoes]


# ---- #
# PEB
# ---- #

def _efim_angulo(point, kind, scenario, others):
    if others:
        fim = fim_multi_target([point, *others], kind, scenario)
        return efim(fim, 0)
    angulos = angles_from_position(point.position, scenario.geometry)
    ganhos = path_gains(point, scenario)
    if kind is PathKind.SINGLE_BOUNCE:
        fim = fim_sb_single(angulos.alpha, ganhos.single_bounce, scenario)
    else:
        fim = fim_db_single(angulos.xi, angulos.alpha, ganhos.double_bounce, scenario)
    return efim(fim, 0)


def peb_from_fims(efim_alpha, efim_xi, transform):
    """
    PEB = sqrt(tr((T^T diag(J_alpha, J_xi) T)^-1)).

    Raises:
        DegenerateGeometry: Se a FIM da posição for singular
    """
    informacao = FisherMatrix(transform.T @ np.diag([efim_alpha, efim_xi]) @ transform)
    if not informacao.condition_number < LIMIAR_CONDICIONAMENTO:
        raise DegenerateGeometry('FIM da posição singular.')
    return float(np.sqrt(np.trace(informacao.inverse())))


def peb(q, scenario, rcs_sqrt=1.0, others=()):
    """
    PEB de um alvo em q, combinando alpha (SB) e xi (DB).

    Args:
        q: Posição (3,)
        scenario: SensingScenario
        rcs_sqrt: Raiz da RCS do alvo
        others: Outros espalhadores presentes (entram como incômodo)

    Returns:
        float: PEB em metros

    Raises:
        DegeneratePoint: Se q coincide com a BS ou a STCM
        DegenerateGeometry: Se o triângulo ou a FIM da posição degeneram
    """
    ponto = ScatterPoint(np.asarray(q, dtype=float), rcs_sqrt, ScatterKind.HUMAN_LIKE)
    angulos = angles_from_position(ponto.position, scenario.geometry)
    if abs(angulos.alpha + angulos.xi) < LIMIAR_TRIANGULO:
        raise DegenerateGeometry('Ponto sobre o eixo BS-STCM.')
    try:
        j_alpha = _efim_angulo(ponto, PathKind.SINGLE_BOUNCE, scenario, list(others))
        j_xi = _efim_angulo(ponto, PathKind.DOUBLE_BOUNCE, scenario, list(others))
    except (SingularInformation, SingularNuisanceBlock) as exc:
        raise DegenerateGeometry(str(exc)) from exc
    transform = jacobian_angles_to_position(ponto.position, scenario.geometry)
    return peb_from_fims(j_alpha, j_xi, transform)


# ---- #
# RIS estática
# ---- #

def crb_ris(xi, alpha, profile, scenario, gain=None):
    """
    Limite de xi com uma RIS estática no lugar da STCM.

    Sem modulação temporal só o harmônico zero carrega o eco DB, e a
    derivada em xi é combinação linear das colunas dos ganhos: a FIM
    fica singular e o CRB de xi é infinito, mascarado.

    Args:
        xi: Ângulo visto da superfície
        alpha: Ângulo visto da BS
        profile: RisProfile
        scenario: SensingScenario (usa painel, ULA e pilotos)
        gain: Ganho DB; padrão é o de um alvo de 0 dB·m² na posição

    Returns:
        RisBound
    """
    x = scenario.pilots.symbols
    ida = vec(matriz_direcao(scenario, 0.0, alpha) @ x)
    volta = vec(matriz_direcao(scenario, alpha, 0.0) @ x)
    painel, carrier = scenario.panel, scenario.carrier
    g_ida = ris_response(profile, painel, xi, 0.0, carrier)
    g_volta = ris_response(profile, painel, 0.0, xi, carrier)
    dg_ida = ris_response_derivative(profile, painel, xi, 0.0, carrier)
    # simetria de troca de uma RIS diagonal
    dg_volta = dg_ida

    if gain is None:
        posicao = position_from_angles(AnglePair(alpha, xi), scenario.geometry)
        ponto = ScatterPoint(posicao, 1.0, ScatterKind.HUMAN_LIKE)
        gain = path_gains(ponto, scenario).double_bounce

    regressor = g_ida * ida + g_volta * volta
    derivada = gain * (dg_ida * ida + dg_volta * volta)
    fim = fim_generic(
        [derivada, regressor, 1j * regressor],
        scenario.noise_power,
        ('xi', 'Re(beta)', 'Im(beta)'),
    )
    try:
        crb = fim.crb(0)
        mascarado = False
    except SingularInformation:
        crb = float('inf')
        mascarado = True
    try:
        crb_ganho = tuple(np.diag(FisherMatrix(fim.entries[1:, 1:]).inverse()))
    except SingularInformation:
        crb_ganho = (float('inf'), float('inf'))
    logger.debug('CRB RIS em xi=%.3f: %s', xi, crb)
    return RisBound(fim=fim, crb_xi=crb, crb_gain=crb_ganho, masked=mascarado)
