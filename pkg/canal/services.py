"""
Modelo de eco da BS monoestática assistida pela STCM.

Para cada harmônico m o eco é Y_m = c1 + c2 + c3 + c4 + N_m:

- c1: caminho BS-STCM-BS (autointerferência), presente em todo m;
- c2: ecos de reflexão simples, apenas em m = 0;
- c3 e c4: ecos de dupla reflexão via STCM, nos dois sentidos.

Vetorização em ordem de coluna (Fortran), como vec(.).
"""

import logging

import numpy as np

from common import constants
from common.constants import VELOCIDADE_LUZ
from common.exceptions import (
    DimensionMismatch,
    NonPositiveDistance,
    NotPerfectSquare,
    OutOfRange,
    TooFewSymbols,
)
from common.rng import gerador, ruido_complexo
from common.unidades import dbm_para_watts
from geometria.dominio import SceneGeometry
from geometria.services import angles_from_position, distances
from metasuperficie.dominio import HarmonicSet, PanelLayout
from metasuperficie.services import (
    default_coding_matrix,
    harmonic_pattern_derivative_vector,
    harmonic_pattern_vector,
)

from .dominio import (
    EchoBundle,
    PathGains,
    PathKind,
    PilotMatrix,
    SensingScenario,
    UlaLayout,
)

logger = logging.getLogger(__name__)


def vec(matriz):
    return np.asarray(matriz).reshape(-1, order='F')


# ---- #
# Arranjo e pilotos
# ---- #

def steering_vector(ula, angle, carrier):
    """
    Vetor de direção a(angle) da ULA.

    Args:
        ula: UlaLayout
        angle: Ângulo a partir da visada +z
        carrier: Frequência da portadora

    Returns:
        numpy.ndarray: Vetor complexo (M,)
    """
    k = (2 * np.pi * carrier / VELOCIDADE_LUZ) * np.array(
        [np.sin(angle), 0.0, np.cos(angle)]
    )
    return np.exp(1j * ula.positions @ k)


def steering_derivative(ula, angle, carrier):
    """Derivada de steering_vector em relação ao ângulo."""
    dk = (2 * np.pi * carrier / VELOCIDADE_LUZ) * np.array(
        [np.cos(angle), 0.0, -np.sin(angle)]
    )
    return 1j * (ula.positions @ dk) * steering_vector(ula, angle, carrier)


def dft_pilots(m_antennas, total_power):
    """
    Pilotos ortogonais X = c (F ⊗ F), F a DFT de ordem sqrt(M).

    Args:
        m_antennas: M, quadrado perfeito
        total_power: ||X||_F^2 em watts

    Returns:
        PilotMatrix: Matriz M x M com X X^H = (P / M) I

    Raises:
        NotPerfectSquare: Se M não for quadrado perfeito
    """
    raiz = int(round(np.sqrt(m_antennas)))
    if raiz * raiz != m_antennas or m_antennas < 1:
        raise NotPerfectSquare(f'M = {m_antennas} não é quadrado perfeito.')
    if not total_power > 0:
        raise OutOfRange('Potência dos pilotos deve ser positiva.')
    indices = np.arange(raiz)
    dft = np.exp(2j * np.pi * np.outer(indices, indices) / raiz)
    simbolos = np.kron(dft, dft) * np.sqrt(total_power) / m_antennas
    return PilotMatrix(simbolos)


def sample_covariance(pilots):
    """
    R_x = X X^H / (S - 1).

    Raises:
        TooFewSymbols: Se S < 2
    """
    simbolos = pilots.symbols if isinstance(pilots, PilotMatrix) else np.asarray(pilots)
    n_simbolos = simbolos.shape[1]
    if n_simbolos < 2:
        raise TooFewSymbols('A covariância amostral exige S >= 2.')
    return simbolos @ simbolos.conj().T / (n_simbolos - 1)


# ---- #
# Ganhos de trajeto
# ---- #

def path_gain(kind, distance, sigma_r, nu=1.0, symbol_energy=1.0,
              wavelength=constants.COMPRIMENTO_ONDA_PORTADORA,
              path_loss_exponent=constants.EXPOENTE_PERDA):
    """
    Ganho complexo beta = G(d) exp(-j 2 pi d / c) sigma nu.

    G(d) = sqrt(Es) lambda / (4 pi d^iota). A distância é o comprimento
    total do trajeto: 2 d_r no SB e d_S + d_r + d_r' no DB.

    Args:
        kind: PathKind
        distance: Comprimento do trajeto em metros
        sigma_r: Raiz da RCS
        nu: Fator de desvanecimento
        symbol_energy: Es
        wavelength: Comprimento de onda da portadora
        path_loss_exponent: iota

    Returns:
        complex: Ganho do trajeto

    Raises:
        NonPositiveDistance: Se distance <= 0
    """
    if not distance > 0:
        raise NonPositiveDistance(
            f'Trajeto {PathKind(kind).value} com distância {distance} m.'
        )
    amplitude = (
        np.sqrt(symbol_energy) * wavelength
        / (4 * np.pi * distance ** path_loss_exponent)
    )
    fase = np.exp(-2j * np.pi * distance / VELOCIDADE_LUZ)
    return complex(amplitude * fase * sigma_r * nu)


def path_gains(point, scenario, nu=1.0):
    """
    Ganhos SB e DB de um espalhador.

    Args:
        point: ScatterPoint
        scenario: SensingScenario
        nu: Fator de desvanecimento

    Returns:
        PathGains
    """
    d_s, d_r, d_r_linha = distances(point.position, scenario.geometry)
    simples = 2 * d_r
    dupla = d_s + d_r + d_r_linha
    parametros = dict(
        sigma_r=point.rcs_sqrt,
        nu=nu,
        symbol_energy=scenario.symbol_energy,
        wavelength=scenario.wavelength,
        path_loss_exponent=scenario.path_loss_exponent,
    )
    return PathGains(
        single_bounce=path_gain(PathKind.SINGLE_BOUNCE, simples, **parametros),
        double_bounce=path_gain(PathKind.DOUBLE_BOUNCE, dupla, **parametros),
        single_distance=simples,
        double_distance=dupla,
    )


def self_interference_gain(scenario):
    """Ganho do caminho BS-STCM-BS, refletividade unitária."""
    return path_gain(
        PathKind.SINGLE_BOUNCE,
        2 * scenario.geometry.d_s,
        1.0,
        symbol_energy=scenario.symbol_energy,
        wavelength=scenario.wavelength,
        path_loss_exponent=scenario.path_loss_exponent,
    )


# ---- #
# Regressores
# ---- #

def matriz_direcao(scenario, angulo_partida, angulo_chegada):
    """a(chegada) a(partida)^T para o enlace BS -> ... -> BS."""
    return np.outer(
        steering_vector(scenario.ula, angulo_chegada, scenario.carrier),
        steering_vector(scenario.ula, angulo_partida, scenario.carrier),
    )


def sb_regressor(alpha, scenario):
    """vec(a(alpha) a(alpha)^T X)."""
    return vec(matriz_direcao(scenario, alpha, alpha) @ scenario.pilots.symbols)


def sb_regressor_derivative(alpha, scenario):
    """Derivada de sb_regressor em relação a alpha."""
    a = steering_vector(scenario.ula, alpha, scenario.carrier)
    da = steering_derivative(scenario.ula, alpha, scenario.carrier)
    derivada = np.outer(da, a) + np.outer(a, da)
    return vec(derivada @ scenario.pilots.symbols)


def _blocos_db(alpha, scenario):
    """vec(a(alpha) a(0)^T X) e vec(a(0) a(alpha)^T X)."""
    x = scenario.pilots.symbols
    # c3 parte para a STCM (0) e retorna em alpha; c4 faz o inverso
    ida_stcm = vec(matriz_direcao(scenario, 0.0, alpha) @ x)
    volta_stcm = vec(matriz_direcao(scenario, alpha, 0.0) @ x)
    return ida_stcm, volta_stcm


def _padroes_db(xi, scenario):
    kwargs = dict(
        mode=scenario.wavelength_mode,
        carrier=scenario.carrier,
        coefficients=scenario.coefficients,
    )
    eta_ida = harmonic_pattern_vector(
        scenario.panel, scenario.code, scenario.harmonics, xi, 0.0, **kwargs
    )
    eta_volta = harmonic_pattern_vector(
        scenario.panel, scenario.code, scenario.harmonics, 0.0, xi, **kwargs
    )
    return eta_ida, eta_volta


def db_regressor(alpha, xi, scenario):
    """
    Regressor empilhado dos harmônicos para a dupla reflexão.

    H = eta(xi, 0) ⊗ vec(a(alpha) a(0)^T X) + eta(0, xi) ⊗ vec(a(0) a(alpha)^T X).
    """
    ida, volta = _blocos_db(alpha, scenario)
    eta_ida, eta_volta = _padroes_db(xi, scenario)
    return np.kron(eta_ida, ida) + np.kron(eta_volta, volta)


def db_regressor_derivative(alpha, xi, scenario):
    """Derivada de db_regressor em relação a xi."""
    ida, volta = _blocos_db(alpha, scenario)
    kwargs = dict(
        mode=scenario.wavelength_mode,
        carrier=scenario.carrier,
        coefficients=scenario.coefficients,
    )
    derivada = harmonic_pattern_derivative_vector(
        scenario.panel, scenario.code, scenario.harmonics, xi, 0.0, **kwargs
    )
    # simetria de troca: d eta(0, xi) / d xi = d eta(xi, 0) / d xi
    return np.kron(derivada, ida) + np.kron(derivada, volta)


# ---- #
# Síntese do eco
# ---- #

def synthesize_echo(scene, scenario, noise_seed=None, keep_components=False,
                    nu=None, stream=0):
    """
    Gera o eco Y_m para todos os harmônicos.

    Sem noise_seed nenhuma realização de ruído é somada. Os fatores de
    desvanecimento valem 1 salvo quando nu é dado explicitamente.

    Args:
        scene: Lista de ScatterPoint
        scenario: SensingScenario
        noise_seed: Semente do ruído ou None
        keep_components: Guarda c1..c4 por harmônico
        nu: Fatores de desvanecimento por espalhador
        stream: Índice do fluxo aleatório (ponto/tentativa)

    Returns:
        EchoBundle
    """
    fatores = np.ones(len(scene), dtype=complex) if nu is None else np.asarray(nu, dtype=complex)
    if fatores.shape != (len(scene),):
        raise DimensionMismatch('Um fator de desvanecimento por espalhador.')

    x = scenario.pilots.symbols
    formato = x.shape
    ganhos = [path_gains(p, scenario, n) for p, n in zip(scene, fatores)]
    ativos = [
        (angles_from_position(p.position, scenario.geometry), g)
        for p, g in zip(scene, ganhos) if p.rcs_sqrt > 0
    ]

    kwargs = dict(
        mode=scenario.wavelength_mode,
        carrier=scenario.carrier,
        coefficients=scenario.coefficients,
    )
    eta_stcm = harmonic_pattern_vector(
        scenario.panel, scenario.code, scenario.harmonics, 0.0, 0.0, **kwargs
    )
    c1_base = self_interference_gain(scenario) * (matriz_direcao(scenario, 0.0, 0.0) @ x)
    c2 = np.zeros(formato, dtype=complex)
    c3_base = []
    c4_base = []
    for angulos, ganho in ativos:
        c2 += ganho.single_bounce * (matriz_direcao(scenario, angulos.alpha, angulos.alpha) @ x)
        eta_ida, eta_volta = _padroes_db(angulos.xi, scenario)
        c3_base.append((eta_ida, ganho.double_bounce * (matriz_direcao(scenario, 0.0, angulos.alpha) @ x)))
        c4_base.append((eta_volta, ganho.double_bounce * (matriz_direcao(scenario, angulos.alpha, 0.0) @ x)))

    rng = None
    if noise_seed is not None and scenario.noise_power > 0:
        rng = gerador(noise_seed, 'eco', stream)

    por_harmonico, ruidos, componentes = {}, {}, {}
    for i, m in enumerate(scenario.harmonics):
        c1 = eta_stcm[i] * c1_base
        c3 = sum((eta[i] * bloco for eta, bloco in c3_base), np.zeros(formato, dtype=complex))
        c4 = sum((eta[i] * bloco for eta, bloco in c4_base), np.zeros(formato, dtype=complex))
        c2_m = c2 if m == 0 else np.zeros(formato, dtype=complex)
        ruido = (
            ruido_complexo(rng, formato, scenario.noise_power)
            if rng is not None else np.zeros(formato, dtype=complex)
        )
        por_harmonico[m] = c1 + c2_m + c3 + c4 + ruido
        ruidos[m] = ruido
        if keep_components:
            componentes[m] = {'c1': c1, 'c2': c2_m, 'c3': c3, 'c4': c4}

    logger.debug(
        'Eco sintetizado: %d espalhadores, %d harmônicos',
        len(scene), scenario.harmonics.cardinality,
    )
    return EchoBundle(
        per_harmonic=por_harmonico,
        noise=ruidos,
        gains=ganhos,
        noise_power=scenario.noise_power,
        components=componentes if keep_components else None,
    )


def stack_sb(scene, scenario, noise_seed=None, bundle=None):
    """
    Observação SB: vec do harmônico zero sem c1, c3 e c4.

    Args:
        scene: Lista de ScatterPoint
        scenario: SensingScenario
        noise_seed: Semente do ruído
        bundle: EchoBundle já sintetizado com componentes

    Returns:
        tuple: (y, [H_r]) com um regressor por espalhador presente
    """
    if bundle is None or bundle.components is None:
        bundle = synthesize_echo(scene, scenario, noise_seed, keep_components=True)
    y = vec(bundle.components[0]['c2'] + bundle.noise[0])
    regressores = [
        sb_regressor(angles_from_position(p.position, scenario.geometry).alpha, scenario)
        for p in scene if p.rcs_sqrt > 0
    ]
    return y, regressores


def stack_db(scene, scenario, noise_seed=None, bundle=None):
    """
    Observação DB: harmônicos empilhados, só com c3, c4 e ruído.

    Returns:
        tuple: (y, [H_r]) com vetores de comprimento |M| * M * S
    """
    if bundle is None or bundle.components is None:
        bundle = synthesize_echo(scene, scenario, noise_seed, keep_components=True)
    y = np.concatenate([
        vec(bundle.components[m]['c3'] + bundle.components[m]['c4'] + bundle.noise[m])
        for m in scenario.harmonics
    ])
    regressores = []
    for p in scene:
        if p.rcs_sqrt > 0:
            angulos = angles_from_position(p.position, scenario.geometry)
            regressores.append(db_regressor(angulos.alpha, angulos.xi, scenario))
    return y, regressores


def dump_echo(bundle, caminho):
    """Grava o eco (e componentes, se houver) num arquivo .npz."""
    arrays = {f'Y_{m}': y for m, y in bundle.per_harmonic.items()}
    arrays.update({f'N_{m}': n for m, n in bundle.noise.items()})
    for m, partes in (bundle.components or {}).items():
        arrays.update({f'{nome}_{m}': valor for nome, valor in partes.items()})
    np.savez_compressed(caminho, **arrays)
    logger.info('Eco gravado em %s', caminho)


def cenario_padrao(m_f=None, m_antennas=None, panel=None, code=None,
                   noise_dbm=None, power_dbm=None, geometry=None,
                   **kwargs):
    """
    Cenário de referência, com sobrescritas pontuais.

    Args:
        m_f: Ordem máxima dos harmônicos
        m_antennas: Antenas da BS
        panel: PanelLayout
        code: CodingMatrix; padrão é a codificação PM deslocada
        noise_dbm: Potência de ruído em dBm
        power_dbm: Potência total dos pilotos em dBm
        geometry: SceneGeometry
        **kwargs: Demais campos de SensingScenario

    Returns:
        SensingScenario
    """
    painel = panel or PanelLayout.padrao()
    antenas = m_antennas or constants.ANTENAS_BS
    return SensingScenario(
        geometry=geometry or SceneGeometry.padrao(),
        ula=UlaLayout(antenas),
        panel=painel,
        code=code or default_coding_matrix(painel),
        harmonics=HarmonicSet(constants.HARMONICOS_PADRAO if m_f is None else m_f),
        pilots=dft_pilots(antenas, float(dbm_para_watts(
            constants.POTENCIA_TOTAL_DBM if power_dbm is None else power_dbm
        ))),
        noise_power=float(dbm_para_watts(
            constants.RUIDO_DBM if noise_dbm is None else noise_dbm
        )),
        **kwargs,
    )
