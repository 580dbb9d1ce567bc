"""
Serviços da metassuperfície: coeficientes de Fourier da codificação,
padrões por harmônico e resposta de uma RIS de referência.

O vetor de onda no plano de incidência é k(phi) = (2 pi / lambda)
(sen phi, 0, cos phi). Com os elementos em z = 0 local só a coordenada
x contribui, mas o produto escalar completo é mantido.
"""

import logging
import math

import numpy as np

from common.constants import (
    COMPRIMENTO_CODIGO,
    FREQUENCIA_PORTADORA,
    PERIODO_CODIFICACAO,
    VELOCIDADE_LUZ,
)
from common.exceptions import DimensionMismatch, OutOfRange

from .dominio import CodingMatrix, CodingScheme, PanelLayout, WavelengthMode

logger = logging.getLogger(__name__)


def _vetor_onda(phi, comprimento_onda):
    return (2 * np.pi / comprimento_onda) * np.array(
        [np.sin(phi), 0.0, np.cos(phi)]
    )


def _derivada_vetor_onda(phi, comprimento_onda):
    return (2 * np.pi / comprimento_onda) * np.array(
        [np.cos(phi), 0.0, -np.sin(phi)]
    )


def harmonic_wavelength(m, f0, mode=WavelengthMode.EXACT,
                        carrier=FREQUENCIA_PORTADORA):
    """
    Comprimento de onda do harmônico m.

    Args:
        m: Ordem do harmônico
        f0: Frequência de modulação 1 / T0
        mode: WavelengthMode
        carrier: Frequência da portadora em Hz

    Returns:
        float: Comprimento de onda em metros
    """
    if WavelengthMode(mode) is WavelengthMode.CARRIER:
        return VELOCIDADE_LUZ / carrier
    return VELOCIDADE_LUZ / (carrier + m * f0)


def fourier_coefficients(code, harmonics):
    """
    Tabela de coeficientes a_n^m para todos os elementos e harmônicos.

    a^m = sum_l (Gamma_l / L) sinc(pi m / L) exp(-j pi m (2l - 1) / L),
    com sinc(x) = sen(x) / x e sinc(0) = 1.

    Args:
        code: CodingMatrix
        harmonics: Iterável de ordens m

    Returns:
        numpy.ndarray: Matriz complexa N x len(harmonics)
    """
    ordens = np.asarray(list(harmonics), dtype=float)
    comprimento = code.code_length
    slots = np.arange(1, comprimento + 1)
    fases = np.exp(-1j * np.pi * np.outer(2 * slots - 1, ordens) / comprimento)
    # np.sinc é normalizado: sinc(x) = sen(pi x) / (pi x)
    envelope = np.sinc(ordens / comprimento)
    return (code.entries / comprimento) @ fases * envelope


def fourier_coefficient(code, element, m, layout=None):
    """
    Coeficiente a^m do elemento (p, q) do painel.

    Args:
        code: CodingMatrix
        element: Coordenadas (p, q) do elemento
        m: Ordem do harmônico
        layout: PanelLayout; sem ele o painel é quadrado com N elementos

    Returns:
        complex: Coeficiente de Fourier

    Raises:
        OutOfRange: Se o elemento não existir no painel
        DimensionMismatch: Se o painel não corresponder à codificação
    """
    if layout is None:
        lado = math.isqrt(code.n_elements)
        if lado * lado != code.n_elements:
            raise DimensionMismatch(
                f'Informe o painel: {code.n_elements} linhas não formam um quadrado.'
            )
        layout = PanelLayout(lado, lado)
    elif layout.n_elements != code.n_elements:
        raise DimensionMismatch('Painel e codificação com números de elementos diferentes.')
    p, q = element
    linha = layout.index(p, q)
    unica = CodingMatrix(code.entries[linha:linha + 1], code.period, code.scheme)
    return complex(fourier_coefficients(unica, [m])[0, 0])


def harmonic_pattern_vector(layout, code, harmonics, phi_d, phi_a,
                            mode=WavelengthMode.EXACT,
                            carrier=FREQUENCIA_PORTADORA,
                            coefficients=None):
    """
    Padrões eta_m(phi_D, phi_A) para todos os harmônicos do conjunto.

    O padrão do elemento é considerado isotrópico (E = 1).

    Args:
        layout: PanelLayout
        code: CodingMatrix
        harmonics: Iterável de ordens m
        phi_d: Ângulo de partida
        phi_a: Ângulo de chegada
        mode: WavelengthMode
        carrier: Frequência da portadora
        coefficients: Tabela pré-calculada de fourier_coefficients

    Returns:
        numpy.ndarray: Vetor complexo com um padrão por harmônico
    """
    code.validar_painel(layout)
    ordens = list(harmonics)
    if coefficients is None:
        coefficients = fourier_coefficients(code, ordens)
    padroes = np.empty(len(ordens), dtype=complex)
    for i, m in enumerate(ordens):
        comprimento_onda = harmonic_wavelength(m, code.f0, mode, carrier)
        k = _vetor_onda(phi_d, comprimento_onda) + _vetor_onda(phi_a, comprimento_onda)
        padroes[i] = coefficients[:, i] @ np.exp(1j * layout.element_positions @ k)
    return padroes


def harmonic_pattern(layout, code, m, phi_d, phi_a,
                     mode=WavelengthMode.EXACT, carrier=FREQUENCIA_PORTADORA):
    """Padrão eta_m(phi_D, phi_A) de um único harmônico."""
    return complex(harmonic_pattern_vector(
        layout, code, [m], phi_d, phi_a, mode, carrier
    )[0])


def harmonic_pattern_derivative_vector(layout, code, harmonics, phi, other=0.0,
                                       mode=WavelengthMode.EXACT,
                                       carrier=FREQUENCIA_PORTADORA,
                                       coefficients=None):
    """
    Derivada de eta_m(phi, other) em relação ao primeiro ângulo.

    Pela simetria de troca, também é a derivada de eta_m(other, phi)
    em relação ao segundo ângulo.
    """
    code.validar_painel(layout)
    ordens = list(harmonics)
    if coefficients is None:
        coefficients = fourier_coefficients(code, ordens)
    derivadas = np.empty(len(ordens), dtype=complex)
    for i, m in enumerate(ordens):
        comprimento_onda = harmonic_wavelength(m, code.f0, mode, carrier)
        k = _vetor_onda(phi, comprimento_onda) + _vetor_onda(other, comprimento_onda)
        dk = _derivada_vetor_onda(phi, comprimento_onda)
        posicoes = layout.element_positions
        derivadas[i] = coefficients[:, i] @ (
            1j * (posicoes @ dk) * np.exp(1j * posicoes @ k)
        )
    return derivadas


def harmonic_pattern_derivative(layout, code, m, xi, other=0.0,
                                mode=WavelengthMode.EXACT,
                                carrier=FREQUENCIA_PORTADORA):
    return complex(harmonic_pattern_derivative_vector(
        layout, code, [m], xi, other, mode, carrier
    )[0])


def default_coding_matrix(layout, code_length=COMPRIMENTO_CODIGO,
                          period=PERIODO_CODIFICACAO):
    """
    Codificação PM padrão: a coluna p do painel usa a sequência base
    [+1 x L/2, -1 x L/2] deslocada ciclicamente de p slots.

    Args:
        layout: PanelLayout
        code_length: L, par e >= 2
        period: T0 em segundos

    Returns:
        CodingMatrix: Matriz N x L no alfabeto {+1, -1}

    Raises:
        OutOfRange: Se L for menor que 2 ou ímpar
    """
    if code_length < 2 or code_length % 2:
        raise OutOfRange(f'Comprimento do código deve ser par e >= 2: {code_length}')
    metade = code_length // 2
    base = np.r_[np.ones(metade), -np.ones(metade)]
    linhas = [
        np.roll(base, p)
        for p in range(layout.n_x)
        for _ in range(layout.n_y)
    ]
    return CodingMatrix(np.vstack(linhas), period, CodingScheme.PM)


def time_pattern(layout, code, t, phi_d, phi_a, carrier=FREQUENCIA_PORTADORA):
    """
    Padrão instantâneo no instante t, avaliado na portadora.

    O estado de cada elemento é o do slot floor((t mod T0) / (T0 / L)).
    """
    code.validar_painel(layout)
    slot = int(np.floor(np.mod(t, code.period) / (code.period / code.code_length)))
    slot = min(slot, code.code_length - 1)
    comprimento_onda = VELOCIDADE_LUZ / carrier
    k = _vetor_onda(phi_d, comprimento_onda) + _vetor_onda(phi_a, comprimento_onda)
    return complex(
        code.entries[:, slot] @ np.exp(1j * layout.element_positions @ k)
    )


def ris_steering(layout, phi, carrier=FREQUENCIA_PORTADORA):
    comprimento_onda = VELOCIDADE_LUZ / carrier
    return np.exp(1j * layout.element_positions @ _vetor_onda(phi, comprimento_onda))


def ris_response(profile, layout, phi_d, phi_a, carrier=FREQUENCIA_PORTADORA):
    """
    Resposta a_R(phi_D)^T diag(omega) a_R(phi_A) de uma RIS estática.

    Sem modulação temporal toda a energia fica no harmônico zero.
    """
    if profile.phases.size != layout.n_elements:
        raise OutOfRange('Perfil da RIS incompatível com o painel.')
    return complex(np.sum(
        ris_steering(layout, phi_d, carrier)
        * profile.phases
        * ris_steering(layout, phi_a, carrier)
    ))


def ris_response_derivative(profile, layout, phi_d, phi_a,
                            carrier=FREQUENCIA_PORTADORA):
    """Derivada de ris_response em relação a phi_D."""
    if profile.phases.size != layout.n_elements:
        raise OutOfRange('Perfil da RIS incompatível com o painel.')
    comprimento_onda = VELOCIDADE_LUZ / carrier
    fator = 1j * (layout.element_positions @ _derivada_vetor_onda(phi_d, comprimento_onda))
    return complex(np.sum(
        fator
        * ris_steering(layout, phi_d, carrier)
        * profile.phases
        * ris_steering(layout, phi_a, carrier)
    ))


def salvar_codificacao_csv(code, caminho):
    """Grava a matriz de codificação: uma linha por elemento."""
    np.savetxt(caminho, code.entries, fmt='%d', delimiter=',')
    logger.info('Matriz de codificação gravada em %s', caminho)


def carregar_codificacao_csv(caminho, period=PERIODO_CODIFICACAO,
                             scheme=CodingScheme.PM):
    """
    Lê uma matriz de codificação de um CSV sem cabeçalho.

    Raises:
        AlphabetViolation: Se alguma entrada estiver fora do alfabeto
    """
    entradas = np.loadtxt(caminho, delimiter=',', ndmin=2)
    return CodingMatrix(entradas, period, CodingScheme(scheme))
