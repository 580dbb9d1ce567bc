"""
Carregamento e validação da configuração de experimentos.

A configuração é o JSON de CONFIG_PADRAO mesclado com um arquivo opcional
e com as sobrescritas da linha de comando, nessa ordem.
"""

import copy
import hashlib
import json
import logging
from pathlib import Path

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from canal.dominio import SensingScenario, UlaLayout
from canal.services import dft_pilots
from classificacao.dominio import HypothesisSet
from common.constants import CONFIG_PADRAO, VELOCIDADE_LUZ
from common.exceptions import SensoriamentoError
from common.unidades import dbm_para_watts, rcs_db_para_amplitude
from geometria.dominio import ScatterKind, ScatterPoint, SceneGeometry
from metasuperficie.dominio import (
    CodingScheme,
    HarmonicSet,
    PanelLayout,
    WavelengthMode,
)
from metasuperficie.services import carregar_codificacao_csv, default_coding_matrix

from .dominio import ExperimentConfig
from .forms import ExperimentoForm

logger = logging.getLogger(__name__)

# Campo do formulário -> caminho no JSON
CAMPOS = {
    'tipo': ('experimento', 'tipo'),
    'alvos': ('experimento', 'alvos'),
    'resolucao_grade': ('experimento', 'resolucao_grade'),
    'n_tentativas': ('experimento', 'n_tentativas'),
    'seed': ('experimento', 'seed'),
    'pfa': ('experimento', 'pfa'),
    'distancia_classificacao': ('experimento', 'distancia_classificacao'),
    'm_f': ('harmonicos', 'm_f'),
    'modo_comprimento_onda': ('harmonicos', 'modo_comprimento_onda'),
    'n_x': ('painel', 'n_x'),
    'n_y': ('painel', 'n_y'),
    'comprimento_codigo': ('codigo', 'comprimento'),
    'periodo': ('codigo', 'periodo'),
    'esquema': ('codigo', 'esquema'),
    'arquivo_codigo': ('codigo', 'arquivo'),
    'antenas': ('bs', 'antenas'),
    'potencia_total_dbm': ('pilotos', 'potencia_total_dbm'),
    'ruido_dbm': ('ruido', 'potencia_dbm'),
    'frequencia_portadora': ('propagacao', 'frequencia_portadora'),
    'expoente_perda': ('propagacao', 'expoente_perda'),
    'sigma_nu': ('propagacao', 'sigma_nu'),
}


def mesclar(base, sobrescritas):
    """Mescla dicionários recursivamente; listas e escalares substituem."""
    resultado = copy.deepcopy(base)
    for chave, valor in (sobrescritas or {}).items():
        if isinstance(valor, dict) and isinstance(resultado.get(chave), dict):
            resultado[chave] = mesclar(resultado[chave], valor)
        else:
            resultado[chave] = copy.deepcopy(valor)
    return resultado


def ler_json(caminho):
    """
    Lê um arquivo JSON de configuração.

    Raises:
        ValidationError: Se o arquivo não existir ou for inválido
    """
    try:
        with open(caminho, encoding='utf-8') as arquivo:
            return json.load(arquivo)
    except FileNotFoundError as exc:
        raise ValidationError(f'Arquivo de configuração não encontrado: {caminho}') from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f'JSON inválido em {caminho}: {exc}') from exc


def hash_configuracao(raw):
    """SHA-256 do JSON canônico (chaves ordenadas, sem espaços)."""
    canonico = json.dumps(raw, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonico.encode('utf-8')).hexdigest()


def _plano(raw):
    return {campo: raw[secao].get(chave) for campo, (secao, chave) in CAMPOS.items()}


def _montar_cenario(raw, dados):
    geometria = raw['geometria']
    geometry = SceneGeometry(
        np.array(geometria['centro_bs'], dtype=float),
        np.array(geometria['centro_stcm'], dtype=float),
        tuple(geometria['limites_x']),
        tuple(geometria['limites_z']),
    )
    meio_lambda = VELOCIDADE_LUZ / dados['frequencia_portadora'] / 2
    panel = PanelLayout(
        dados['n_x'], dados['n_y'], raw['painel'].get('espacamento') or meio_lambda
    )
    esquema = CodingScheme(dados['esquema'])
    if dados['arquivo_codigo']:
        code = carregar_codificacao_csv(dados['arquivo_codigo'], dados['periodo'], esquema)
    else:
        code = default_coding_matrix(panel, dados['comprimento_codigo'], dados['periodo'])
    return SensingScenario(
        geometry=geometry,
        ula=UlaLayout(dados['antenas'], raw['bs'].get('espacamento') or meio_lambda),
        panel=panel,
        code=code,
        harmonics=HarmonicSet(dados['m_f']),
        pilots=dft_pilots(dados['antenas'], float(dbm_para_watts(dados['potencia_total_dbm']))),
        noise_power=float(dbm_para_watts(dados['ruido_dbm'])),
        carrier=dados['frequencia_portadora'],
        path_loss_exponent=dados['expoente_perda'],
        symbol_energy=float(raw['propagacao'].get('energia_simbolo', 1.0)),
        fading_std=dados['sigma_nu'],
        wavelength_mode=WavelengthMode(dados['modo_comprimento_onda']),
    )


def _montar_cena(entradas, geometry):
    cena = []
    for entrada in entradas:
        tipo = ScatterKind.from_label(entrada.get('tipo', 'HumanLike'))
        ponto = ScatterPoint.from_db(entrada['posicao'], entrada.get('rcs_db', 0.0), tipo)
        cena.append(ponto.verificar_regiao(geometry))
    return tuple(cena)


def carregar_configuracao(caminho=None, sobrescritas=None):
    """
    Monta um ExperimentConfig validado.

    Args:
        caminho: Arquivo JSON opcional (padrão: settings.STCM_CONFIG)
        sobrescritas: Dicionário aninhado com valores da linha de comando

    Returns:
        ExperimentConfig

    Raises:
        ValidationError: Se algum parâmetro for inválido
    """
    raw = copy.deepcopy(CONFIG_PADRAO)
    caminho = caminho or getattr(settings, 'STCM_CONFIG', '')
    if caminho:
        raw = mesclar(raw, ler_json(caminho))
    raw = mesclar(raw, sobrescritas)

    form = ExperimentoForm(data=_plano(raw))
    if not form.is_valid():
        raise ValidationError(form.errors)
    dados = form.cleaned_data

    experimento = raw['experimento']
    try:
        scenario = _montar_cenario(raw, dados)
        cena = _montar_cena(raw.get('cena', []), scenario.geometry)
        HypothesisSet(
            (0.0,
             rcs_db_para_amplitude(experimento['rcs_nue_db']),
             rcs_db_para_amplitude(experimento['rcs_obj_db'])),
            tuple(experimento['prioris']),
        )
    except (SensoriamentoError, KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f'Configuração inválida: {exc}') from exc

    config_hash = hash_configuracao(raw)
    saida = experimento.get('saida') or str(
        Path(settings.STCM_OUTPUT_DIR) / f"{dados['tipo']}-{config_hash[:12]}"
    )
    logger.info('Configuração %s carregada (hash %s)', dados['tipo'], config_hash[:12])

    return ExperimentConfig(
        scenario=scenario,
        scene=cena,
        kind=dados['tipo'],
        n_targets=dados['alvos'],
        grid_resolution=dados['resolucao_grade'],
        n_trials=dados['n_tentativas'],
        seed=dados['seed'],
        output_dir=saida,
        p_fa=dados['pfa'],
        priors=tuple(experimento['prioris']),
        rcs_nue_db=float(experimento['rcs_nue_db']),
        rcs_obj_db=float(experimento['rcs_obj_db']),
        rcs_crb_db=float(experimento['rcs_crb_db']),
        snr_db=tuple(float(s) for s in experimento['snr_db']),
        classification_distance=dados['distancia_classificacao'],
        raw=raw,
    )
