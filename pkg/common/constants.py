"""
Constantes compartilhadas do projeto.

Este módulo centraliza os parâmetros do cenário de referência e os
limiares numéricos usados por vários apps, evitando números mágicos
espalhados pelos serviços.
"""

VELOCIDADE_LUZ = 299_792_458.0  # m/s

# ============================================================================
# Cenário de referência
# ============================================================================

FREQUENCIA_PORTADORA = 10e9  # Hz
COMPRIMENTO_ONDA_PORTADORA = VELOCIDADE_LUZ / FREQUENCIA_PORTADORA
PERIODO_CODIFICACAO = 2e-6  # T0, s
COMPRIMENTO_CODIGO = 8  # L
HARMONICOS_PADRAO = 3  # m_f
ANTENAS_BS = 16
ELEMENTOS_STCM = (8, 8)
EXPOENTE_PERDA = 2.0  # iota; iota^2 = 4
ENERGIA_SIMBOLO = 1.0
POTENCIA_TOTAL_DBM = 12.0
RUIDO_DBM = -120.0
RCS_NUE_DB = 1.0  # dB·m²
RCS_OBJ_DB = 17.0  # dB·m²
RCS_CRB_DB = 0.0  # alvo pontual dos mapas de CRB/PEB
SIGMA_NU = 1.0
CENTRO_BS = (0.0, 0.0, 0.0)
CENTRO_STCM = (0.0, 0.0, 100.0)
LIMITES_X = (-80.0, 80.0)
LIMITES_Z = (0.0, 100.0)
RESOLUCAO_GRADE = 1.0  # m

# Detecção e classificação
PFA_PADRAO = 1e-4
PRIORIS_PADRAO = (1 / 3, 1 / 3, 1 / 3)
N_TENTATIVAS_PADRAO = 10_000
SNR_DB_PADRAO = tuple(range(-10, 52, 2))
DISTANCIA_CLASSIFICACAO = 50.0  # m, d_r do alvo nas curvas de Monte Carlo

# Alvos fixos dos mapas com múltiplos pontos
ALVO_FIXO_DOIS = (60.0, 0.0, 40.0)
LAYOUT_ANGULOS_GRAUS = tuple(range(-72, 73, 18))
LAYOUT_DISTANCIA = 50.0

# ============================================================================
# Limiares numéricos
# ============================================================================

LIMIAR_TRIANGULO = 1e-3  # rad, |alpha + xi| abaixo disso é degenerado
LIMIAR_CONDICIONAMENTO = 1e12
TOLERANCIA_COINCIDENCIA = 1e-9  # m
TOLERANCIA_PLANO = 1e-9  # m, |y| admitido para pontos da cena
TOLERANCIA_MODULO = 1e-9
TOLERANCIA_PRIORIS = 1e-12
TOLERANCIA_MARCUM = 1e-13

# Identificadores de experimento usados na derivação das sementes
EXPERIMENTOS = {
    'crb_map': 1,
    'peb_map': 2,
    'detect_map': 3,
    'classify_mc': 4,
    'ris_compare': 5,
    'eco': 6,
    'validate': 7,
}

# ============================================================================
# Configuração padrão (estrutura do JSON de configuração)
# ============================================================================

CONFIG_PADRAO = {
    'geometria': {
        'centro_bs': list(CENTRO_BS),
        'centro_stcm': list(CENTRO_STCM),
        'limites_x': list(LIMITES_X),
        'limites_z': list(LIMITES_Z),
    },
    'painel': {
        'n_x': ELEMENTOS_STCM[0],
        'n_y': ELEMENTOS_STCM[1],
        'espacamento': None,  # None = meio comprimento de onda da portadora
    },
    'codigo': {
        'comprimento': COMPRIMENTO_CODIGO,
        'periodo': PERIODO_CODIFICACAO,
        'esquema': 'PM',
        'arquivo': None,
    },
    'harmonicos': {
        'm_f': HARMONICOS_PADRAO,
        'modo_comprimento_onda': 'exact',
    },
    'bs': {
        'antenas': ANTENAS_BS,
        'espacamento': None,
    },
    'pilotos': {
        'potencia_total_dbm': POTENCIA_TOTAL_DBM,
    },
    'ruido': {
        'potencia_dbm': RUIDO_DBM,
    },
    'propagacao': {
        'frequencia_portadora': FREQUENCIA_PORTADORA,
        'expoente_perda': EXPOENTE_PERDA,
        'energia_simbolo': ENERGIA_SIMBOLO,
        'sigma_nu': SIGMA_NU,
    },
    'cena': [],
    'experimento': {
        'tipo': 'crb_map',
        'alvos': 1,
        'resolucao_grade': RESOLUCAO_GRADE,
        'n_tentativas': N_TENTATIVAS_PADRAO,
        'seed': None,
        'saida': None,
        'pfa': PFA_PADRAO,
        'prioris': list(PRIORIS_PADRAO),
        'rcs_nue_db': RCS_NUE_DB,
        'rcs_obj_db': RCS_OBJ_DB,
        'rcs_crb_db': RCS_CRB_DB,
        'snr_db': list(SNR_DB_PADRAO),
        'distancia_classificacao': DISTANCIA_CLASSIFICACAO,
    },
}
