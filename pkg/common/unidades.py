"""Conversões de unidades usadas na configuração."""

import numpy as np


def dbm_para_watts(valor_dbm):
    return 10.0 ** ((np.asarray(valor_dbm, dtype=float) - 30.0) / 10.0)


def db_para_linear(valor_db):
    return 10.0 ** (np.asarray(valor_db, dtype=float) / 10.0)


def rcs_db_para_amplitude(rcs_db):
    """
    Converte uma RCS em dB·m² para a raiz sigma usada no ganho de trajeto.

    Args:
        rcs_db: RCS em dB·m²

    Returns:
        float: sqrt da RCS linear, isto é 10^(dB/20)
    """
    return float(10.0 ** (float(rcs_db) / 20.0))


def linear_para_db(valor):
    """Converte para dB; zero vira -inf sem aviso."""
    with np.errstate(divide='ignore'):
        return 10.0 * np.log10(np.asarray(valor, dtype=float))
