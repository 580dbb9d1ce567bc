import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose
from scipy import stats

from canal.services import cenario_padrao
from common.exceptions import OutOfRange, ZeroRegressor
from common.rng import ruido_complexo
from geometria.services import grid_axes

from .dominio import Combiner, DetectorConfig
from .services import (
    despread_regressor,
    detection_map,
    detection_statistic,
    marcum_q1,
    ml_beta_estimate,
    pd_at_point,
    pd_conditional,
    pd_marginal,
    threshold_from_pfa,
)


class LimiarTests(SimpleTestCase):

    def test_valor(self):
        self.assertAlmostEqual(threshold_from_pfa(1e-4), -2 * math.log(1e-4))

    def test_fora_do_intervalo(self):
        for p in (0.0, 1.0, -0.1):
            with self.assertRaises(OutOfRange):
                threshold_from_pfa(p)
        with self.assertRaises(OutOfRange):
            DetectorConfig(p_fa=1.5)


class MarcumTests(SimpleTestCase):

    def test_confere_com_scipy(self):
        for a in (0.1, 0.5, 1.0, 3.0, 8.0, 30.0):
            for b in (0.2, 1.0, 2.5, 5.0, 10.0, 31.0):
                esperado = stats.ncx2.sf(b * b, 2, a * a)
                self.assertAlmostEqual(marcum_q1(a, b), esperado, places=10)

    def test_casos_limite(self):
        self.assertEqual(marcum_q1(3.0, 0.0), 1.0)
        self.assertAlmostEqual(marcum_q1(0.0, 2.0), math.exp(-2.0))
        with self.assertRaises(OutOfRange):
            marcum_q1(-1.0, 1.0)

    def test_monte_carlo(self):
        rng = np.random.default_rng(2024)
        a, b = 2.0, 2.5
        amostras = np.abs(a + rng.standard_normal(1_000_000) + 1j * rng.standard_normal(1_000_000))
        empirico = np.mean(amostras > b)
        desvio = math.sqrt(empirico * (1 - empirico) / 1_000_000)
        self.assertLess(abs(empirico - marcum_q1(a, b)), 4 * desvio)


class EstatisticaTests(SimpleTestCase):

    def setUp(self):
        self.rng = np.random.default_rng(17)
        self.h = ruido_complexo(self.rng, 64, 1.0)
        self.ruido = 0.5

    def test_regressor_nulo(self):
        with self.assertRaises(ZeroRegressor):
            ml_beta_estimate(np.ones(4), np.zeros(4))

    def test_estimativa_sem_ruido(self):
        beta = 0.3 - 0.7j
        self.assertAlmostEqual(ml_beta_estimate(beta * self.h, self.h), beta)

    def test_taxa_de_falso_alarme(self):
        p_fa = 0.01
        limiar = threshold_from_pfa(p_fa)
        ensaios = 20_000
        y = ruido_complexo(self.rng, (ensaios, 64), self.ruido)
        estatisticas = [detection_statistic(linha, self.h, self.ruido).gamma_tilde for linha in y]
        self.assertAlmostEqual(np.mean(np.array(estatisticas) > limiar), p_fa, delta=0.003)

    def test_pd_condicional(self):
        limiar = threshold_from_pfa(1e-3)
        beta = 0.25
        ensaios = 20_000
        y = beta * self.h + ruido_complexo(self.rng, (ensaios, 64), self.ruido)
        gamma = np.array([detection_statistic(linha, self.h, self.ruido).gamma_tilde for linha in y])
        teorico = pd_conditional(beta, self.h, self.ruido, limiar)
        desvio = math.sqrt(teorico * (1 - teorico) / ensaios)
        self.assertLess(abs(np.mean(gamma > limiar) - teorico), 4 * desvio + 1e-3)

    def test_pd_marginal(self):
        limiar = threshold_from_pfa(1e-3)
        escala = 0.08
        ensaios = 20_000
        beta = ruido_complexo(self.rng, ensaios, 2 * escala ** 2)
        y = beta[:, None] * self.h + ruido_complexo(self.rng, (ensaios, 64), self.ruido)
        gamma = np.array([detection_statistic(linha, self.h, self.ruido).gamma_tilde for linha in y])
        teorico = pd_marginal(escala, self.h, self.ruido, limiar)
        desvio = math.sqrt(teorico * (1 - teorico) / ensaios)
        self.assertLess(abs(np.mean(gamma > limiar) - teorico), 4 * desvio + 1e-3)


class CombinadorTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()

    def _energia(self, q, combinador):
        h = despread_regressor(q, self.cenario, combinador)
        return float(np.real(np.vdot(h, h)))

    def test_casado_domina(self):
        for q in ([20.0, 0.0, 30.0], [-50.0, 0.0, 60.0], [5.0, 0.0, 90.0]):
            self.assertGreater(
                self._energia(q, Combiner.MATCHED_DESPREAD),
                self._energia(q, Combiner.ALL_ONES),
            )
        energia_casado = self._energia([20.0, 0.0, 30.0], Combiner.MATCHED_DESPREAD)
        esperado = self.cenario.ula.m_antennas * self.cenario.pilots.total_power
        self.assertAlmostEqual(energia_casado / esperado, 1.0, places=9)

    def test_igualdade_na_visada(self):
        q = [0.0, 0.0, 50.0]
        self.assertAlmostEqual(
            self._energia(q, Combiner.ALL_ONES) / self._energia(q, Combiner.MATCHED_DESPREAD),
            1.0, places=9,
        )

    def test_todos_uns_na_visada_repete_linhas(self):
        h = despread_regressor([0.0, 0.0, 50.0], self.cenario, Combiner.ALL_ONES)
        matriz = h.reshape(16, -1, order='F')
        assert_allclose(matriz, np.broadcast_to(matriz[0], matriz.shape), atol=1e-15)


class MapaTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()
        self.limiar = threshold_from_pfa(1e-4)

    def test_mascara_e_faixa(self):
        xs, zs = grid_axes(self.cenario.geometry, 20.0)
        valores, mascara = detection_map(DetectorConfig(), self.cenario, 1.0, xs, zs)
        self.assertEqual(valores.shape, (len(zs), len(xs)))
        self.assertTrue(mascara[0, list(xs).index(0.0)])
        self.assertTrue(mascara[-1, list(xs).index(0.0)])
        validos = valores[~mascara]
        self.assertTrue(np.all((validos >= 1e-4 - 1e-15) & (validos <= 1.0)))

    def test_decai_com_a_distancia(self):
        alpha = np.deg2rad(20.0)
        probabilidades = [
            pd_at_point(
                np.array([d * np.sin(alpha), 0.0, d * np.cos(alpha)]),
                self.cenario, Combiner.MATCHED_DESPREAD, 1.0, self.limiar,
            )[0]
            for d in (10.0, 40.0, 80.0)
        ]
        self.assertTrue(probabilidades[0] >= probabilidades[1] >= probabilidades[2])
