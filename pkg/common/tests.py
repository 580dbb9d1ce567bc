import math

import numpy as np
from django.test import SimpleTestCase

from .decorators import mascarar_degenerados
from .exceptions import ConfiguracaoInvalida, DegenerateTriangle, OutOfRange, PontoDegenerado
from .rng import gerador, ruido_complexo
from .unidades import dbm_para_watts, linear_para_db, rcs_db_para_amplitude


class GeradorTests(SimpleTestCase):

    def test_mesmo_fluxo_mesma_sequencia(self):
        a = gerador(7, 'classify_mc', 3, 1).standard_normal(5)
        b = gerador(7, 'classify_mc', 3, 1).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_fluxos_distintos(self):
        a = gerador(7, 'classify_mc', 3, 1).standard_normal(5)
        b = gerador(7, 'classify_mc', 3, 2).standard_normal(5)
        c = gerador(7, 'detect_map', 3, 1).standard_normal(5)
        self.assertFalse(np.array_equal(a, b))
        self.assertFalse(np.array_equal(a, c))

    def test_semente_obrigatoria(self):
        with self.assertRaises(ConfiguracaoInvalida):
            gerador(None, 'classify_mc')
        with self.assertRaises(ConfiguracaoInvalida):
            gerador(-1, 'classify_mc')
        with self.assertRaises(ConfiguracaoInvalida):
            gerador(1, 'desconhecido')

    def test_potencia_do_ruido(self):
        amostras = ruido_complexo(gerador(1, 'eco'), 200_000, 2.0)
        self.assertAlmostEqual(float(np.mean(np.abs(amostras) ** 2)), 2.0, delta=0.03)


class MascaraTests(SimpleTestCase):

    def test_ponto_degenerado_vira_mascara(self):
        @mascarar_degenerados
        def avaliar(x):
            if x == 0:
                raise DegenerateTriangle('eixo')
            return 1.0 / x

        self.assertEqual(avaliar(2.0), (0.5, False))
        valor, mascarado = avaliar(0)
        self.assertTrue(mascarado)
        self.assertTrue(math.isnan(valor))

    def test_infinito_vira_mascara(self):
        valor, mascarado = mascarar_degenerados(lambda: float('inf'))()
        self.assertTrue(mascarado)
        self.assertTrue(math.isnan(valor))

    def test_erro_de_configuracao_se_propaga(self):
        @mascarar_degenerados
        def avaliar():
            raise OutOfRange('fora')

        with self.assertRaises(OutOfRange):
            avaliar()

    def test_hierarquia(self):
        self.assertTrue(issubclass(DegenerateTriangle, PontoDegenerado))
        self.assertFalse(issubclass(OutOfRange, PontoDegenerado))


class UnidadesTests(SimpleTestCase):

    def test_conversoes(self):
        self.assertAlmostEqual(float(dbm_para_watts(30.0)), 1.0)
        self.assertAlmostEqual(float(dbm_para_watts(-120.0)), 1e-15)
        self.assertAlmostEqual(rcs_db_para_amplitude(20.0), 10.0)
        self.assertAlmostEqual(float(linear_para_db(100.0)), 20.0)
        self.assertEqual(float(linear_para_db(0.0)), -math.inf)
