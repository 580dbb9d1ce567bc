import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from common.exceptions import (
    ConfiguracaoInvalida,
    DegenerateGeometry,
    DegeneratePoint,
    DegenerateTriangle,
    OutOfRange,
)

from .dominio import AnglePair, ScatterKind, ScatterPoint, SceneGeometry
from .services import (
    angles_from_position,
    distances,
    grid_axes,
    jacobian_angles_to_position,
    position_from_angles,
    triangle_ratios,
)


class SceneGeometryTests(SimpleTestCase):

    def test_padrao_tem_cem_metros(self):
        self.assertEqual(SceneGeometry.padrao().d_s, 100.0)

    def test_stcm_atras_da_bs_e_rejeitada(self):
        with self.assertRaises(DegenerateGeometry):
            SceneGeometry(np.zeros(3), np.array([0.0, 0.0, -10.0]))

    def test_stcm_fora_do_eixo_e_rejeitada(self):
        with self.assertRaises(DegenerateGeometry):
            SceneGeometry(np.zeros(3), np.array([5.0, 0.0, 100.0]))

    def test_contains(self):
        geometria = SceneGeometry.padrao()
        self.assertTrue(geometria.contains([80.0, 0.0, 0.0]))
        self.assertFalse(geometria.contains([81.0, 0.0, 10.0]))


class ScatterPointTests(SimpleTestCase):

    def test_ausente_com_rcs_e_invalido(self):
        with self.assertRaises(ConfiguracaoInvalida):
            ScatterPoint([1.0, 0.0, 1.0], 1.0, ScatterKind.ABSENT)

    def test_presente_sem_rcs_e_invalido(self):
        with self.assertRaises(ConfiguracaoInvalida):
            ScatterPoint([1.0, 0.0, 1.0], 0.0, ScatterKind.HUMAN_LIKE)

    def test_from_db(self):
        ponto = ScatterPoint.from_db([1.0, 0.0, 1.0], 20.0, ScatterKind.OBJECT_LIKE)
        self.assertAlmostEqual(ponto.rcs_sqrt, 10.0)

    def test_fora_do_plano(self):
        with self.assertRaises(OutOfRange):
            ScatterPoint([10.0, 0.5, 20.0], 1.0, ScatterKind.HUMAN_LIKE)
        with self.assertRaises(OutOfRange):
            angles_from_position([10.0, 0.5, 20.0], SceneGeometry.padrao())

    def test_regiao(self):
        geometria = SceneGeometry.padrao()
        dentro = ScatterPoint([60.0, 0.0, 40.0], 1.0, ScatterKind.HUMAN_LIKE)
        self.assertIs(dentro.verificar_regiao(geometria), dentro)
        with self.assertRaises(OutOfRange):
            ScatterPoint([90.0, 0.0, 40.0], 1.0, ScatterKind.HUMAN_LIKE).verificar_regiao(geometria)

    def test_rotulos(self):
        self.assertIs(ScatterKind.from_label('HumanLike'), ScatterKind.HUMAN_LIKE)
        self.assertIs(ScatterKind.from_label('object_like'), ScatterKind.OBJECT_LIKE)


class AnglesTests(SimpleTestCase):

    def setUp(self):
        self.geometria = SceneGeometry.padrao()

    def test_exemplo_trinta_quarenta(self):
        angulos = angles_from_position([30.0, 0.0, 40.0], self.geometria)
        self.assertAlmostEqual(angulos.alpha, np.arctan2(30, 40))
        self.assertAlmostEqual(angulos.xi, np.arctan2(30, 60))
        self.assertAlmostEqual(angulos.alpha, 0.6435, places=4)
        self.assertAlmostEqual(angulos.xi, 0.4636, places=4)

    def test_ida_e_volta_nos_dois_semiplanos(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            x = rng.uniform(1.0, 80.0) * rng.choice([-1.0, 1.0])
            z = rng.uniform(1.0, 99.0)
            q = np.array([x, 0.0, z])
            angulos = angles_from_position(q, self.geometria)
            assert_allclose(
                position_from_angles(angulos, self.geometria), q, atol=1e-6
            )

    def test_lei_dos_senos(self):
        razoes = triangle_ratios([-25.0, 0.0, 70.0], self.geometria)
        assert_allclose(razoes, [razoes[0]] * 3, rtol=1e-10)

    def test_ponto_na_bs(self):
        with self.assertRaises(DegeneratePoint):
            angles_from_position([0.0, 0.0, 0.0], self.geometria)

    def test_triangulo_degenerado(self):
        with self.assertRaises(DegenerateTriangle):
            position_from_angles(AnglePair(0.0, 0.0), self.geometria)

    def test_distancias(self):
        d_s, d_r, d_r_linha = distances([30.0, 0.0, 40.0], self.geometria)
        self.assertEqual((d_s, d_r), (100.0, 50.0))
        self.assertAlmostEqual(d_r_linha, np.hypot(30.0, 60.0))


class JacobianTests(SimpleTestCase):

    def setUp(self):
        self.geometria = SceneGeometry.padrao()

    def test_no_eixo(self):
        assert_allclose(
            jacobian_angles_to_position([0.0, 0.0, 50.0], self.geometria),
            [[0.02, 0.0], [0.02, 0.0]],
            atol=1e-15,
        )

    def test_sinal_no_eixo_segue_os_angulos(self):
        # alpha e xi crescem com x > 0, então as duas derivadas em x são positivas
        passo = 1e-4
        mais = angles_from_position([passo, 0.0, 50.0], self.geometria)
        menos = angles_from_position([-passo, 0.0, 50.0], self.geometria)
        self.assertAlmostEqual((mais.alpha - menos.alpha) / (2 * passo), 0.02, places=9)
        self.assertAlmostEqual((mais.xi - menos.xi) / (2 * passo), 0.02, places=9)
        transformacao = jacobian_angles_to_position([0.0, 0.0, 50.0], self.geometria)
        self.assertGreater(transformacao[0, 0], 0.0)
        self.assertGreater(transformacao[1, 0], 0.0)

    def test_diferencas_finitas(self):
        passo = 1e-6
        for q in ([20.0, 0.0, 30.0], [-45.0, 0.0, 80.0], [10.0, 0.0, 5.0]):
            base = np.array(q)
            numerico = np.zeros((2, 2))
            for coluna, eixo in enumerate((0, 2)):
                delta = np.zeros(3)
                delta[eixo] = passo
                mais = angles_from_position(base + delta, self.geometria)
                menos = angles_from_position(base - delta, self.geometria)
                numerico[:, coluna] = [
                    (mais.alpha - menos.alpha) / (2 * passo),
                    (mais.xi - menos.xi) / (2 * passo),
                ]
            assert_allclose(
                jacobian_angles_to_position(base, self.geometria), numerico, rtol=1e-6, atol=1e-10
            )


class GridTests(SimpleTestCase):

    def test_grade_padrao(self):
        xs, zs = grid_axes(SceneGeometry.padrao(), 1.0)
        self.assertEqual((len(xs), len(zs)), (161, 101))
        self.assertEqual((xs[0], xs[-1], zs[-1]), (-80.0, 80.0, 100.0))

    def test_resolucao_invalida(self):
        with self.assertRaises(OutOfRange):
            grid_axes(SceneGeometry.padrao(), 0.0)
