import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from common.constants import COMPRIMENTO_ONDA_PORTADORA
from common.exceptions import InvalidPriors, OutOfRange
from common.unidades import rcs_db_para_amplitude
from geometria.dominio import ScatterKind

from .dominio import HypothesisSet
from .services import (
    confusion_matrix,
    confusion_row,
    decision_thresholds,
    fuse,
    likelihood_conditional,
    mean_snr,
    model_for_snr,
    posterior,
    rayleigh_scale,
)


def hipoteses_padrao(priors=(1 / 3, 1 / 3, 1 / 3)):
    return HypothesisSet(
        (0.0, rcs_db_para_amplitude(1.0), rcs_db_para_amplitude(17.0)), priors
    )


class HipotesesTests(SimpleTestCase):

    def test_prioris_invalidas(self):
        with self.assertRaises(InvalidPriors):
            hipoteses_padrao((0.5, 0.5, 0.5))

    def test_ordem_das_rcs(self):
        with self.assertRaises(OutOfRange):
            HypothesisSet((0.0, 2.0, 1.0))


class VerossimilhancaTests(SimpleTestCase):

    def test_densidade_integra_um(self):
        b = np.linspace(0.0, 50.0, 200001)
        densidade = likelihood_conditional(b, 2.0, 0.5)
        self.assertAlmostEqual(np.trapezoid(densidade, b), 1.0, places=6)

    def test_escala_de_rayleigh(self):
        escala = rayleigh_scale(1.0, 100.0)
        esperado = COMPRIMENTO_ONDA_PORTADORA / (4 * np.pi * 100.0 ** 2) * np.sqrt(2 / np.pi)
        self.assertAlmostEqual(escala / esperado, 1.0, places=12)

    def test_snr_media(self):
        h = np.ones(4)
        self.assertAlmostEqual(mean_snr(2.0, h, 4.0), 4.0)


class PosteriorTests(SimpleTestCase):

    def setUp(self):
        self.hipoteses = hipoteses_padrao()
        self.modelo = model_for_snr(self.hipoteses, 10.0)

    def test_soma_um(self):
        for b in (0.0, 0.5, 3.0, 20.0):
            resultado = posterior(b, self.hipoteses, self.modelo.estimator_var, self.modelo.scales)
            self.assertAlmostEqual(sum(resultado.posteriors), 1.0, places=12)

    def test_magnitude_nula_e_ausente(self):
        resultado = posterior(0.0, self.hipoteses, self.modelo.estimator_var, self.modelo.scales)
        self.assertIs(resultado.map_label, ScatterKind.ABSENT)

    def test_magnitude_grande_e_objeto(self):
        resultado = posterior(1e3, self.hipoteses, self.modelo.estimator_var, self.modelo.scales)
        self.assertIs(resultado.map_label, ScatterKind.OBJECT_LIKE)

    def test_regioes_coerentes_com_o_posterior(self):
        regioes = decision_thresholds(self.hipoteses, self.modelo.scales, self.modelo.estimator_var)
        self.assertEqual(regioes[0][0], 0.0)
        self.assertEqual(regioes[-1][1], np.inf)
        for inferior, superior, tipo in regioes:
            meio = inferior + 1.0 if np.isinf(superior) else (inferior + superior) / 2
            resultado = posterior(meio, self.hipoteses, self.modelo.estimator_var, self.modelo.scales)
            self.assertIs(resultado.map_label, tipo)

    def test_fusao_com_caminho_sem_informacao(self):
        b = 1.7
        direto = posterior(b, self.hipoteses, self.modelo.estimator_var, self.modelo.scales)
        fundido = fuse(
            b, 0.3, self.hipoteses,
            self.modelo.estimator_var, 2.0,
            self.modelo.scales, (1.0, 1.0, 1.0),
        )
        assert_allclose(fundido.posteriors, direto.posteriors, rtol=1e-12)
        self.assertIs(fundido.map_label, direto.map_label)


class ConfusaoTests(SimpleTestCase):

    def setUp(self):
        self.hipoteses = hipoteses_padrao()

    def test_linhas_somam_um(self):
        matriz = confusion_matrix(model_for_snr(self.hipoteses, 5.0), method='quadrature')
        assert_allclose(matriz.sum(axis=1), 1.0, atol=1e-8)

    def test_patamar_em_alta_snr(self):
        nue = confusion_row(
            ScatterKind.HUMAN_LIKE,
            model_for_snr(self.hipoteses, 50.0, ScatterKind.HUMAN_LIKE),
            method='quadrature',
        )
        objeto = confusion_row(
            ScatterKind.OBJECT_LIKE,
            model_for_snr(self.hipoteses, 50.0, ScatterKind.OBJECT_LIKE),
            method='quadrature',
        )
        self.assertAlmostEqual(nue[1], 0.985, delta=0.02)
        self.assertAlmostEqual(objeto[2], 0.886, delta=0.02)
        self.assertAlmostEqual(objeto[1], 0.112, delta=0.02)

    def test_ruido_domina_abaixo_de_zero_db(self):
        for tipo in (ScatterKind.HUMAN_LIKE, ScatterKind.OBJECT_LIKE):
            linha = confusion_row(
                tipo, model_for_snr(self.hipoteses, -5.0, tipo), method='quadrature'
            )
            self.assertEqual(int(np.argmax(linha)), 0)

    def test_monte_carlo_confere_com_quadratura(self):
        modelo = model_for_snr(self.hipoteses, 10.0)
        quadratura = confusion_matrix(modelo, method='quadrature')
        monte_carlo = confusion_matrix(modelo, n_trials=20_000, seed=99)
        assert_allclose(monte_carlo, quadratura, atol=0.015)

    def test_monte_carlo_reprodutivel(self):
        modelo = model_for_snr(self.hipoteses, 0.0)
        assert_allclose(
            confusion_matrix(modelo, n_trials=1000, seed=5),
            confusion_matrix(modelo, n_trials=1000, seed=5),
        )
        self.assertFalse(np.array_equal(
            confusion_matrix(modelo, n_trials=1000, seed=5, stream=0),
            confusion_matrix(modelo, n_trials=1000, seed=5, stream=1),
        ))

    def test_metodo_invalido(self):
        with self.assertRaises(OutOfRange):
            confusion_matrix(model_for_snr(self.hipoteses, 0.0), method='exato')
