import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from common.exceptions import NonPositiveDistance, NotPerfectSquare, TooFewSymbols
from geometria.dominio import ScatterKind, ScatterPoint
from metasuperficie.services import harmonic_pattern

from .dominio import PathKind, PilotMatrix, UlaLayout
from .services import (
    cenario_padrao,
    db_regressor,
    db_regressor_derivative,
    dft_pilots,
    dump_echo,
    path_gain,
    path_gains,
    sample_covariance,
    self_interference_gain,
    stack_db,
    stack_sb,
    steering_derivative,
    steering_vector,
    synthesize_echo,
    vec,
)


def ponto_humano(x=30.0, z=40.0):
    return ScatterPoint.from_db([x, 0.0, z], 1.0, ScatterKind.HUMAN_LIKE)


class PilotosTests(SimpleTestCase):

    def test_dft_quatro_antenas(self):
        pilotos = dft_pilots(4, 2.0)
        assert_allclose(
            pilotos.symbols @ pilotos.symbols.conj().T, 0.5 * np.eye(4), atol=1e-15
        )
        esperado = np.kron([[1, 1], [1, -1]], [[1, 1], [1, -1]]) * np.sqrt(2.0) / 4
        assert_allclose(pilotos.symbols, esperado, atol=1e-15)
        self.assertAlmostEqual(pilotos.total_power, 2.0)

    def test_dezesseis_antenas_ortogonais(self):
        pilotos = dft_pilots(16, 1e-3)
        self.assertTrue(pilotos.is_orthogonal())
        self.assertAlmostEqual(pilotos.total_power, 1e-3)

    def test_nao_quadrado(self):
        with self.assertRaises(NotPerfectSquare):
            dft_pilots(15, 1.0)

    def test_covariancia(self):
        pilotos = dft_pilots(16, 1.0)
        assert_allclose(sample_covariance(pilotos), np.eye(16) / (16 * 15), atol=1e-15)
        with self.assertRaises(TooFewSymbols):
            sample_covariance(PilotMatrix(np.ones((4, 1))))


class DirecaoTests(SimpleTestCase):

    def test_boresight(self):
        ula = UlaLayout(16)
        assert_allclose(steering_vector(ula, 0.0, 10e9), np.ones(16), atol=1e-12)

    def test_derivada(self):
        ula = UlaLayout(16)
        passo = 1e-7
        numerico = (
            steering_vector(ula, 0.4 + passo, 10e9) - steering_vector(ula, 0.4 - passo, 10e9)
        ) / (2 * passo)
        assert_allclose(steering_derivative(ula, 0.4, 10e9), numerico, rtol=1e-5, atol=1e-7)


class GanhoTests(SimpleTestCase):

    def test_lei_de_potencia(self):
        g1 = path_gain(PathKind.SINGLE_BOUNCE, 50.0, 1.0)
        g2 = path_gain(PathKind.SINGLE_BOUNCE, 100.0, 1.0)
        self.assertAlmostEqual(abs(g2) / abs(g1), 2.0 ** -2.0)

    def test_distancia_invalida(self):
        with self.assertRaises(NonPositiveDistance):
            path_gain(PathKind.DOUBLE_BOUNCE, 0.0, 1.0)

    def test_razao_sb_db(self):
        cenario = cenario_padrao()
        ganhos = path_gains(ponto_humano(), cenario)
        simples = 100.0
        dupla = 100.0 + 50.0 + np.hypot(30.0, 60.0)
        self.assertEqual(ganhos.single_distance, simples)
        self.assertAlmostEqual(ganhos.double_distance, dupla)
        self.assertAlmostEqual(
            abs(ganhos.single_bounce) / abs(ganhos.double_bounce),
            (dupla / simples) ** 2,
        )


class EcoTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()
        self.x = self.cenario.pilots.symbols
        self.a0 = steering_vector(self.cenario.ula, 0.0, 10e9)

    def _eta(self, m, phi_d, phi_a):
        return harmonic_pattern(
            self.cenario.panel, self.cenario.code, m, phi_d, phi_a
        )

    def test_cena_vazia_so_autointerferencia(self):
        eco = synthesize_echo([], self.cenario)
        beta_s = self_interference_gain(self.cenario)
        for m in self.cenario.harmonics:
            esperado = beta_s * self._eta(m, 0.0, 0.0) * np.outer(self.a0, self.a0) @ self.x
            assert_allclose(eco.per_harmonic[m], esperado, atol=1e-20)

    def test_soma_dos_componentes(self):
        ponto = ponto_humano()
        eco = synthesize_echo([ponto], self.cenario, keep_components=True)
        alpha, xi = np.arctan2(30, 40), np.arctan2(30, 60)
        a = steering_vector(self.cenario.ula, alpha, 10e9)
        ganhos = path_gains(ponto, self.cenario)
        beta_s = self_interference_gain(self.cenario)
        for m in self.cenario.harmonics:
            c1 = beta_s * self._eta(m, 0.0, 0.0) * np.outer(self.a0, self.a0) @ self.x
            c2 = ganhos.single_bounce * np.outer(a, a) @ self.x if m == 0 else 0.0
            c3 = ganhos.double_bounce * self._eta(m, xi, 0.0) * np.outer(a, self.a0) @ self.x
            c4 = ganhos.double_bounce * self._eta(m, 0.0, xi) * np.outer(self.a0, a) @ self.x
            assert_allclose(eco.per_harmonic[m], c1 + c2 + c3 + c4, rtol=1e-9, atol=1e-22)
            if m != 0:
                self.assertFalse(np.any(eco.components[m]['c2']))

    def test_ausente_nao_contribui(self):
        ausente = ScatterPoint([10.0, 0.0, 20.0], 0.0, ScatterKind.ABSENT)
        com = synthesize_echo([ausente], self.cenario)
        sem = synthesize_echo([], self.cenario)
        for m in self.cenario.harmonics:
            assert_allclose(com.per_harmonic[m], sem.per_harmonic[m])

    def test_ruido_reprodutivel(self):
        eco1 = synthesize_echo([], self.cenario, noise_seed=11)
        eco2 = synthesize_echo([], self.cenario, noise_seed=11)
        eco3 = synthesize_echo([], self.cenario, noise_seed=12)
        assert_allclose(eco1.noise[1], eco2.noise[1])
        self.assertFalse(np.allclose(eco1.noise[1], eco3.noise[1]))

    def test_potencia_do_ruido(self):
        eco = synthesize_echo([], self.cenario, noise_seed=3)
        amostras = np.concatenate([vec(n) for n in eco.noise.values()])
        potencia = np.mean(np.abs(amostras) ** 2)
        self.assertAlmostEqual(potencia / self.cenario.noise_power, 1.0, delta=0.1)

    def test_empilhamento_sem_ruido(self):
        ponto = ponto_humano()
        eco = synthesize_echo([ponto], self.cenario, keep_components=True)
        ganhos = eco.gains[0]

        y_sb, (h_sb,) = stack_sb([ponto], self.cenario, bundle=eco)
        assert_allclose(y_sb, ganhos.single_bounce * h_sb, rtol=1e-9, atol=1e-22)

        y_db, (h_db,) = stack_db([ponto], self.cenario, bundle=eco)
        self.assertEqual(y_db.size, 7 * 16 * 16)
        assert_allclose(y_db, ganhos.double_bounce * h_db, rtol=1e-9, atol=1e-24)

    def test_derivada_do_regressor_db(self):
        passo = 1e-6
        alpha, xi = 0.5, 0.3
        numerico = (
            db_regressor(alpha, xi + passo, self.cenario)
            - db_regressor(alpha, xi - passo, self.cenario)
        ) / (2 * passo)
        analitico = db_regressor_derivative(alpha, xi, self.cenario)
        assert_allclose(analitico, numerico, rtol=1e-5, atol=1e-6 * np.abs(analitico).max())

    def test_gravar_npz(self):
        eco = synthesize_echo([ponto_humano()], self.cenario, keep_components=True)
        with tempfile.TemporaryDirectory() as pasta:
            caminho = Path(pasta) / 'eco.npz'
            dump_echo(eco, caminho)
            with np.load(caminho) as dados:
                assert_allclose(dados['Y_0'], eco.per_harmonic[0])
                self.assertIn('c3_1', dados.files)
