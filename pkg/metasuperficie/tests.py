import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from common.exceptions import (
    AlphabetViolation,
    DimensionMismatch,
    NotUnitModulus,
    OutOfRange,
)

from .dominio import (
    CodingMatrix,
    CodingScheme,
    HarmonicSet,
    PanelLayout,
    RisProfile,
    WavelengthMode,
)
from .services import (
    carregar_codificacao_csv,
    default_coding_matrix,
    fourier_coefficient,
    fourier_coefficients,
    harmonic_pattern,
    harmonic_pattern_derivative,
    harmonic_pattern_vector,
    ris_response,
    ris_response_derivative,
    salvar_codificacao_csv,
    time_pattern,
)

LINHA_QUADRADA = [1, 1, 1, 1, -1, -1, -1, -1]


class DominioTests(SimpleTestCase):

    def test_painel_centrado(self):
        painel = PanelLayout.padrao()
        self.assertEqual(painel.element_positions.shape, (64, 3))
        assert_allclose(painel.element_positions.mean(axis=0), 0.0, atol=1e-15)
        self.assertEqual(painel.index(1, 0), 8)

    def test_alfabeto_pm(self):
        with self.assertRaises(AlphabetViolation):
            CodingMatrix(np.array([[1, 0, 1, -1]]), 2e-6)

    def test_alfabeto_am(self):
        CodingMatrix(np.array([[1, 0, 1, 0]]), 2e-6, CodingScheme.AM)
        with self.assertRaises(AlphabetViolation):
            CodingMatrix(np.array([[1, -1]]), 2e-6, CodingScheme.AM)

    def test_harmonicos(self):
        conjunto = HarmonicSet(3)
        self.assertEqual(list(conjunto), [-3, -2, -1, 0, 1, 2, 3])
        self.assertEqual(len(conjunto), 7)
        with self.assertRaises(OutOfRange):
            HarmonicSet(-1)

    def test_ris_modulo(self):
        with self.assertRaises(NotUnitModulus):
            RisProfile(np.array([1.0, 0.5]))


class FourierTests(SimpleTestCase):

    def _codigo(self, linha):
        return CodingMatrix(np.array([linha]), 2e-6)

    def test_confere_com_fft_densa(self):
        amostras_por_slot = 1024
        onda = np.repeat(np.array(LINHA_QUADRADA, dtype=float), amostras_por_slot)
        total = onda.size
        espectro = np.fft.fft(onda) / total
        # amostragem à esquerda adiciona meio passo de fase
        for m in (1, 3, -3):
            esperado = espectro[m % total]
            calculado = fourier_coefficient(self._codigo(LINHA_QUADRADA), (0, 0), m)
            correcao = np.exp(1j * np.pi * m / total)
            assert_allclose(calculado * correcao, esperado, atol=1e-3)

    def test_harmonico_zero_e_media(self):
        linha = [1, -1, -1, -1, 1, 1, -1, -1]
        self.assertAlmostEqual(
            fourier_coefficient(self._codigo(linha), (0, 0), 0), np.mean(linha)
        )

    def test_onda_quadrada(self):
        codigo = self._codigo(LINHA_QUADRADA)
        self.assertAlmostEqual(abs(fourier_coefficient(codigo, (0, 0), 1)), 2 / np.pi, places=12)
        self.assertAlmostEqual(abs(fourier_coefficient(codigo, (0, 0), 3)), 2 / (3 * np.pi), places=12)
        for m in (2, 4, 6):
            self.assertAlmostEqual(abs(fourier_coefficient(codigo, (0, 0), m)), 0.0, places=14)

    def test_deslocamento_ciclico_gira_a_fase(self):
        base = np.array(LINHA_QUADRADA)
        for s in range(1, 8):
            deslocado = fourier_coefficients(self._codigo(np.roll(base, s)), [1, 3])
            original = fourier_coefficients(self._codigo(base), [1, 3])
            fase = np.exp(-2j * np.pi * np.array([1, 3]) * s / 8)
            assert_allclose(deslocado, original * fase, atol=1e-14)

    def test_atenuacao_nas_ordens_impares(self):
        codigo = self._codigo(LINHA_QUADRADA)
        modulos = [abs(fourier_coefficient(codigo, (0, 0), m)) for m in (1, 3, 5, 7)]
        self.assertTrue(all(a > b for a, b in zip(modulos, modulos[1:])))

    def test_elemento_invalido(self):
        with self.assertRaises(OutOfRange):
            fourier_coefficient(self._codigo(LINHA_QUADRADA), (0, 3), 1)

    def test_elemento_por_coordenadas(self):
        painel = PanelLayout(4, 2)
        linhas = np.random.default_rng(5).choice([-1.0, 1.0], size=(8, 8))
        codigo = CodingMatrix(linhas, 2e-6)
        tabela = fourier_coefficients(codigo, [1])
        for p in range(4):
            for q in range(2):
                self.assertAlmostEqual(
                    fourier_coefficient(codigo, (p, q), 1, painel), tabela[p * 2 + q, 0],
                    places=14,
                )
        with self.assertRaises(OutOfRange):
            fourier_coefficient(codigo, (4, 0), 1, painel)

    def test_painel_incompativel(self):
        codigo = CodingMatrix(np.ones((6, 4)), 2e-6)
        with self.assertRaises(DimensionMismatch):
            fourier_coefficient(codigo, (0, 0), 1)
        with self.assertRaises(DimensionMismatch):
            fourier_coefficient(codigo, (0, 0), 1, PanelLayout(2, 2))


class PadraoTests(SimpleTestCase):

    def setUp(self):
        self.painel = PanelLayout.padrao()
        self.codigo = default_coding_matrix(self.painel)

    def test_codigo_padrao(self):
        self.assertEqual(self.codigo.entries.shape, (64, 8))
        assert_allclose(self.codigo.entries[0], LINHA_QUADRADA)
        assert_allclose(self.codigo.entries[8], np.roll(LINHA_QUADRADA, 1))
        with self.assertRaises(OutOfRange):
            default_coding_matrix(self.painel, code_length=7)

    def test_periodicidade(self):
        for m in (-3, 0, 1, 3):
            assert_allclose(
                harmonic_pattern(self.painel, self.codigo, m, 0.3, 0.1),
                harmonic_pattern(self.painel, self.codigo, m, 0.3 + 2 * np.pi, 0.1),
                atol=1e-9,
            )

    def test_simetria_de_troca(self):
        for m in (-1, 1, 3):
            self.assertEqual(
                harmonic_pattern(self.painel, self.codigo, m, 0.4, -0.2),
                harmonic_pattern(self.painel, self.codigo, m, -0.2, 0.4),
            )

    def test_vetor_confere_com_escalar(self):
        conjunto = HarmonicSet(3)
        vetor = harmonic_pattern_vector(self.painel, self.codigo, conjunto, 0.5, 0.0)
        escalares = [harmonic_pattern(self.painel, self.codigo, m, 0.5, 0.0) for m in conjunto]
        assert_allclose(vetor, escalares, rtol=1e-10, atol=1e-12)

    def test_harmonicos_pares_anulados(self):
        conjunto = HarmonicSet(4)
        vetor = harmonic_pattern_vector(self.painel, self.codigo, conjunto, 0.5, 0.0)
        assert_allclose(vetor[[0, 2, 4, 6, 8]], 0.0, atol=1e-12)

    def test_derivada_por_diferencas_finitas(self):
        passo = 1e-6
        for m in (1, -3):
            numerico = (
                harmonic_pattern(self.painel, self.codigo, m, 0.3 + passo, 0.0)
                - harmonic_pattern(self.painel, self.codigo, m, 0.3 - passo, 0.0)
            ) / (2 * passo)
            assert_allclose(
                harmonic_pattern_derivative(self.painel, self.codigo, m, 0.3),
                numerico, rtol=1e-6,
            )

    def test_media_temporal_e_harmonico_zero(self):
        periodo = self.codigo.period
        instantes = (np.arange(8) + 0.5) * periodo / 8
        media = np.mean([
            time_pattern(self.painel, self.codigo, t, 0.2, 0.0) for t in instantes
        ])
        esperado = harmonic_pattern(
            self.painel, self.codigo, 0, 0.2, 0.0, mode=WavelengthMode.CARRIER
        )
        assert_allclose(media, esperado, atol=1e-12)


class RisTests(SimpleTestCase):

    def setUp(self):
        self.painel = PanelLayout.padrao()
        self.perfil = RisProfile.especular(64)

    def test_especular_no_eixo(self):
        self.assertAlmostEqual(
            abs(ris_response(self.perfil, self.painel, 0.0, 0.0)), 64.0
        )

    def test_simetria(self):
        self.assertAlmostEqual(
            ris_response(self.perfil, self.painel, 0.3, 0.0),
            ris_response(self.perfil, self.painel, 0.0, 0.3),
        )

    def test_derivada(self):
        passo = 1e-6
        numerico = (
            ris_response(self.perfil, self.painel, 0.2 + passo, 0.0)
            - ris_response(self.perfil, self.painel, 0.2 - passo, 0.0)
        ) / (2 * passo)
        assert_allclose(
            ris_response_derivative(self.perfil, self.painel, 0.2, 0.0),
            numerico, rtol=1e-6,
        )


class CsvTests(SimpleTestCase):

    def test_gravar_e_ler(self):
        codigo = default_coding_matrix(PanelLayout(2, 2), code_length=4)
        with tempfile.TemporaryDirectory() as pasta:
            caminho = Path(pasta) / 'codigo.csv'
            salvar_codificacao_csv(codigo, caminho)
            lido = carregar_codificacao_csv(caminho)
        assert_allclose(lido.entries, codigo.entries)
