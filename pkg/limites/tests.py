import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from canal.dominio import PathKind
from canal.services import (
    cenario_padrao,
    db_regressor,
    db_regressor_derivative,
    path_gains,
    sb_regressor,
    sb_regressor_derivative,
)
from common.exceptions import DegenerateGeometry, DimensionMismatch, SingularInformation
from geometria.dominio import ScatterKind, ScatterPoint
from geometria.services import angles_from_position
from metasuperficie.dominio import RisProfile, WavelengthMode

from .services import (
    crb_alpha_closed,
    crb_ris,
    crb_xi_closed,
    efim,
    fim_db_single,
    fim_generic,
    fim_multi_target,
    fim_sb_single,
    multi_target_crbs,
    peb,
    reference_layout,
)


def assert_fim_igual(obtida, esperada, rtol=1e-9):
    """Compara diagonais em termos relativos e o resto após equilíbrio."""
    diagonal = np.diag(esperada)
    assert_allclose(np.diag(obtida), diagonal, rtol=rtol)
    escala = np.outer(1 / np.sqrt(diagonal), 1 / np.sqrt(diagonal))
    assert_allclose(obtida * escala, esperada * escala, atol=rtol * 10)


def alvo(x, z):
    return ScatterPoint(np.array([x, 0.0, z]), 1.0, ScatterKind.HUMAN_LIKE)


class FormasFechadasTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()
        self.ponto = alvo(30.0, 40.0)
        self.angulos = angles_from_position(self.ponto.position, self.cenario.geometry)
        self.ganhos = path_gains(self.ponto, self.cenario)

    def test_sb_confere_com_fim_generica(self):
        alpha, beta = self.angulos.alpha, self.ganhos.single_bounce
        h = sb_regressor(alpha, self.cenario)
        generica = fim_generic(
            [beta * sb_regressor_derivative(alpha, self.cenario), h, 1j * h],
            self.cenario.noise_power,
        )
        fechada = fim_sb_single(alpha, beta, self.cenario)
        assert_fim_igual(fechada.entries, generica.entries)
        self.assertTrue(fechada.is_psd())

    def test_db_confere_com_fim_generica(self):
        alpha, xi = self.angulos.alpha, self.angulos.xi
        beta = self.ganhos.double_bounce
        h = db_regressor(alpha, xi, self.cenario)
        generica = fim_generic(
            [beta * db_regressor_derivative(alpha, xi, self.cenario), h, 1j * h],
            self.cenario.noise_power,
        )
        fechada = fim_db_single(xi, alpha, beta, self.cenario)
        assert_fim_igual(fechada.entries, generica.entries, rtol=1e-8)

    def test_crb_fechado_e_inversa(self):
        alpha, xi = self.angulos.alpha, self.angulos.xi
        crb_a = crb_alpha_closed(alpha, self.ganhos.single_bounce, self.cenario)
        crb_x = crb_xi_closed(xi, alpha, self.ganhos.double_bounce, self.cenario)
        fim_a = fim_sb_single(alpha, self.ganhos.single_bounce, self.cenario)
        fim_x = fim_db_single(xi, alpha, self.ganhos.double_bounce, self.cenario)
        self.assertAlmostEqual(crb_a / fim_a.crb(0), 1.0, places=7)
        self.assertAlmostEqual(crb_x / fim_x.crb(0), 1.0, places=7)
        self.assertAlmostEqual(efim(fim_a, 0) * crb_a, 1.0, places=7)
        self.assertLess(crb_x, 1.0)

    def test_crb_cresce_com_a_distancia(self):
        alpha = np.deg2rad(30.0)
        crbs = []
        for distancia in (20.0, 40.0, 60.0):
            ponto = alvo(distancia * np.sin(alpha), distancia * np.cos(alpha))
            ganho = path_gains(ponto, self.cenario).single_bounce
            crbs.append(crb_alpha_closed(alpha, ganho, self.cenario))
        self.assertTrue(crbs[0] < crbs[1] < crbs[2])

    def test_escala_com_o_ruido(self):
        alpha, beta = self.angulos.alpha, self.ganhos.single_bounce
        base = crb_alpha_closed(alpha, beta, self.cenario)
        ruidoso = cenario_padrao(noise_dbm=-114.0)
        self.assertAlmostEqual(
            crb_alpha_closed(alpha, beta, ruidoso) / base, 10 ** 0.6, places=6
        )

    def test_um_harmonico_nao_identifica_xi(self):
        cenario = cenario_padrao(m_f=0)
        with self.assertRaises(SingularInformation):
            crb_xi_closed(self.angulos.xi, self.angulos.alpha, self.ganhos.double_bounce, cenario)


class HarmonicosTests(SimpleTestCase):

    def _crb_xi(self, m_f, modo=WavelengthMode.EXACT):
        cenario = cenario_padrao(m_f=m_f, wavelength_mode=modo)
        ponto = alvo(-20.0, 45.0)
        angulos = angles_from_position(ponto.position, cenario.geometry)
        ganho = path_gains(ponto, cenario).double_bounce
        return crb_xi_closed(angulos.xi, angulos.alpha, ganho, cenario)

    def test_harmonico_par_nao_acrescenta(self):
        assert_allclose(self._crb_xi(4), self._crb_xi(3), rtol=1e-12)

    def test_ganho_de_cinco_harmonicos_limitado(self):
        modo = WavelengthMode.CARRIER
        ganho_db = 10 * np.log10(self._crb_xi(3, modo) / self._crb_xi(5, modo))
        self.assertGreaterEqual(ganho_db, -1e-9)
        self.assertLessEqual(ganho_db, 10 * np.log10(1.36) + 1e-9)

    def test_varredura_no_plano_medio(self):
        cenarios = {m_f: cenario_padrao(m_f=m_f) for m_f in (3, 4, 5)}
        for graus in range(1, 81):
            ponto = alvo(50.0 * np.tan(np.deg2rad(graus)), 50.0)
            crbs = {}
            for m_f, cenario in cenarios.items():
                angulos = angles_from_position(ponto.position, cenario.geometry)
                ganho = path_gains(ponto, cenario).double_bounce
                crbs[m_f] = crb_xi_closed(angulos.xi, angulos.alpha, ganho, cenario)
            with self.subTest(xi=graus):
                self.assertLessEqual(crbs[4], crbs[3] * (1 + 1e-9))
                self.assertLessEqual(crbs[5], crbs[4] * (1 + 1e-9))
                self.assertLessEqual(10 * np.log10(crbs[4] / crbs[5]), 1.5)



class MultiplosAlvosTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()

    def test_um_alvo_reduz_a_forma_fechada(self):
        ponto = alvo(30.0, 40.0)
        angulos = angles_from_position(ponto.position, self.cenario.geometry)
        ganhos = path_gains(ponto, self.cenario)
        sb = fim_multi_target([ponto], PathKind.SINGLE_BOUNCE, self.cenario)
        db = fim_multi_target([ponto], PathKind.DOUBLE_BOUNCE, self.cenario)
        assert_fim_igual(
            sb.entries, fim_sb_single(angulos.alpha, ganhos.single_bounce, self.cenario).entries
        )
        assert_fim_igual(
            db.entries,
            fim_db_single(angulos.xi, angulos.alpha, ganhos.double_bounce, self.cenario).entries,
            rtol=1e-8,
        )
        self.assertEqual(sb.labels[0], 'alpha_0')

    def test_mesmo_alpha_e_singular(self):
        cena = [alvo(30.0, 40.0), alvo(15.0, 20.0)]
        fim = fim_multi_target(cena, PathKind.SINGLE_BOUNCE, self.cenario)
        with self.assertRaises(SingularInformation):
            multi_target_crbs(fim, 2)

    def test_alvo_extra_nao_reduz_crb(self):
        ponto = alvo(-30.0, 50.0)
        sozinho = multi_target_crbs(
            fim_multi_target([ponto], PathKind.DOUBLE_BOUNCE, self.cenario), 1
        )[0]
        acompanhado = multi_target_crbs(
            fim_multi_target([ponto, *reference_layout(2)], PathKind.DOUBLE_BOUNCE, self.cenario), 2
        )[0]
        self.assertGreaterEqual(acompanhado, sozinho * (1 - 1e-9))

    def test_layouts(self):
        self.assertEqual(reference_layout(1), [])
        assert_allclose(reference_layout(2)[0].position, [60.0, 0.0, 40.0])
        dez = reference_layout(10)
        self.assertEqual(len(dez), 9)
        for ponto in dez:
            self.assertAlmostEqual(np.linalg.norm(ponto.position), 50.0)
        with self.assertRaises(DimensionMismatch):
            reference_layout(3)

    def test_efim_matricial(self):
        fim = fim_multi_target(reference_layout(10)[:3], PathKind.SINGLE_BOUNCE, self.cenario)
        bloco = efim(fim, [0, 1, 2])
        self.assertEqual(bloco.shape, (3, 3))
        assert_allclose(np.linalg.inv(bloco), fim.inverse()[:3, :3], rtol=1e-6)


class PebTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()

    def test_escala_com_sigma(self):
        q = [25.0, 0.0, 35.0]
        base = peb(q, self.cenario)
        ruidoso = peb(q, cenario_padrao(noise_dbm=-114.0))
        self.assertAlmostEqual(ruidoso / base, 10 ** 0.3, places=6)

    def test_eixo_e_degenerado(self):
        with self.assertRaises(DegenerateGeometry):
            peb([0.0, 0.0, 50.0], self.cenario)

    def test_com_alvos_fixos(self):
        q = [-40.0, 0.0, 30.0]
        self.assertGreaterEqual(
            peb(q, self.cenario, others=reference_layout(2)),
            peb(q, self.cenario) * (1 - 1e-9),
        )


class RisTests(SimpleTestCase):

    def test_ris_estatica_nao_identifica_xi(self):
        cenario = cenario_padrao()
        perfil = RisProfile.especular(cenario.panel.n_elements)
        stcm_ponto = alvo(20.0, 50.0)
        angulos = angles_from_position(stcm_ponto.position, cenario.geometry)
        resultado = crb_ris(angulos.xi, angulos.alpha, perfil, cenario)
        self.assertTrue(resultado.masked)
        self.assertGreaterEqual(resultado.crb_xi, 1e10)
        self.assertTrue(all(np.isfinite(resultado.crb_gain)))
        ganho = path_gains(stcm_ponto, cenario).double_bounce
        self.assertLess(crb_xi_closed(angulos.xi, angulos.alpha, ganho, cenario), 1.0)
