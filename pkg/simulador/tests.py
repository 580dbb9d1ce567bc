import json
import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command, get_commands
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings
from joblib import parallel_config

from canal.services import cenario_padrao
from classificacao.dominio import HypothesisSet
from classificacao.services import confusion_matrix
from common.exceptions import DimensionMismatch
from geometria.dominio import ScatterKind
from limites.dominio import PebMap

from . import varredura
from .config import carregar_configuracao, hash_configuracao, mesclar
from .dominio import Tabela
from .exports.csv_exporter import MapaCsvExporter, formatar
from .models import ArquivoResultado, Execucao
from .services import ExperimentoService

# Grade 5 x 3 em torno do eixo de visada
GRADE_PEQUENA = {
    'geometria': {'limites_x': [-4.0, 4.0], 'limites_z': [40.0, 44.0]},
    'experimento': {'resolucao_grade': 2.0},
}


class PastaTemporariaMixin:

    def setUp(self):
        super().setUp()
        pasta = tempfile.TemporaryDirectory()
        self.addCleanup(pasta.cleanup)
        self.pasta = Path(pasta.name)
        override = override_settings(STCM_OUTPUT_DIR=self.pasta, STCM_CONFIG='')
        override.enable()
        self.addCleanup(override.disable)

    def escrever_config(self, conteudo, nome='config.json'):
        caminho = self.pasta / nome
        caminho.write_text(json.dumps(conteudo), encoding='utf-8')
        return str(caminho)

    def config(self, tipo='crb_map', **experimento):
        sobrescritas = mesclar(GRADE_PEQUENA, {'experimento': {'tipo': tipo, **experimento}})
        return carregar_configuracao(sobrescritas=sobrescritas)


class ConfiguracaoTests(PastaTemporariaMixin, SimpleTestCase):

    def test_padrao_reproduz_cenario_de_referencia(self):
        config = carregar_configuracao()
        self.assertEqual(config.kind, 'crb_map')
        self.assertEqual(config.scenario.ula.m_antennas, 16)
        self.assertEqual(config.scenario.harmonics.m_f, 3)
        self.assertEqual(config.scenario.panel.n_elements, 64)
        self.assertAlmostEqual(config.scenario.noise_power, 1e-15)
        self.assertEqual(config.n_trials, 10_000)
        self.assertIn('crb_map-', config.output_dir)

    def test_arquivo_mesclado_sobre_o_padrao(self):
        caminho = self.escrever_config({'harmonicos': {'m_f': 5}})
        config = carregar_configuracao(caminho)
        self.assertEqual(config.scenario.harmonics.m_f, 5)
        self.assertEqual(config.scenario.ula.m_antennas, 16)

    def test_linha_de_comando_prevalece_sobre_arquivo(self):
        caminho = self.escrever_config({'experimento': {'resolucao_grade': 4.0}})
        config = carregar_configuracao(caminho, {'experimento': {'resolucao_grade': 0.5}})
        self.assertEqual(config.grid_resolution, 0.5)

    def test_cena_convertida_de_db(self):
        caminho = self.escrever_config({
            'cena': [{'posicao': [10, 0, 30], 'rcs_db': 20, 'tipo': 'ObjectLike'}]
        })
        config = carregar_configuracao(caminho)
        self.assertEqual(len(config.scene), 1)
        self.assertAlmostEqual(config.scene[0].rcs_sqrt, 10.0)
        self.assertIs(config.scene[0].kind, ScatterKind.OBJECT_LIKE)

    def test_cena_fora_da_regiao_ou_do_plano(self):
        for posicao in ([120, 0, 30], [10, 2, 30]):
            caminho = self.escrever_config({'cena': [{'posicao': posicao, 'rcs_db': 0}]})
            with self.assertRaises(ValidationError):
                carregar_configuracao(caminho)

    def test_semente_obrigatoria_para_monte_carlo(self):
        with self.assertRaises(ValidationError):
            carregar_configuracao(sobrescritas={'experimento': {'tipo': 'classify_mc'}})

    def test_antenas_nao_quadradas(self):
        with self.assertRaises(ValidationError):
            carregar_configuracao(sobrescritas={'bs': {'antenas': 15}})

    def test_resolucao_invalida(self):
        with self.assertRaises(ValidationError):
            carregar_configuracao(sobrescritas={'experimento': {'resolucao_grade': 0}})

    def test_prioris_invalidas(self):
        with self.assertRaises(ValidationError):
            carregar_configuracao(sobrescritas={'experimento': {'prioris': [0.5, 0.5, 0.5]}})

    def test_json_invalido(self):
        caminho = self.pasta / 'quebrado.json'
        caminho.write_text('{"harmonicos": ', encoding='utf-8')
        with self.assertRaises(ValidationError):
            carregar_configuracao(str(caminho))

    def test_hash_estavel(self):
        a = carregar_configuracao()
        b = carregar_configuracao()
        c = carregar_configuracao(sobrescritas={'harmonicos': {'m_f': 4}})
        self.assertEqual(hash_configuracao(a.raw), hash_configuracao(b.raw))
        self.assertNotEqual(hash_configuracao(a.raw), hash_configuracao(c.raw))


class ExportacaoTests(PastaTemporariaMixin, SimpleTestCase):

    def test_formatacao_das_celulas(self):
        self.assertEqual(formatar(float('nan')), '')
        self.assertEqual(formatar(True), 'true')
        self.assertEqual(formatar(3), '3')
        self.assertEqual(formatar(1.5), '1.500000000000e+00')
        self.assertEqual(formatar(ScatterKind.HUMAN_LIKE), 'HumanLike')

    def test_mapa_com_coluna_de_mascara(self):
        tabela = Tabela(
            'mapa.csv', MapaCsvExporter.CABECALHO,
            [(0.0, 1.0, float('nan'), True), (1.0, 1.0, 2.0, False)],
        )
        caminho = MapaCsvExporter(tabela).exportar(self.pasta)
        linhas = caminho.read_text(encoding='utf-8').splitlines()
        self.assertEqual(linhas[0], 'x,z,value,masked')
        self.assertEqual(linhas[1], '0.000000000000e+00,1.000000000000e+00,,true')
        self.assertEqual(len(linhas), 3)

    def test_cabecalho_errado(self):
        tabela = Tabela('mapa.csv', ('x', 'z'), [])
        with self.assertRaises(ValueError):
            MapaCsvExporter(tabela).exportar(self.pasta)


class VarreduraTests(SimpleTestCase):

    def setUp(self):
        self.cenario = cenario_padrao()
        self.xs = np.array([-4.0, 0.0, 4.0])
        self.zs = np.array([40.0, 42.0])

    def test_eixo_de_visada_mascarado(self):
        valores, mascara = varredura.linha_peb(40.0, self.xs, self.cenario, (), 1.0)
        self.assertTrue(mascara[1])
        self.assertTrue(math.isnan(valores[1]))
        self.assertFalse(mascara[0] or mascara[2])
        self.assertTrue(np.all(valores[[0, 2]] > 0))

    def test_paralelo_igual_ao_sequencial(self):
        sequencial = varredura.mapa(
            varredura.linha_peb, self.xs, self.zs, 1, self.cenario, (), 1.0
        )
        with parallel_config(backend='threading'):
            paralelo = varredura.mapa(
                varredura.linha_peb, self.xs, self.zs, 2, self.cenario, (), 1.0
            )
        for (v1, m1), (v2, m2) in zip(sequencial, paralelo):
            np.testing.assert_array_equal(m1, m2)
            np.testing.assert_array_equal(v1[~m1], v2[~m2])

    def test_mapa_de_peb(self):
        mapa = varredura.mapa_peb(self.xs, self.zs, 1, self.cenario, (), 1.0)
        self.assertIsInstance(mapa, PebMap)
        self.assertEqual(mapa.values.shape, (2, 3))
        np.testing.assert_array_equal(mapa.mask[:, 1], [True, True])
        self.assertAlmostEqual(mapa.fraction_masked, 1 / 3)
        self.assertEqual(mapa.worst(), float(np.nanmax(mapa.values)))
        with self.assertRaises(DimensionMismatch):
            PebMap(self.xs, self.zs, np.zeros((3, 2)), np.zeros((3, 2), dtype=bool))

    def test_classificacao_por_ponto_de_snr(self):
        hipoteses = HypothesisSet((0.0, 10 ** 0.05, 10 ** 0.85))
        linhas = varredura.ponto_classificacao(0, 40.0, hipoteses, 300, 3)
        self.assertEqual([tipo for _, tipo, _ in linhas],
                         [ScatterKind.HUMAN_LIKE, ScatterKind.OBJECT_LIKE])
        for _, _, probabilidades in linhas:
            self.assertAlmostEqual(float(np.sum(probabilidades)), 1.0)

    def test_confusao_por_ecos_confere_com_quadratura(self):
        hipoteses = HypothesisSet((0.0, 10 ** 0.05, 10 ** 0.85))
        matriz, modelo = varredura.confusao_por_ecos(
            [25.0, 0.0, 43.3], hipoteses, self.cenario, 10_000, 11
        )
        np.testing.assert_allclose(matriz.sum(axis=1), 1.0)
        np.testing.assert_allclose(
            matriz, confusion_matrix(modelo, method='quadrature'), atol=0.02
        )



class ExperimentoServiceTests(PastaTemporariaMixin, TestCase):

    def _ler(self, caminho):
        return Path(caminho).read_bytes()

    def test_mapa_de_crb_registrado(self):
        config = self.config('crb_map')
        execucao, manifesto, tabelas = ExperimentoService.executar(config)

        self.assertEqual([t.nome for t in tabelas], ['crb_alpha.csv', 'crb_xi.csv'])
        for tabela in tabelas:
            self.assertEqual(len(tabela.linhas), 15)
            self.assertEqual([linha[:2] for linha in tabela.linhas[:2]], [(-4.0, 40.0), (-2.0, 40.0)])

        execucao.refresh_from_db()
        self.assertEqual(execucao.status, 'concluida')
        self.assertEqual(execucao.arquivos.count(), len(manifesto.outputs))
        self.assertTrue((Path(config.output_dir) / 'manifest.json').is_file())
        self.assertEqual(ExperimentoService.verificar_manifesto(config.output_dir), [])

    def test_saidas_identicas_para_mesma_configuracao(self):
        config = self.config('crb_map')
        ExperimentoService.executar(config)
        primeira = self._ler(Path(config.output_dir) / 'crb_xi.csv')
        ExperimentoService.executar(config)
        self.assertEqual(self._ler(Path(config.output_dir) / 'crb_xi.csv'), primeira)
        self.assertEqual(Execucao.objects.count(), 2)

    def test_peb_com_dois_alvos(self):
        config = self.config('peb_map', alvos=2)
        tabelas = ExperimentoService.run_peb_map(config)
        self.assertEqual(len(tabelas[0].linhas), 15)
        valores = [linha[2] for linha in tabelas[0].linhas if not linha[3]]
        self.assertTrue(all(v > 0 for v in valores))
        # eixo BS-STCM degenerado
        self.assertTrue(all(linha[3] for linha in tabelas[0].linhas if linha[0] == 0.0))

    def test_quatro_mapas_de_deteccao(self):
        config = self.config('detect_map')
        tabelas = ExperimentoService.run_detection_map(config)
        self.assertEqual(len(tabelas), 4)
        for tabela in tabelas:
            self.assertEqual(len(tabela.linhas), 15)
            for linha in tabela.linhas:
                if not linha[3]:
                    self.assertGreaterEqual(linha[2], config.p_fa * (1 - 1e-9))
                    self.assertLessEqual(linha[2], 1.0)

    def test_classificacao_determinista(self):
        config = self.config('classify_mc', seed=11, n_tentativas=400, snr_db=[-5, 40])
        primeira = ExperimentoService.run_classification_mc(config)[0]
        segunda = ExperimentoService.run_classification_mc(config)[0]
        self.assertEqual(primeira.linhas, segunda.linhas)
        self.assertEqual(len(primeira.linhas), 4)
        for linha in primeira.linhas:
            self.assertAlmostEqual(sum(linha[2:5]), 1.0)
            self.assertEqual(linha[5:], (400, 11))

    def test_ris_sempre_mascarada(self):
        config = self.config('ris_compare')
        mapa, comparacao = ExperimentoService.run_ris_compare(config)
        self.assertEqual(len(mapa.linhas), 15)
        self.assertTrue(all(linha[3] for linha in mapa.linhas))
        self.assertEqual(len(comparacao.linhas), 81)
        linha_30 = comparacao.linhas[30]
        self.assertFalse(linha_30[3])
        self.assertTrue(linha_30[4])
        self.assertLess(linha_30[1], 0.0)

    def test_validacao_aprovada(self):
        config = self.config('validate', seed=5)
        tabela = ExperimentoService.run_validation(config)[0]
        reprovadas = [linha for linha in tabela.linhas if not linha[1]]
        self.assertEqual(reprovadas, [])

    def test_falha_nao_deixa_manifesto(self):
        config = self.config('crb_map')
        with mock.patch(
            'simulador.services.SidecarJsonExporter.exportar', side_effect=OSError('disco cheio')
        ):
            with self.assertRaises(OSError):
                ExperimentoService.executar(config)
        execucao = Execucao.objects.get()
        self.assertEqual(execucao.status, 'falhou')
        self.assertIn('disco cheio', execucao.mensagem_erro)
        self.assertFalse((Path(config.output_dir) / 'manifest.json').exists())
        self.assertFalse(ArquivoResultado.objects.exists())

    def test_resumo_excel(self):
        config = self.config('crb_map')
        _, manifesto, _ = ExperimentoService.executar(config, xlsx=True)
        self.assertIn('resumo.xlsx', manifesto.outputs)


class ComandosTests(PastaTemporariaMixin, TestCase):

    def test_crb_map(self):
        caminho = self.escrever_config(GRADE_PEQUENA)
        saida = self.pasta / 'crb'
        out = StringIO()
        call_command('crb_map', config=caminho, out=str(saida), stdout=out)
        self.assertIn('concluída', out.getvalue())
        self.assertTrue((saida / 'crb_alpha.csv').is_file())
        self.assertTrue((saida / 'manifest.json').is_file())

    def test_harmonicos_pela_linha_de_comando(self):
        caminho = self.escrever_config(GRADE_PEQUENA)
        saida = self.pasta / 'crb5'
        call_command('crb_map', config=caminho, out=str(saida), harmonics=5, stdout=StringIO())
        sidecar = json.loads((saida / 'crb_xi.json').read_text(encoding='utf-8'))
        self.assertEqual(sidecar['config']['harmonicos']['m_f'], 5)

    def test_classify_mc_sem_semente(self):
        with self.assertRaises(CommandError):
            call_command('classify_mc', stdout=StringIO())

    def test_validate(self):
        out = StringIO()
        call_command('validate', seed=3, out=str(self.pasta / 'val'), stdout=out)
        self.assertIn('parseval', out.getvalue())

    def test_subcomandos_registrados(self):
        comandos = get_commands()
        for nome in ('crb_map', 'peb_map', 'detect_map', 'classify_mc', 'ris_compare', 'validate'):
            self.assertEqual(comandos.get(nome), 'simulador')

