"""
Serviços de orquestração dos experimentos.

Cada run_* monta as tabelas de um experimento a partir de um
ExperimentConfig validado; ExperimentoService.registrar grava os
arquivos, o manifesto e o registro da execução.
"""

import hashlib
import json
import logging
from pathlib import Path

import numpy as np
from django.db import transaction
from django.utils import timezone

from canal.dominio import PathKind
from canal.services import path_gain
from classificacao.dominio import HypothesisSet
from common.unidades import linear_para_db, rcs_db_para_amplitude
from deteccao.dominio import Combiner
from deteccao.services import detection_row, threshold_from_pfa
from geometria.dominio import ScatterKind
from geometria.services import grid_axes
from laboratorio_stcm import __version__
from limites.services import reference_layout
from metasuperficie.dominio import RisProfile

from . import varredura
from .config import hash_configuracao
from .dominio import ResultManifest, Tabela
from .exports.csv_exporter import (
    ConfusaoCsvExporter,
    CsvExporter,
    DeteccaoCsvExporter,
    MapaCsvExporter,
)
from .exports.excel_exporter import ResumoExcelExporter
from .exports.json_exporter import ManifestoJsonExporter, SidecarJsonExporter
from .models import ArquivoResultado, Execucao
from .validacao import executar_suite

logger = logging.getLogger(__name__)

CABECALHO_MAPA = MapaCsvExporter.CABECALHO
CABECALHO_RIS = ('xi_deg', 'crb_stcm_db', 'crb_ris_db', 'masked_stcm', 'masked_ris')
XI_RIS_GRAUS = tuple(range(0, 81))


def _tabela_mapa(nome, xs, zs, valores, mascara, descricao, em_db=True):
    """Achata um mapa len(zs) x len(xs) em linhas (x, z, value, masked)."""
    linhas = []
    for i, z in enumerate(zs):
        for j, x in enumerate(xs):
            mascarado = bool(mascara[i, j])
            valor = float('nan')
            if not mascarado:
                valor = float(linear_para_db(valores[i, j])) if em_db else float(valores[i, j])
            linhas.append((float(x), float(z), valor, mascarado))
    logger.info('%s: %d pontos, %d mascarados', nome, len(linhas), int(np.sum(mascara)))
    return Tabela(nome, CABECALHO_MAPA, linhas, descricao)


def _empilhar(linhas):
    return np.vstack([v for v, _ in linhas]), np.vstack([m for _, m in linhas])


def _alvos_fixos(config):
    if config.scene:
        return tuple(config.scene)
    return tuple(reference_layout(config.n_targets))


def _exportador(tabela):
    cabecalho = tuple(tabela.cabecalho)
    if cabecalho == MapaCsvExporter.CABECALHO:
        return MapaCsvExporter(tabela)
    if cabecalho == DeteccaoCsvExporter.CABECALHO:
        return DeteccaoCsvExporter(tabela)
    if cabecalho == ConfusaoCsvExporter.CABECALHO:
        return ConfusaoCsvExporter(tabela)
    return CsvExporter(tabela)


def _sha256(caminho):
    digest = hashlib.sha256()
    with open(caminho, 'rb') as arquivo:
        for bloco in iter(lambda: arquivo.read(65536), b''):
            digest.update(bloco)
    return digest.hexdigest()


class ExperimentoService:
    """
    Serviço para execução e registro de experimentos.
    """

    @staticmethod
    def run_crb_map(config, threads=1):
        """
        Mapas de CRB(alpha) e CRB(xi) em dB sobre a grade.

        Com mais de um alvo, os alvos fixos vêm da cena configurada ou do
        layout de referência de |R| alvos.

        Args:
            config: ExperimentConfig
            threads: Processos de trabalho

        Returns:
            list: Tabelas crb_alpha.csv e crb_xi.csv
        """
        scenario = config.scenario
        xs, zs = grid_axes(scenario.geometry, config.grid_resolution)
        fixos = _alvos_fixos(config)
        rcs = rcs_db_para_amplitude(config.rcs_crb_db)
        linhas = varredura.mapa(varredura.linha_crb, xs, zs, threads, scenario, fixos, rcs)

        tabelas = []
        for nome in ('alpha', 'xi'):
            valores, mascara = _empilhar([linha[nome] for linha in linhas])
            tabelas.append(_tabela_mapa(
                f'crb_{nome}.csv', xs, zs, valores, mascara,
                f'CRB de {nome} em dB (rad^2), {len(fixos) + 1} alvo(s)',
            ))
        return tabelas

    @staticmethod
    def run_peb_map(config, threads=1):
        """Mapa de PEB em metros sobre a grade."""
        scenario = config.scenario
        xs, zs = grid_axes(scenario.geometry, config.grid_resolution)
        fixos = _alvos_fixos(config)
        rcs = rcs_db_para_amplitude(config.rcs_crb_db)
        mapa_peb = varredura.mapa_peb(xs, zs, threads, scenario, fixos, rcs)
        logger.info(
            'PEB: pior valor %.3e m, %.1f%% da grade mascarada',
            mapa_peb.worst(), 100 * mapa_peb.fraction_masked,
        )
        return [_tabela_mapa(
            'peb.csv', mapa_peb.xs, mapa_peb.zs, mapa_peb.values, mapa_peb.mask,
            f'PEB em metros, {len(fixos) + 1} alvo(s)', em_db=False,
        )]

    @staticmethod
    def run_detection_map(config, threads=1):
        """
        Mapas de P_D para os dois combinadores e os dois tipos de alvo.

        Returns:
            list: Quatro tabelas deteccao_<combinador>_<tipo>.csv
        """
        scenario = config.scenario
        xs, zs = grid_axes(scenario.geometry, config.grid_resolution)
        limiar = threshold_from_pfa(config.p_fa)
        alvos = (
            (ScatterKind.HUMAN_LIKE, rcs_db_para_amplitude(config.rcs_nue_db)),
            (ScatterKind.OBJECT_LIKE, rcs_db_para_amplitude(config.rcs_obj_db)),
        )

        tabelas = []
        for combiner in Combiner:
            for tipo, rcs in alvos:
                valores, mascara = _empilhar(varredura.mapa(
                    detection_row, xs, zs, threads, scenario, combiner, rcs, limiar
                ))
                linhas = [
                    (float(x), float(z),
                     float('nan') if mascara[i, j] else float(valores[i, j]),
                     bool(mascara[i, j]), tipo, combiner.value)
                    for i, z in enumerate(zs)
                    for j, x in enumerate(xs)
                ]
                nome = f'deteccao_{combiner.value}_{tipo.label}.csv'
                logger.info('%s: %d mascarados', nome, int(np.sum(mascara)))
                tabelas.append(Tabela(
                    nome, DeteccaoCsvExporter.CABECALHO, linhas,
                    f'P_D com p_FA = {config.p_fa:g}',
                ))
        return tabelas

    @staticmethod
    def run_classification_mc(config, threads=1):
        """
        Curvas Pr(decisão | verdade) em função da SNR.

        A SNR de cada linha é a da classe verdadeira; o alvo está a
        distancia_classificacao metros da BS no trajeto SB.
        """
        scenario = config.scenario
        hipoteses = HypothesisSet(
            (0.0,
             rcs_db_para_amplitude(config.rcs_nue_db),
             rcs_db_para_amplitude(config.rcs_obj_db)),
            config.priors,
        )
        ganho = abs(path_gain(
            PathKind.SINGLE_BOUNCE,
            2 * config.classification_distance,
            1.0,
            symbol_energy=scenario.symbol_energy,
            wavelength=scenario.wavelength,
            path_loss_exponent=scenario.path_loss_exponent,
        )) * scenario.fading_std
        argumentos = [
            (indice, snr, hipoteses, config.n_trials, config.seed, ganho)
            for indice, snr in enumerate(config.snr_db)
        ]
        resultados = varredura.executar(varredura.ponto_classificacao, argumentos, threads)

        linhas = []
        for ponto in resultados:
            for snr, tipo, probabilidades in ponto:
                linhas.append((
                    float(snr), tipo, *(float(p) for p in probabilidades),
                    config.n_trials, config.seed,
                ))
        return [Tabela(
            'confusao.csv', ConfusaoCsvExporter.CABECALHO, linhas,
            'Linhas da matriz de confusão por SNR e classe verdadeira',
        )]

    @staticmethod
    def run_ris_compare(config, threads=1):
        """
        CRB(xi) com a RIS especular sobre a grade e comparação pareada
        com a STCM no plano intermediário.
        """
        scenario = config.scenario
        xs, zs = grid_axes(scenario.geometry, config.grid_resolution)
        rcs = rcs_db_para_amplitude(config.rcs_crb_db)
        perfil = RisProfile.especular(scenario.panel.n_elements)
        valores, mascara = _empilhar(
            varredura.mapa(varredura.linha_ris, xs, zs, threads, scenario, perfil, rcs)
        )
        mapa = _tabela_mapa(
            'crb_ris_xi.csv', xs, zs, valores, mascara,
            'CRB de xi em dB com RIS de perfil fixo',
        )

        pares = varredura.executar(
            varredura.ponto_ris,
            [(np.deg2rad(grau), scenario, rcs) for grau in XI_RIS_GRAUS],
            threads,
        )
        linhas = []
        for grau, (stcm, mascara_stcm, ris, mascara_ris) in zip(XI_RIS_GRAUS, pares):
            stcm_db = float('nan') if mascara_stcm else float(linear_para_db(stcm))
            ris_db = float('nan') if mascara_ris else float(linear_para_db(ris))
            linhas.append((float(grau), stcm_db, ris_db, bool(mascara_stcm), bool(mascara_ris)))
        comparacao = Tabela(
            'ris_compare.csv', CABECALHO_RIS, linhas,
            'CRB de xi em dB, STCM contra RIS, alvo no plano intermediário',
        )
        return [mapa, comparacao]

    @staticmethod
    def run_validation(config, threads=1):
        """Suíte de invariantes; uma linha por verificação."""
        resultados = executar_suite(config)
        linhas = [(r.nome, r.aprovado, r.detalhe) for r in resultados]
        return [Tabela(
            'validacao.csv', ('check', 'passed', 'detail'), linhas,
            'Resultado da suíte de invariantes',
        )]

    @classmethod
    def gerar_tabelas(cls, config, threads=1):
        executores = {
            'crb_map': cls.run_crb_map,
            'peb_map': cls.run_peb_map,
            'detect_map': cls.run_detection_map,
            'classify_mc': cls.run_classification_mc,
            'ris_compare': cls.run_ris_compare,
            'validate': cls.run_validation,
        }
        return executores[config.kind](config, threads)

    @staticmethod
    def registrar(config, tabelas, iniciado_em, xlsx=False):
        """
        Grava as tabelas, os sidecars e, por último, o manifesto.

        Um manifesto antigo no diretório é removido antes de qualquer
        gravação; se algo falhar, a execução fica como 'falhou' e não
        há manifesto.

        Args:
            config: ExperimentConfig
            tabelas: Lista de Tabela
            iniciado_em: Instante de início
            xlsx: Grava também o resumo em Excel

        Returns:
            tuple: (Execucao, ResultManifest)
        """
        config_hash = hash_configuracao(config.raw)
        pasta = Path(config.output_dir)
        pasta.mkdir(parents=True, exist_ok=True)
        (pasta / 'manifest.json').unlink(missing_ok=True)

        execucao = Execucao.objects.create(
            tipo=config.kind,
            seed=config.seed,
            config_hash=config_hash,
            versao=__version__,
            diretorio_saida=str(pasta),
        )
        try:
            saidas = {}
            contagens = {}
            for tabela in tabelas:
                caminho = _exportador(tabela).exportar(pasta)
                saidas[caminho.name] = _sha256(caminho)
                contagens[caminho.name] = len(tabela.linhas)
                sidecar = SidecarJsonExporter(
                    tabela, config.raw, __version__, config_hash
                ).exportar(pasta)
                saidas[sidecar.name] = _sha256(sidecar)
                contagens[sidecar.name] = 0
            if xlsx:
                resumo = ResumoExcelExporter(
                    tabelas, f'{config.kind} ({config_hash[:12]})'
                ).exportar(pasta)
                saidas[resumo.name] = _sha256(resumo)
                contagens[resumo.name] = 0

            manifesto = ResultManifest(
                config_hash=config_hash,
                code_version=__version__,
                seed=config.seed,
                started_at=iniciado_em.isoformat(),
                finished_at=timezone.now().isoformat(),
                outputs=dict(sorted(saidas.items())),
            )
            with transaction.atomic():
                ArquivoResultado.objects.bulk_create([
                    ArquivoResultado(
                        execucao=execucao, nome=nome, sha256=sha, linhas=contagens[nome]
                    )
                    for nome, sha in manifesto.outputs.items()
                ])
                execucao.concluir()
                ManifestoJsonExporter(manifesto).exportar(pasta)
        except Exception as exc:
            execucao.falhar(exc)
            raise

        logger.info(
            'Execução %s concluída: %d arquivos em %s',
            execucao.id, len(manifesto.outputs), pasta,
        )
        return execucao, manifesto

    @classmethod
    def executar(cls, config, threads=1, xlsx=False):
        """
        Executa um experimento de ponta a ponta.

        Returns:
            tuple: (Execucao, ResultManifest, lista de Tabela)
        """
        iniciado_em = timezone.now()
        logger.info(
            'Iniciando %s (hash %s, %d processo(s))',
            config.kind, hash_configuracao(config.raw)[:12], threads,
        )
        tabelas = cls.gerar_tabelas(config, threads)
        execucao, manifesto = cls.registrar(config, tabelas, iniciado_em, xlsx)
        return execucao, manifesto, tabelas

    @staticmethod
    def verificar_manifesto(diretorio):
        """
        Confere os checksums listados no manifesto de um diretório.

        Returns:
            list: Nomes de arquivos ausentes ou com checksum divergente
        """
        pasta = Path(diretorio)
        with open(pasta / 'manifest.json', encoding='utf-8') as arquivo:
            manifesto = json.load(arquivo)
        divergentes = []
        for nome, sha in manifesto['outputs'].items():
            caminho = pasta / nome
            if not caminho.is_file() or _sha256(caminho) != sha:
                divergentes.append(nome)
        return divergentes
