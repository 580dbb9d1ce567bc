"""
Tipos do simulador: configuração validada de um experimento, tabelas de
resultado e manifesto.
"""

from dataclasses import dataclass, field

from canal.dominio import SensingScenario


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    """
    Configuração completa e validada de uma execução.

    raw guarda o dicionário de configuração já mesclado, que é o que
    entra no hash e no sidecar JSON.
    """
    scenario: SensingScenario
    scene: tuple
    kind: str
    n_targets: int
    grid_resolution: float
    n_trials: int
    seed: int | None
    output_dir: str
    p_fa: float
    priors: tuple
    rcs_nue_db: float
    rcs_obj_db: float
    rcs_crb_db: float
    snr_db: tuple
    classification_distance: float
    raw: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Tabela:
    """Tabela de saída: nome do arquivo, cabeçalho e linhas."""
    nome: str
    cabecalho: tuple
    linhas: list
    descricao: str = ''


@dataclass(frozen=True)
class ResultManifest:
    config_hash: str
    code_version: str
    seed: int | None
    started_at: str
    finished_at: str
    outputs: dict
