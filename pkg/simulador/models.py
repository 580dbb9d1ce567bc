import uuid

from django.db import models


class Execucao(models.Model):
    """
    Registro de uma execução de experimento e de seu manifesto.
    """
    TIPO_CHOICES = [
        ('crb_map', 'Mapa de CRB'),
        ('peb_map', 'Mapa de PEB'),
        ('detect_map', 'Mapa de detecção'),
        ('classify_mc', 'Classificação Monte Carlo'),
        ('ris_compare', 'Comparação com RIS'),
        ('validate', 'Validação de invariantes'),
    ]

    STATUS_CHOICES = [
        ('executando', 'Executando'),
        ('concluida', 'Concluída'),
        ('falhou', 'Falhou'),
    ]

    id = models.UUIDField(
        primary_key=True,
        default=uuid.uuid4,
        editable=False,
        verbose_name='ID'
    )
    tipo = models.CharField(
        max_length=20, choices=TIPO_CHOICES, verbose_name='Tipo'
    )
    seed = models.BigIntegerField(null=True, blank=True, verbose_name='Semente')
    config_hash = models.CharField(
        max_length=64, verbose_name='Hash da configuração'
    )
    versao = models.CharField(max_length=20, verbose_name='Versão do código')
    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default='executando',
        verbose_name='Status'
    )
    diretorio_saida = models.CharField(
        max_length=500, verbose_name='Diretório de saída'
    )
    mensagem_erro = models.TextField(blank=True, verbose_name='Mensagem de erro')
    criado_em = models.DateTimeField(
        auto_now_add=True, verbose_name='Criado em')
    atualizado_em = models.DateTimeField(
        auto_now=True, verbose_name='Atualizado em')

    class Meta:
        verbose_name = 'Execução'
        verbose_name_plural = 'Execuções'
        ordering = ['-criado_em']

    def __str__(self):
        return f"{self.get_tipo_display()} ({self.get_status_display()})"

    def concluir(self):
        self.status = 'concluida'
        self.save(update_fields=['status', 'atualizado_em'])

    def falhar(self, mensagem):
        self.status = 'falhou'
        self.mensagem_erro = str(mensagem)
        self.save(update_fields=['status', 'mensagem_erro', 'atualizado_em'])


class ArquivoResultado(models.Model):
    """Arquivo gerado por uma execução, com checksum."""
    id = models.UUIDField(
        primary_key=True,
        default=uuid.uuid4,
        editable=False,
        verbose_name='ID'
    )
    execucao = models.ForeignKey(
        Execucao,
        on_delete=models.CASCADE,
        related_name='arquivos',
        verbose_name='Execução'
    )
    nome = models.CharField(max_length=255, verbose_name='Nome')
    sha256 = models.CharField(max_length=64, verbose_name='SHA-256')
    linhas = models.PositiveIntegerField(default=0, verbose_name='Linhas')
    criado_em = models.DateTimeField(
        auto_now_add=True, verbose_name='Criado em')

    class Meta:
        verbose_name = 'Arquivo de resultado'
        verbose_name_plural = 'Arquivos de resultado'
        ordering = ['nome']
        constraints = [
            models.UniqueConstraint(
                fields=['execucao', 'nome'], name='arquivo_unico_por_execucao'
            ),
        ]

    def __str__(self):
        return self.nome
