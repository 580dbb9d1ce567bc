# Generated by Django 5.2.7 on 2026-10-19 10:12

import django.db.models.deletion
import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Execucao',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False, verbose_name='ID')),
                ('tipo', models.CharField(choices=[('crb_map', 'Mapa de CRB'), ('peb_map', 'Mapa de PEB'), ('detect_map', 'Mapa de detecção'), ('classify_mc', 'Classificação Monte Carlo'), ('ris_compare', 'Comparação com RIS'), ('validate', 'Validação de invariantes')], max_length=20, verbose_name='Tipo')),
                ('seed', models.BigIntegerField(blank=True, null=True, verbose_name='Semente')),
                ('config_hash', models.CharField(max_length=64, verbose_name='Hash da configuração')),
                ('versao', models.CharField(max_length=20, verbose_name='Versão do código')),
                ('status', models.CharField(choices=[('executando', 'Executando'), ('concluida', 'Concluída'), ('falhou', 'Falhou')], default='executando', max_length=20, verbose_name='Status')),
                ('diretorio_saida', models.CharField(max_length=500, verbose_name='Diretório de saída')),
                ('mensagem_erro', models.TextField(blank=True, verbose_name='Mensagem de erro')),
                ('criado_em', models.DateTimeField(auto_now_add=True, verbose_name='Criado em')),
                ('atualizado_em', models.DateTimeField(auto_now=True, verbose_name='Atualizado em')),
            ],
            options={
                'verbose_name': 'Execução',
                'verbose_name_plural': 'Execuções',
                'ordering': ['-criado_em'],
            },
        ),
        migrations.CreateModel(
            name='ArquivoResultado',
            fields=[
                ('id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False, verbose_name='ID')),
                ('nome', models.CharField(max_length=255, verbose_name='Nome')),
                ('sha256', models.CharField(max_length=64, verbose_name='SHA-256')),
                ('linhas', models.PositiveIntegerField(default=0, verbose_name='Linhas')),
                ('criado_em', models.DateTimeField(auto_now_add=True, verbose_name='Criado em')),
                ('execucao', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='arquivos', to='simulador.execucao', verbose_name='Execução')),
            ],
            options={
                'verbose_name': 'Arquivo de resultado',
                'verbose_name_plural': 'Arquivos de resultado',
                'ordering': ['nome'],
                'constraints': [models.UniqueConstraint(fields=('execucao', 'nome'), name='arquivo_unico_por_execucao')],
            },
        ),
    ]
