from django.contrib import admin

from .models import ArquivoResultado, Execucao


class ArquivoResultadoInline(admin.TabularInline):
    model = ArquivoResultado
    extra = 0
    readonly_fields = ['nome', 'sha256', 'linhas', 'criado_em']
    can_delete = False


@admin.register(Execucao)
class ExecucaoAdmin(admin.ModelAdmin):
    list_display = ['tipo', 'status', 'seed', 'versao', 'criado_em']
    list_filter = ['tipo', 'status']
    search_fields = ['config_hash', 'diretorio_saida']
    readonly_fields = ['config_hash', 'versao', 'criado_em', 'atualizado_em']
    inlines = [ArquivoResultadoInline]
