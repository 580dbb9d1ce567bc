from pathlib import Path

from django import forms
from django.core.exceptions import ValidationError

from .models import Execucao

# Experimentos que sorteiam ruído ou desvanecimento
EXPERIMENTOS_ESTOCASTICOS = {'classify_mc', 'validate'}


class ExperimentoForm(forms.Form):
    """
    Validação dos campos escalares da configuração de um experimento.

    Os nomes dos campos seguem as chaves do JSON de configuração; a
    montagem do dicionário plano fica em simulador.config.
    """
    tipo = forms.ChoiceField(choices=Execucao.TIPO_CHOICES)
    alvos = forms.TypedChoiceField(
        choices=[(1, '1'), (2, '2'), (10, '10')], coerce=int
    )
    resolucao_grade = forms.FloatField()
    n_tentativas = forms.IntegerField(min_value=1)
    seed = forms.IntegerField(min_value=0, required=False)
    pfa = forms.FloatField()
    m_f = forms.IntegerField(min_value=0)
    modo_comprimento_onda = forms.ChoiceField(
        choices=[('exact', 'Exato por harmônico'), ('carrier', 'Portadora')]
    )
    n_x = forms.IntegerField(min_value=1)
    n_y = forms.IntegerField(min_value=1)
    comprimento_codigo = forms.IntegerField(min_value=2)
    periodo = forms.FloatField()
    esquema = forms.ChoiceField(choices=[('PM', 'Fase'), ('AM', 'Amplitude')])
    antenas = forms.IntegerField(min_value=1)
    potencia_total_dbm = forms.FloatField()
    ruido_dbm = forms.FloatField()
    frequencia_portadora = forms.FloatField()
    expoente_perda = forms.FloatField()
    sigma_nu = forms.FloatField(min_value=0)
    distancia_classificacao = forms.FloatField()
    arquivo_codigo = forms.CharField(required=False)

    def _positivo(self, campo):
        valor = self.cleaned_data.get(campo)
        if valor is not None and not valor > 0:
            raise ValidationError('O valor deve ser positivo.')
        return valor

    def clean_resolucao_grade(self):
        return self._positivo('resolucao_grade')

    def clean_periodo(self):
        return self._positivo('periodo')

    def clean_frequencia_portadora(self):
        return self._positivo('frequencia_portadora')

    def clean_expoente_perda(self):
        return self._positivo('expoente_perda')

    def clean_distancia_classificacao(self):
        return self._positivo('distancia_classificacao')

    def clean_pfa(self):
        pfa = self.cleaned_data.get('pfa')
        if pfa is not None and not 0.0 < pfa < 1.0:
            raise ValidationError('A probabilidade de falso alarme deve estar em (0, 1).')
        return pfa

    def clean_arquivo_codigo(self):
        caminho = self.cleaned_data.get('arquivo_codigo')
        if caminho and not Path(caminho).is_file():
            raise ValidationError(f'Arquivo de codificação não encontrado: {caminho}')
        return caminho

    def clean_antenas(self):
        antenas = self.cleaned_data.get('antenas')
        raiz = int(round(antenas ** 0.5))
        if raiz * raiz != antenas:
            raise ValidationError(
                'O número de antenas deve ser quadrado perfeito (pilotos DFT).'
            )
        return antenas

    def clean(self):
        cleaned_data = super().clean()
        tipo = cleaned_data.get('tipo')
        comprimento = cleaned_data.get('comprimento_codigo')
        esquema = cleaned_data.get('esquema')

        if tipo in EXPERIMENTOS_ESTOCASTICOS and cleaned_data.get('seed') is None:
            raise ValidationError({
                'seed': 'Experimentos estocásticos exigem uma semente explícita.'
            })

        if (esquema == 'PM' and comprimento and comprimento % 2
                and not cleaned_data.get('arquivo_codigo')):
            raise ValidationError({
                'comprimento_codigo': (
                    'A codificação PM padrão exige comprimento par.'
                )
            })

        return cleaned_data
