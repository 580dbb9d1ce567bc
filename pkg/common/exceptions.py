"""
Exceções do domínio de sensoriamento.

Todas herdam de SensoriamentoError para que as varreduras em grade
possam mascarar pontos degenerados sem capturar erros de programação.
"""


class SensoriamentoError(ValueError):
    """Erro base dos serviços numéricos."""


class ConfiguracaoInvalida(SensoriamentoError):
    """Parâmetro fora do domínio permitido ou configuração inconsistente."""


class OutOfRange(ConfiguracaoInvalida):
    pass


class AlphabetViolation(ConfiguracaoInvalida):
    pass


class NotUnitModulus(ConfiguracaoInvalida):
    pass


class InvalidPriors(ConfiguracaoInvalida):
    pass


class NotPerfectSquare(ConfiguracaoInvalida):
    pass


class TooFewSymbols(ConfiguracaoInvalida):
    pass


class DimensionMismatch(ConfiguracaoInvalida):
    pass


class PontoDegenerado(SensoriamentoError):
    """Ponto da grade onde a grandeza pedida não é definida."""


class DegeneratePoint(PontoDegenerado):
    pass


class DegenerateTriangle(PontoDegenerado):
    pass


class DegenerateGeometry(PontoDegenerado):
    pass


class NonPositiveDistance(PontoDegenerado):
    pass


class ZeroRegressor(PontoDegenerado):
    pass


class SingularInformation(PontoDegenerado):
    pass


class SingularNuisanceBlock(PontoDegenerado):
    pass
