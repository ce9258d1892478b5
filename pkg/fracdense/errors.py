# fracdense/errors.py
"""Hierarquia de exceções do pacote.

Todas herdam de ``FracDenseError`` para que a CLI e o dashboard possam capturar
qualquer falha numérica num único ``except``.
"""


class FracDenseError(Exception):
    """Erro base do pacote."""


class ComplementEmptyError(FracDenseError):
    """Ω = ℝ^d: não existe decomposição de Whitney."""


class DegenerateParameterError(FracDenseError):
    """Parâmetro fora da faixa admissível (ε, s, p, δ, frações de η...)."""


class GeometryError(FracDenseError):
    """Descrição geométrica inconsistente (dimensão, caixa envolvente, primitivas)."""


class UndefinedRegionError(FracDenseError):
    """Ponto fora da região coberta pela família truncada (Σσ_m = 0)."""


class TruncationCollarError(FracDenseError):
    """O cálculo depende de cubos além da geração máxima G."""


class InadmissibleScheduleError(FracDenseError):
    """Algum η(Q) viola η(Q) < (ε/2)·l(Q)."""


class MissingSupportError(FracDenseError):
    """Função sem suporte compacto declarado onde ele é exigido."""


class IterationCapError(FracDenseError):
    """O laço de bisseção de η atingiu o limite de iterações."""

    def __init__(self, message, cubes=None):
        super().__init__(message)
        self.cubes = list(cubes or [])


class DivergentIntegralError(FracDenseError):
    """Integral de admissibilidade (peso, núcleo, D_n) detectada como divergente."""


class PreconditionError(FracDenseError):
    """Hipótese do experimento não satisfeita (ex.: termo de Hardy divergente)."""


class ConfigError(FracDenseError):
    """Configuração inválida; ``violations`` lista todas as violações encontradas."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "configuração inválida")
