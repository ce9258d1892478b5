# tests/test_quadrature.py

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracdense.errors import DegenerateParameterError
from fracdense.quadrature import (
    DIVERGENT, FINITE, INCONCLUSIVE, QuadratureConfig, compensated_sum, geometric_verdict, graded_rule_1d,
    layered_result, seed_streams, sphere_area, tensor_rule,
)


# ==================== CONFIGURAÇÃO ====================

def test_config_invalida_lista_tudo():
    with pytest.raises(DegenerateParameterError) as exc:
        QuadratureConfig(method="trapezio", resolution=0)
    assert "trapezio" in str(exc.value)
    assert "resolução" in str(exc.value)


def test_config_from_dict_ignora_chaves_extras():
    q = QuadratureConfig.from_dict({"resolution": 64, "comentario": "x"})
    assert q.resolution == 64 and q.order == 32


def test_coarser():
    q = QuadratureConfig(resolution=256, samples=1000, band=1e-3).coarser(4)
    assert (q.resolution, q.samples) == (64, 250)
    assert q.band == pytest.approx(4e-3)


def test_metodo_automatico():
    q = QuadratureConfig()
    assert q.method_for(1) == "tensor-grid"
    assert q.method_for(2) == "monte-carlo"


# ==================== REGRAS ====================

def test_area_da_esfera():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


@given(st.floats(0.05, 0.95))
@settings(max_examples=50, deadline=None)
def test_regra_graduada_integra_degrau(c):
    xs, ws = graded_rule_1d(0.0, 1.0, (c,))
    assert compensated_sum(ws * (xs < c)) == pytest.approx(c, abs=1e-12)


def test_regra_tensorial_volume():
    X, w = tensor_rule([0.0, -1.0], [2.0, 1.0], 32, 8)
    assert w.sum() == pytest.approx(4.0)
    assert compensated_sum(w * X[:, 0] ** 2) == pytest.approx(16 / 3)


def test_sementes_reprodutiveis():
    a = [g.uniform() for g in seed_streams(7, 3)]
    b = [g.uniform() for g in seed_streams(7, 3)]
    assert a == b
    assert len(set(a)) == 3


# ==================== VEREDITO GEOMÉTRICO ====================

def test_serie_geometrica_finita():
    termos = 0.5 ** np.arange(20)
    veredito, soma, cauda = geometric_verdict(termos)
    assert veredito == FINITE
    assert soma + cauda == pytest.approx(2.0, rel=1e-12)


def test_serie_constante_diverge():
    veredito, soma, _ = geometric_verdict(np.ones(10))
    assert veredito == DIVERGENT and soma == math.inf


def test_serie_mista_inconclusiva():
    veredito, _, cauda = geometric_verdict([1.0, 0.5, 0.6, 0.3])
    assert veredito == INCONCLUSIVE and math.isnan(cauda)


def test_resultado_em_camadas():
    res = layered_result([0.5 ** np.arange(30), np.ones(5)], "teste", "camadas")
    assert res.verdict == DIVERGENT and not res.finite
    res = layered_result([0.5 ** np.arange(30)], "teste", "camadas")
    assert res.value == pytest.approx(2.0) and res.finite
