# tests/test_norms.py

import math

import numpy as np
import pytest

from fracdense.catalog import catalog_function
from fracdense.errors import DegenerateParameterError
from fracdense.geometry import Box, OpenSetSpec, Space
from fracdense.norms import (
    SobolevParams, constant_weight, gagliardo, hardy_term, kernel_admissibility, local_comparability, lp_norm,
    make_kernel, make_weight, power_kernel, weight_condition, weighted_gagliardo, x_norm, zero_kernel,
)
from fracdense.quadrature import DIVERGENT, FINITE, QuadratureConfig
from fracdense.smoothing import weighted_constants

SP1 = SobolevParams(0.5, 2.0, 1)


# ==================== PARÂMETROS ====================

@pytest.mark.parametrize("s,p", [(0.0, 2.0), (1.0, 2.0), (0.5, 0.5), (0.5, math.inf)])
def test_parametros_invalidos(s, p):
    with pytest.raises(DegenerateParameterError):
        SobolevParams(s, p)


def test_expoente():
    assert SobolevParams(0.25, 2.0, 2).exponent == pytest.approx(2.5)


# ==================== L^p ====================

def test_lp_constante(spec1, quad):
    f = catalog_function("constant", spec1, {"value": 2.0})
    assert lp_norm(f, spec1, 2, None, quad).value == pytest.approx(2.0, rel=1e-12)


def test_lp_com_peso(spec1, quad):
    f = catalog_function("constant", spec1, {"value": 2.0})
    w = make_weight("power", 1, {"beta": 1.0, "center": [0.0]})
    # ∫ 4x dx = 2
    assert lp_norm(f, spec1, 2, w, quad).value == pytest.approx(math.sqrt(2.0), rel=1e-10)


# ==================== SEMINORMAS ====================

def test_gagliardo_da_coordenada(spec1, quad):
    # |x − y|^2 / |x − y|^{1+1} integra 1 em (0, 1)²
    res = gagliardo(catalog_function("coordinate", spec1), spec1, SP1, quad)
    assert res.finite
    assert res.value == pytest.approx(1.0, rel=0.02)
    assert res.error_estimate >= 0


def test_gagliardo_da_indicadora(spec1, quad):
    f = catalog_function("indicator_box", spec1, {"lo": [0.0], "hi": [0.5]})
    s = 0.3
    exato = 2 / (s * (1 - s)) * (2 * 0.5 ** (1 - s) - 1)
    res = gagliardo(f, spec1, SobolevParams(s, 1.0, 1), quad)
    assert exato == pytest.approx(2.2013, abs=1e-4)
    assert res.value == pytest.approx(exato, rel=0.03)


def test_gagliardo_de_constante_e_zero(spec1, quad):
    res = gagliardo(catalog_function("constant", spec1, {"value": 3.0}), spec1, SP1, quad)
    assert res.value == pytest.approx(0.0, abs=1e-12)


def test_peso_constante_nao_altera(spec1, quad):
    f = catalog_function("product", spec1)
    a = gagliardo(f, spec1, SP1, quad)
    b = weighted_gagliardo(f, spec1, SP1, constant_weight(1, 1.0), quad)
    assert b.value == pytest.approx(a.value, rel=1e-9)


def test_x_norm_com_nucleo_nulo(spec1, quad):
    f = catalog_function("product", spec1)
    assert x_norm(f, spec1, 2, zero_kernel(), quad).value == pytest.approx(lp_norm(f, spec1, 2, None, quad).value)


def test_massa_perto_da_diagonal_nao_diverge(spec1):
    # bump estreito: quase toda a massa do integrando fica a poucas faixas da diagonal
    f = catalog_function("radial_bump", spec1, {"center": [0.5], "radius": 0.02})
    quad = QuadratureConfig(resolution=128, order=16, band=0.005)
    res = gagliardo(f, spec1, SP1, quad)
    assert res.verdict == FINITE
    assert 0 < res.value < math.inf
    assert math.isfinite(res.error_estimate)


# ==================== HARDY ====================

def test_hardy_do_produto(spec1, quad):
    # 2∫_0^{1/2} x(1 − x)^2 dx
    res = hardy_term(catalog_function("product", spec1), spec1, SP1, quad)
    assert res.verdict == FINITE
    assert res.value == pytest.approx(22 / 192, rel=1e-6)


def test_hardy_da_constante_diverge(spec1, quad):
    # sp = 1: ∫ γ^{-1} diverge junto à fronteira
    res = hardy_term(catalog_function("constant", spec1), spec1, SP1, quad)
    assert res.verdict == DIVERGENT


# ==================== PESOS ====================

@pytest.fixture(scope="module")
def reta():
    return OpenSetSpec(1, (Space(1),), ((-1.0,), (1.0,)))


@pytest.mark.parametrize("beta,esperado", [
    (-1.5, DIVERGENT), (-1.0, DIVERGENT), (-0.99, FINITE), (-0.5, FINITE), (0.0, FINITE),
    (0.5, FINITE), (1.0, DIVERGENT), (1.5, DIVERGENT),
])
def test_condicao_do_peso_potencia(reta, beta, esperado):
    # em ℝ com sp = 1: finito exatamente para −1 < β < 1
    w = make_weight("power", 1, {"beta": beta}, "locally-comparable")
    assert weight_condition(w, reta, SP1).verdict == esperado


def test_comparabilidade_local():
    w = make_weight("power", 1, {"beta": 0.5, "center": [0.5]}, "continuous", [(0.5,)])
    assert not local_comparability(w, Box((0.4,), (0.6,))).comparable
    longe = local_comparability(w, Box((0.6,), (0.8,)))
    assert longe.comparable and longe.constant >= 1.0


def test_dominio_reduzido(spec1):
    w = make_weight("power", 1, {"beta": 0.5, "center": [0.5]}, "continuous", [(0.5,)])
    assert w.reduced_domain(spec1).segments() == [(0.0, 0.5), (0.5, 1.0)]


def test_constante_D_forma_fechada(dec1):
    # w ≡ 1 em (0, 1), sp = 1: ∫_{Ω∖Q**} |y − x_n|^{-2} = 2/r0 − 1/x_n − 1/(1 − x_n)
    w = constant_weight(1, 1.0)
    c = dec1.epsilon / (dec1.epsilon + 1.0)
    for n in (0, int(np.argmin(dec1.centers[:, 0])), len(dec1) - 1):
        xn, l = dec1.centers[n, 0], dec1.edges[n]
        r0 = dec1.star2 * l / 2
        integral = 2 / r0 - 1 / xn - 1 / (1 - xn)
        C, D = weighted_constants(dec1, w, n, 0.5, 2.0)
        assert C == pytest.approx(1.0)
        assert D == pytest.approx(c ** -2 * integral, rel=1e-7)


# ==================== NÚCLEOS ====================

def test_admissibilidade_r_menos_2():
    K = power_kernel(2.0)
    res = kernel_admissibility(K, 1, 2.0)
    assert res.verdict == FINITE
    assert res.value == pytest.approx(2.0, rel=1e-6)
    assert K.admissibility_closed_form(1, 2.0) == pytest.approx(2.0)


@pytest.mark.parametrize("alpha", [1.0, 3.0, 3.5])
def test_nucleo_potencia_fora_da_faixa(alpha):
    K = power_kernel(alpha)
    assert kernel_admissibility(K, 1, 2.0).verdict == DIVERGENT
    assert K.admissibility_closed_form(1, 2.0) == math.inf


def test_nucleo_fracionario_herda_parametros():
    K = make_kernel("fractional", {}, SP1)
    assert K.admissibility_closed_form(1, 2.0) == pytest.approx(1 / (3 - 2) + 1 / (2 - 1))


def test_nucleo_desconhecido():
    with pytest.raises(DegenerateParameterError):
        make_kernel("gaussiano")
