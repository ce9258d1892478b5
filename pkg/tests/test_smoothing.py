# tests/test_smoothing.py

import numpy as np
import pytest

from fracdense.catalog import catalog_function
from fracdense.errors import (
    DegenerateParameterError, InadmissibleScheduleError, MissingSupportError, TruncationCollarError,
)
from fracdense.geometry import decompose
from fracdense.norms import constant_weight
from fracdense.oracles import check_compact_support, check_uniform_collapse
from fracdense.partition import PartitionOfUnity
from fracdense.smoothing import (
    EtaSchedule, _directions, apply_P, convolution_nodes, make_gn, mollifier, mollify, select_eta,
    translation_modulus, uniform_eta,
)


@pytest.fixture(scope="module")
def pequena(spec1):
    return PartitionOfUnity(decompose(spec1, 0.1, 4))


@pytest.fixture(scope="module")
def bump1(spec1):
    return catalog_function("radial_bump", spec1, {"center": [0.5], "radius": 0.2})


# ==================== MOLLIFICADOR ====================

def test_mollificador_integra_um():
    y = np.linspace(-0.02, 0.02, 40_001)
    assert np.trapezoid(mollifier(0.01, y[:, None]), y) == pytest.approx(1.0, rel=1e-6)
    assert mollifier(0.01, [0.011]) == 0.0
    with pytest.raises(DegenerateParameterError):
        mollifier(0.0, [0.0])


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_nos_de_convolucao(dim):
    xi, omega = convolution_nodes(dim)
    assert omega.sum() == pytest.approx(1.0)
    assert np.all(np.linalg.norm(xi, axis=1) < 1)


def test_mollify_preserva_constante(spec1):
    f = catalog_function("constant", spec1, {"value": 3.0})
    assert mollify(f, 0.01, [0.5]) == pytest.approx(3.0, rel=1e-12)


# ==================== AGENDA η ====================

def test_agenda_uniforme(dec1):
    eta = uniform_eta(dec1, 0.025)
    assert np.allclose(eta.values, 0.025 * dec1.edges)
    assert eta.eta_max == pytest.approx(0.025 * dec1.edges.max())
    assert list(eta.to_frame().columns) == ["cube", "generation", "edge", "eta", "modulus", "threshold", "halvings"]


@pytest.mark.parametrize("fracao", [0.0, 0.05, 0.2])
def test_agenda_uniforme_inadmissivel(dec1, fracao):
    with pytest.raises(InadmissibleScheduleError):
        uniform_eta(dec1, fracao)


def test_agenda_fora_da_faixa(dec1):
    with pytest.raises(InadmissibleScheduleError):
        EtaSchedule.from_values(dec1, 0.06 * dec1.edges)
    with pytest.raises(InadmissibleScheduleError):
        EtaSchedule.from_values(dec1, np.ones(3) * 1e-4)


# ==================== OPERADOR P^η ====================

def test_colar_de_truncamento(pou1, bump1):
    eta = uniform_eta(pou1.decomp, 0.025)
    with pytest.raises(TruncationCollarError):
        apply_P(bump1, pou1, eta, [1.5 * pou1.decomp.tau])
    # fora do modo estrito o ponto é avaliado com os cubos disponíveis
    assert apply_P(bump1, pou1, eta, [1.5 * pou1.decomp.tau], strict=False) == 0.0


def test_agenda_de_outra_decomposicao(pou1, pequena, bump1):
    with pytest.raises(InadmissibleScheduleError):
        apply_P(bump1, pou1, uniform_eta(pequena.decomp, 0.025), [0.5])


def test_colapso_uniforme(pou1, bump1):
    rep = check_uniform_collapse(bump1, pou1, 0.025, samples=200, seed=1)
    assert rep.passed, rep.counterexample
    assert rep.details["max_error"] <= 1e-6


def test_suporte_compacto(pou1, bump1):
    rep = check_compact_support(bump1, pou1, uniform_eta(pou1.decomp, 0.025), samples=1000, seed=2)
    assert rep.passed, rep.counterexample
    assert rep.samples["points"] > 0


def test_P_converge_para_f(pou1, bump1):
    X = np.linspace(0.3, 0.7, 41)[:, None]
    grosso = np.max(np.abs(apply_P(bump1, pou1, uniform_eta(pou1.decomp, 0.04), X) - bump1.values(X)))
    fino = np.max(np.abs(apply_P(bump1, pou1, uniform_eta(pou1.decomp, 0.005), X) - bump1.values(X)))
    assert fino < grosso


# ==================== MÓDULOS DE TRANSLAÇÃO ====================

def test_modulo_da_indicadora(spec1):
    f = catalog_function("indicator_box", spec1, {"lo": [0.0], "hi": [1.0]})
    assert translation_modulus(f, 0.1, 1.0) == pytest.approx(0.2, abs=1e-9)
    assert translation_modulus(f, 0.0, 1.0) == 0.0


def test_modulo_sem_suporte(spec1):
    with pytest.raises(MissingSupportError):
        translation_modulus(catalog_function("coordinate", spec1), 0.1, 2.0)


def test_translacao_de_g_n_e_diagonal(pou1, bump1):
    g = make_gn(bump1, pou1, 0, 0.5, 2.0)
    assert g.dim == 2
    assert translation_modulus(g, [0.0, 0.0], 2.0) == 0.0
    with pytest.raises(DegenerateParameterError):
        translation_modulus(g, [0.1, 0.2], 2.0)


def test_direcoes_sem_opostas():
    dirs = _directions(2, 7)
    assert np.allclose(np.linalg.norm(dirs, axis=1), 1.0)
    produtos = dirs @ dirs.T
    np.fill_diagonal(produtos, 0.0)
    assert np.all(produtos > -1 + 1e-9)
    assert _directions(1, 7).tolist() == [[1.0]]


# ==================== ESCOLHA ADAPTATIVA ====================

def test_select_eta_modo_lp(pequena, bump1, quad):
    k = 2
    agenda = select_eta(bump1, pequena, k, 0.5, 2.0, mode="lp", quad=quad)
    dec = pequena.decomp
    assert np.all(agenda.moduli < agenda.thresholds)
    assert np.allclose(agenda.thresholds, 1.0 / (k * 2.0 ** (np.arange(len(dec)) + 1)))
    assert np.allclose(agenda.values, dec.epsilon / (2 * k) * dec.edges / 2 * 2.0 ** (-agenda.halvings))
    # cubos longe do suporte não são divididos
    lo, hi = bump1.support.bounds()
    longe = [n for n in range(len(dec)) if np.all(~pequena.in_star(n, np.linspace(lo, hi, 200)))]
    assert longe and np.all(agenda.halvings[longe] == 0)


def test_select_eta_com_peso(pequena, bump1, quad):
    agenda = select_eta(bump1, pequena, 1, 0.5, 2.0, mode="weighted_lp", weight=constant_weight(1, 1.0), quad=quad)
    n = np.arange(len(pequena.decomp))
    assert np.allclose(agenda.thresholds, 1.0 / 2.0 ** (n + 1) / 2)
    assert np.all(agenda.moduli < agenda.thresholds)


@pytest.mark.parametrize("kwargs", [
    {"k": 0},
    {"k": 1, "mode": "sobolev"},
    {"k": 1, "mode": "weighted"},
    {"k": 1, "mode": "kernel"},
])
def test_select_eta_parametros_invalidos(pequena, bump1, kwargs):
    with pytest.raises(DegenerateParameterError):
        select_eta(bump1, pequena, s=0.5, p=2.0, **kwargs)


@pytest.mark.slow
def test_select_eta_modo_plain(pequena, bump1, quad):
    agenda = select_eta(bump1, pequena, 1, 0.5, 2.0, mode="plain", quad=quad, seed=3)
    assert np.all(agenda.moduli < agenda.thresholds)
    assert agenda.mode == "plain" and agenda.k == 1
