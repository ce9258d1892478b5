# tests/test_oracles.py

import json
import math

import numpy as np
import pytest

from fracdense.catalog import catalog_function
from fracdense.errors import DegenerateParameterError
from fracdense.geometry import Box, OpenSetSpec
from fracdense.norms import SobolevParams
from fracdense.oracles import (
    brute_gagliardo, calibrated_c, check_brute_agreement, check_gn_bound, check_lemma_xy, check_overlap,
    check_partition_sum, lemma_constant,
)
from fracdense.partition import lipschitz_constant
from fracdense.quadrature import sphere_area


def _meio(dec):
    return int(np.argmin(np.linalg.norm(dec.centers - 0.5, axis=1)))


# ==================== LEMA |x − y| ≥ c|x − x_n| ====================

def test_constante_do_lema(dec1, dec2):
    assert lemma_constant(dec1) == pytest.approx(0.1 / 1.1)
    assert lemma_constant(dec2) == pytest.approx(0.1 / (0.1 + math.sqrt(2)))


@pytest.mark.parametrize("nome", ["dec1", "dec2"])
def test_lema_vale_com_c(nome, request):
    dec = request.getfixturevalue(nome)
    rep = check_lemma_xy(dec, _meio(dec), samples=20_000, seed=1)
    assert rep.passed, rep.counterexample


@pytest.mark.parametrize("nome", ["dec1", "dec2"])
def test_lema_falha_com_constante_maior(nome, request):
    dec = request.getfixturevalue(nome)
    c = 2 * lemma_constant(dec) * math.sqrt(dec.dim)
    rep = check_lemma_xy(dec, _meio(dec), samples=20_000, seed=1, c=c)
    assert not rep.passed
    contra = rep.counterexample
    assert contra["lhs"] < contra["rhs"]


# ==================== CONSTANTE CALIBRADA ====================

def test_constante_calibrada():
    d, p, s, c_star = 1, 2.0, 0.5, 3.0
    esperado = 2 ** p * max(1.0, c_star ** (s * p) * sphere_area(d) * (1 / (p - s * p) + 1 / (s * p)))
    assert calibrated_c(d, p, s, c_star) == pytest.approx(esperado)
    assert calibrated_c(d, p, s, 0.0) == pytest.approx(2 ** p)


def test_cota_de_g_n(pou1, quad):
    f = catalog_function("coordinate", pou1.decomp.spec)
    params = SobolevParams(0.5, 2.0, 1)
    cubos = [n for n in range(len(pou1.decomp)) if pou1.decomp.gens[n] <= 3]
    c = calibrated_c(1, 2.0, 0.5, lipschitz_constant(pou1, 500, 0, cubos))
    rep = check_gn_bound(f, pou1, cubos[0], params, c, quad)
    assert rep.passed, rep.counterexample
    assert rep.details["lhs"] <= c * rep.details["rhs"]


# ==================== CHECAGENS ESTRUTURAIS ====================

def test_sobreposicao(dec2):
    rep = check_overlap(dec2, samples=5000, seed=4)
    assert rep.passed
    assert rep.details["max_count"] <= 144
    assert sum(rep.details["histogram"]) == 5000


def test_soma_da_particao(pou2):
    rep = check_partition_sum(pou2, samples=2000, seed=5)
    assert rep.passed
    assert rep.samples["points"] > 0


def test_relatorio_serializavel(dec1):
    rep = check_overlap(dec1, samples=100, seed=0)
    dados = json.loads(rep.to_json())
    assert dados["name"] == "overlap" and dados["seed"] == 0


# ==================== FORÇA BRUTA ====================

def test_brute_coordenada(spec1):
    res = brute_gagliardo(catalog_function("coordinate", spec1), spec1, SobolevParams(0.5, 2.0, 1), 128)
    assert res.value == pytest.approx(1.0, abs=res.error_estimate + 1e-3)


def test_brute_so_em_dimensao_baixa():
    spec3 = OpenSetSpec(3, (Box((0.0,) * 3, (1.0,) * 3),), ((0.0,) * 3, (1.0,) * 3))
    f = catalog_function("constant", spec3)
    with pytest.raises(DegenerateParameterError):
        brute_gagliardo(f, spec3, SobolevParams(0.5, 2.0, 3))


@pytest.mark.parametrize("nome,params", [
    ("hat", {"lo": [0.2], "hi": [0.8]}),
    ("indicator_box", {"lo": [0.0], "hi": [0.5]}),
    ("product", {}),
])
def test_concordancia_com_forca_bruta(spec1, quad, nome, params):
    f = catalog_function(nome, spec1, params)
    rep = check_brute_agreement(f, spec1, SobolevParams(0.3, 1.0, 1), 128, quad)
    assert rep.passed, rep.counterexample
