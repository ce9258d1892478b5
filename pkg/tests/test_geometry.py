# tests/test_geometry.py

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracdense.errors import ComplementEmptyError, DegenerateParameterError, GeometryError
from fracdense.geometry import (
    Ball, Box, Complement, CoveredRegion, Exterior, OpenSetSpec, PointSet, Segment, Space, decompose, enlarge,
    gamma, is_plump, overlap_count,
)

# ==================== γ E CONJUNTOS ABERTOS ====================

pontos_2d = st.tuples(st.floats(-0.5, 1.5, allow_nan=False), st.floats(-0.5, 1.5, allow_nan=False))


@given(pontos_2d, pontos_2d)
@settings(max_examples=200, deadline=None)
def test_gamma_lipschitz(spec2, a, b):
    ga, gb = gamma(spec2, np.array(a)), gamma(spec2, np.array(b))
    assert abs(ga - gb) <= np.linalg.norm(np.subtract(a, b)) + 1e-12


def test_gamma_zero_fora(spec1):
    assert gamma(spec1, [1.5]) == 0.0
    assert gamma(spec1, [0.25]) == pytest.approx(0.25)


def test_uniao_de_bolas():
    spec = OpenSetSpec(2, (Ball((0.0, 0.0), 1.0), Ball((3.0, 0.0), 1.0)), ((-1.0, -1.0), (4.0, 1.0)))
    assert spec.contains(np.array([[0.0, 0.0], [3.0, 0.5], [1.5, 0.0]])).tolist() == [True, True, False]
    assert gamma(spec, [0.0, 0.0]) == pytest.approx(1.0)


def test_from_dict_bbox_escalar():
    spec = OpenSetSpec.from_dict({"dim": 1, "shapes": [{"type": "box", "lo": [0], "hi": [2]}], "bbox": [0, 2]})
    assert spec.bbox == ((0.0,), (2.0,))
    assert spec.segments() == [(0.0, 2.0)]


def test_furos_separam_segmentos(spec1):
    furado = spec1.with_holes([0.5])
    assert furado.segments() == [(0.0, 0.5), (0.5, 1.0)]
    assert not furado.contains(np.array([[0.5]]))[0]


def test_primitiva_desconhecida():
    with pytest.raises(GeometryError):
        OpenSetSpec.from_dict({"dim": 1, "shapes": [{"type": "toro"}], "bbox": [0, 1]})


def test_bbox_degenerada():
    with pytest.raises(GeometryError):
        OpenSetSpec(1, (Box((0.0,), (1.0,)),), ((1.0,), (1.0,)))


# ==================== AMPLIAÇÃO ====================

def test_enlarge_identidades(dec1):
    cubo = dec1.cubes[0]
    assert enlarge(cubo, 1.0).bounds()[0] == pytest.approx(np.array(cubo.center) - cubo.edge / 2)
    e = dec1.epsilon
    duas_vezes = enlarge(cubo, (1 + e) ** 2)
    assert duas_vezes.volume() == pytest.approx((cubo.edge * (1 + e) ** 2) ** dec1.dim)
    with pytest.raises(DegenerateParameterError):
        enlarge(cubo, 0.5)


# ==================== DECOMPOSIÇÃO ====================

def test_decomposicao_whitney(dec1):
    assert np.all(dec1.dists >= dec1.edges)
    assert np.all(dec1.dists <= 4 * math.sqrt(dec1.dim) * dec1.edges + 1e-12)
    lo = dec1.centers[:, 0] - dec1.edges / 2
    ordem = np.argsort(lo)
    hi = (lo + dec1.edges)[ordem]
    assert np.all(hi[:-1] <= lo[ordem][1:] + 1e-15)
    assert dec1.gens.max() <= 10


def test_ampliacao_dupla_dentro_de_omega(dec2):
    for n in range(len(dec2)):
        lo, hi = dec2.box(n, dec2.star2).bounds()
        assert np.all(lo > 0) and np.all(hi < 1)


def test_decomposicao_ordenada_por_geracao(dec2):
    assert np.all(np.diff(dec2.gens) >= 0)
    frame = dec2.to_frame()
    assert list(frame.columns) == ["generation", "center_0", "center_1", "edge", "dist_to_complement"]
    assert len(frame) == len(dec2)


def test_locate_encontra_o_cubo(dec2):
    X = dec2.centers[:50]
    pt, cubo = dec2.locate(X, 1.0)
    assert pt.tolist() == list(range(50))
    assert cubo.tolist() == list(range(50))


@pytest.mark.parametrize("eps", [0.0, -0.1, 0.2])
def test_epsilon_invalido(spec1, eps):
    with pytest.raises(DegenerateParameterError):
        decompose(spec1, eps, 5)


def test_complementar_vazio():
    spec = OpenSetSpec(1, (Space(1),), ((0.0,), (1.0,)))
    with pytest.raises(ComplementEmptyError):
        decompose(spec, 0.1, 5)


def test_sobreposicao_limitada(dec1, dec2):
    rng = np.random.default_rng(3)
    for dec in (dec1, dec2):
        X = rng.uniform(size=(5000, dec.dim))
        assert overlap_count(dec, X).max() <= 12 ** dec.dim


def test_regiao_coberta_recorta_caixa():
    spec = OpenSetSpec(2, (Exterior((0.0, 0.0), 1.0),), ((-2.0, -2.0), (2.0, 2.0)))
    dec = decompose(spec, 0.1, 8)
    regiao = CoveredRegion(dec, 2.0)
    X = np.array([[1.5, 0.0], [0.5, 0.0], [2.5, 0.0]])
    assert regiao.contains(X).tolist() == [True, False, False]


# ==================== κ-PLUMPNESS ====================

def test_disco_fechado_e_plump():
    spec = OpenSetSpec(2, (Exterior((0.0, 0.0), 1.0),), ((-2.0, -2.0), (2.0, 2.0)))
    veredito = is_plump(Complement(spec), 0.5, 200, 200, seed=0)
    assert veredito.plump
    assert veredito.checked == 200 * 200


def test_segmento_e_pontos_nao_sao_plump():
    assert not is_plump(Segment((0.0, 0.0), (1.0, 0.0)), 0.5, 50, 50).plump
    assert not is_plump(PointSet(((0.0, 0.0),)), 0.5, 50, 50).plump


def test_kappa_fora_da_faixa():
    with pytest.raises(DegenerateParameterError):
        is_plump(Segment((0.0,), (1.0,)), 1.0)
