# tests/test_catalog.py

import numpy as np
import pytest

from fracdense.catalog import FUNCTIONS, catalog_function, support_is_compact
from fracdense.errors import DegenerateParameterError


def test_extensao_por_zero(spec1):
    f = catalog_function("constant", spec1, {"value": 2.0})
    assert f.values(np.array([[0.5], [1.5], [-0.1]])).tolist() == [2.0, 0.0, 0.0]


def test_tenda_e_produto(spec1):
    tenda = catalog_function("hat", spec1, {"lo": [0.2], "hi": [0.8]})
    assert tenda([0.5]) == pytest.approx(1.0)
    assert tenda([0.2]) == 0.0 and tenda([0.9]) == 0.0
    assert tenda.breakpoints == (0.2, 0.5, 0.8)
    prod = catalog_function("product", spec1)
    assert prod([0.25]) == pytest.approx(0.1875)
    assert prod.lipschitz == pytest.approx(1.0)


def test_indicadora_declara_salto(spec1, spec2):
    f = catalog_function("indicator_box", spec1, {"lo": [0.0], "hi": [0.5]})
    # só a face em 0.5 fica dentro de Ω
    assert f.jump_perimeter == pytest.approx(1.0)
    g = catalog_function("indicator_box", spec2)
    assert g.jump_perimeter == pytest.approx(1.0)
    assert g([0.25, 0.25]) == 1.0 and g([0.75, 0.25]) == 0.0


def test_bump_radial(spec2):
    f = catalog_function("radial_bump", spec2, {"center": [0.5, 0.5], "radius": 0.3})
    assert f([0.5, 0.5]) == pytest.approx(1.0)
    assert f([0.5, 0.85]) == 0.0
    assert support_is_compact(f)
    anel = catalog_function("radial_bump", spec2, {"center": [0.5, 0.5], "radius": 0.4, "inner": 0.1})
    assert anel([0.5, 0.55]) == 0.0
    assert anel([0.5, 0.75]) > 0


def test_algebra(spec1):
    a = catalog_function("coordinate", spec1)
    b = catalog_function("constant", spec1, {"value": 1.0})
    X = np.array([[0.25], [0.75]])
    assert (a - b).values(X) == pytest.approx([-0.75, -0.25])
    assert (2 * a).values(X) == pytest.approx([0.5, 1.5])
    assert (-a).lipschitz == pytest.approx(1.0)
    assert (a + b).lipschitz == pytest.approx(1.0)


def test_restricao_e_permutacao(spec2):
    f = catalog_function("coordinate", spec2)
    r = f.restricted(lambda X: X[:, 0] < 0.5)
    assert r.values(np.array([[0.25, 0.5], [0.75, 0.5]])).tolist() == [0.25, 0.0]
    g = f.permuted([1, 0])
    assert g([0.2, 0.7]) == pytest.approx(0.7)


@pytest.mark.parametrize("nome,params", [
    ("desconhecida", {}),
    ("hat", {"lo": [0.8], "hi": [0.2]}),
    ("distance_power", {"beta": -1.0}),
    ("radial_bump", {"radius": 0.5, "inner": 0.6}),
    ("constant", {"valor": 1.0}),
])
def test_parametros_invalidos(spec1, nome, params):
    with pytest.raises(DegenerateParameterError):
        catalog_function(nome, spec1, params)


def test_catalogo_completo():
    assert set(FUNCTIONS) == {"constant", "coordinate", "hat", "indicator_box", "distance_power", "product",
                              "radial_bump"}
